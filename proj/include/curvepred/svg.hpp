#pragma once

#include <string>

namespace curvepred {

// Renders an evaluation CSV (record_id,true_final,predicted,...) as a
// predicted-vs-ground-truth line chart, or a history CSV (t,...,reward,source)
// as a reward trace. The chart kind is detected from the header. Output is a
// pure function of the input file.
void plot_csv(const std::string& csv_path, const std::string& svg_path);

} // namespace curvepred

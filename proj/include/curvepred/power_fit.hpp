#pragma once

#include <span>
#include <utility>

namespace curvepred {

// Constrained least-squares fit of g(x) = alpha * x^beta to the first-k
// epoch accuracies, with alpha > acc_max / fin_epoch and beta in (0, 1).
struct PowerFit {
    double alpha = 0.0;
    double beta = 0.0;
    double sse = 0.0;      // residual sum of squares on the fitted points
    double acc_max = 0.0;
    int fin_epoch = 1;
};

// points are (epoch, accuracy) pairs, epochs distinct and >= 1. acc_max
// must equal the max point accuracy; fin_epoch >= the largest epoch.
// Throws std::invalid_argument on fewer than 2 points or an all-zero curve.
PowerFit fit_power_law(std::span<const std::pair<int, double>> points,
                       double acc_max, int fin_epoch);

// alpha * fin_epoch^beta, clamped to [acc_max, 1].
double predict_final(const PowerFit& fit);

} // namespace curvepred

#include "curvepred/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "text_io.hpp"

namespace curvepred {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 50;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<double> values;
};

// x = index (1-based), y = value; y range padded to [0,1]-ish bounds.
void write_chart(const std::string& path, const std::string& title,
                 const std::string& x_label, const std::vector<Series>& series) {
    double y_min = 1e300, y_max = -1e300;
    std::size_t n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (n == 0)
        throw std::runtime_error("nothing to plot");
    y_min = std::min(y_min, 0.0);
    y_max = std::max(y_max, 1.0);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](std::size_t i) {
        return n > 1 ? kLeft + plot_w * static_cast<double>(i) / static_cast<double>(n - 1)
                     : kLeft + plot_w / 2.0;
    };
    auto sy = [&](double v) {
        return kTop + plot_h * (1.0 - (v - y_min) / (y_max - y_min));
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(kLeft) << "\" y2=\"" << num(kTop + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double v = y_min + (y_max - y_min) * tick / 5.0;
        const double y = sy(v);
        out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(v) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << x_label << "</text>\n";

    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i)
                out << ' ';
            out << num(sx(i)) << ',' << num(sy(s.values[i]));
        }
        out << "\"/>\n";
    }

    // legend
    double ly = kTop + 8;
    for (const auto& s : series) {
        out << "<line x1=\"" << num(kLeft + plot_w - 140) << "\" y1=\"" << num(ly)
            << "\" x2=\"" << num(kLeft + plot_w - 116) << "\" y2=\"" << num(ly)
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(kLeft + plot_w - 110) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
            << "</text>\n";
        ly += 18;
    }
    out << "</svg>\n";

    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    file << out.str();
    if (!file)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace

void plot_csv(const std::string& csv_path, const std::string& svg_path) {
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cannot open '" + csv_path + "'");
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("empty CSV '" + csv_path + "'");
    const auto cols = text::split(std::string(text::trim(header)), ',');

    std::string line;
    if (cols.size() >= 3 && cols[0] == "record_id" && cols[1] == "true_final") {
        Series truth{"ground truth", "#1f77b4", {}};
        Series pred{"predicted", "#ff7f0e", {}};
        while (std::getline(in, line)) {
            const auto f = text::split(std::string(text::trim(line)), ',');
            if (f.empty() || f[0] == "summary" || text::trim(line).empty())
                continue;
            if (f.size() < 3)
                throw std::runtime_error("malformed evaluation row: " + line);
            truth.values.push_back(text::parse_double(f[1]));
            pred.values.push_back(text::parse_double(f[2]));
        }
        if (truth.values.empty())
            throw std::runtime_error("no data rows in '" + csv_path + "'");
        write_chart(svg_path, "Predicted vs ground-truth final accuracy",
                    "test record", {truth, pred});
        return;
    }
    if (!cols.empty() && cols[0] == "t" && cols.size() >= 3 &&
        cols[cols.size() - 2] == "reward") {
        Series reward{"reward", "#2ca02c", {}};
        const std::size_t reward_col = cols.size() - 2;
        while (std::getline(in, line)) {
            if (text::trim(line).empty())
                continue;
            const auto f = text::split(std::string(text::trim(line)), ',');
            if (f.size() != cols.size())
                throw std::runtime_error("malformed history row: " + line);
            reward.values.push_back(text::parse_double(f[reward_col]));
        }
        if (reward.values.empty())
            throw std::runtime_error("no data rows in '" + csv_path + "'");
        write_chart(svg_path, "Exploration reward trace", "iteration", {reward});
        return;
    }
    throw std::runtime_error("unrecognized CSV header in '" + csv_path + "'");
}

} // namespace curvepred

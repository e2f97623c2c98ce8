#include "curvepred/power_fit.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace curvepred {

namespace {

constexpr double kBetaLo = 1e-6;
constexpr double kBetaHi = 1.0 - 1e-6;
constexpr double kAlphaMargin = 1e-12;
constexpr int kGridPoints = 512;
constexpr double kGoldenStop = 1e-8;

struct Objective {
    std::span<const std::pair<int, double>> points;
    double alpha_min;

    // Closed-form alpha for a fixed beta, projected onto the constraint.
    double alpha_at(double beta) const {
        double num = 0.0, den = 0.0;
        for (const auto& [e, a] : points) {
            const double xb = std::pow(static_cast<double>(e), beta);
            num += a * xb;
            den += xb * xb;
        }
        const double alpha = den > 0.0 ? num / den : alpha_min;
        return std::max(alpha, alpha_min);
    }

    double sse_at(double beta) const {
        const double alpha = alpha_at(beta);
        double sse = 0.0;
        for (const auto& [e, a] : points) {
            const double r = a - alpha * std::pow(static_cast<double>(e), beta);
            sse += r * r;
        }
        return sse;
    }
};

// Golden-section minimization of f on [lo, hi].
double golden_section(const Objective& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f.sse_at(x1), f2 = f.sse_at(x2);
    while (b - a > kGoldenStop) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f.sse_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f.sse_at(x2);
        }
    }
    return 0.5 * (a + b);
}

// Log-log least-squares slope as a warm-start candidate for beta; valid
// only when every accuracy is positive.
std::optional<double> loglog_beta(std::span<const std::pair<int, double>> points) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [e, a] : points) {
        if (!(a > 0.0))
            return std::nullopt;
        const double lx = std::log(static_cast<double>(e));
        const double ly = std::log(a);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double den = n * sxx - sx * sx;
    if (den <= 0.0)
        return std::nullopt;
    const double beta = (n * sxy - sx * sy) / den;
    if (!std::isfinite(beta))
        return std::nullopt;
    return std::clamp(beta, kBetaLo, kBetaHi);
}

} // namespace

PowerFit fit_power_law(std::span<const std::pair<int, double>> points,
                       double acc_max, int fin_epoch) {
    if (points.size() < 2)
        throw std::invalid_argument("power-law fit needs at least 2 points");
    std::set<int> epochs;
    double max_acc_seen = 0.0;
    for (const auto& [e, a] : points) {
        if (e < 1)
            throw std::invalid_argument("epochs must be >= 1");
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("accuracy outside [0,1]");
        if (!epochs.insert(e).second)
            throw std::invalid_argument("duplicate epoch in fit points");
        max_acc_seen = std::max(max_acc_seen, a);
    }
    if (fin_epoch < *epochs.rbegin())
        throw std::invalid_argument("fin_epoch below the largest fitted epoch");
    if (max_acc_seen == 0.0)
        throw std::invalid_argument("degenerate curve: all accuracies are zero");

    const Objective obj{points, acc_max / static_cast<double>(fin_epoch) + kAlphaMargin};

    // Coarse grid over beta, then golden-section refinement around the
    // best cell; the log-log slope joins the grid as one extra candidate.
    const double step = (kBetaHi - kBetaLo) / (kGridPoints - 1);
    double best_beta = kBetaLo;
    double best_sse = obj.sse_at(kBetaLo);
    for (int i = 1; i < kGridPoints; ++i) {
        const double beta = kBetaLo + i * step;
        const double sse = obj.sse_at(beta);
        if (sse < best_sse) {
            best_sse = sse;
            best_beta = beta;
        }
    }
    if (const auto warm = loglog_beta(points)) {
        if (obj.sse_at(*warm) < best_sse)
            best_beta = *warm;
    }

    const double lo = std::max(kBetaLo, best_beta - step);
    const double hi = std::min(kBetaHi, best_beta + step);
    double beta = golden_section(obj, lo, hi);
    if (obj.sse_at(best_beta) < obj.sse_at(beta))
        beta = best_beta;

    PowerFit fit;
    fit.beta = beta;
    fit.alpha = obj.alpha_at(beta);
    fit.sse = obj.sse_at(beta);
    fit.acc_max = acc_max;
    fit.fin_epoch = fin_epoch;
    return fit;
}

double predict_final(const PowerFit& fit) {
    const double raw = fit.alpha * std::pow(static_cast<double>(fit.fin_epoch), fit.beta);
    return std::clamp(raw, fit.acc_max, 1.0);
}

} // namespace curvepred

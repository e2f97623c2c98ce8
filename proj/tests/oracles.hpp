#pragma once

// Independent brute-force oracles used only by tests. These deliberately
// avoid the library's solver paths: the power-law oracle is a dense grid
// scan over (alpha, beta), the SVR oracle is projected gradient descent on
// the dual QP.

#include <span>
#include <utility>
#include <vector>

#include "curvepred/svr.hpp"

namespace curvepred::oracles {

struct GridFitResult {
    double alpha = 0.0, beta = 0.0, sse = 0.0;
};

// Minimizes the power-law SSE over a dense (alpha, beta) grid at the given
// step, subject to alpha >= acc_max/fin_epoch and beta in (0, 1).
GridFitResult dense_grid_power_fit(std::span<const std::pair<int, double>> points,
                                   double acc_max, int fin_epoch,
                                   double step = 1e-3, double alpha_hi = 1.5);

struct QpSolution {
    std::vector<double> dual_coeffs; // c_i = alpha_i - alpha_i^*, one per sample
    double bias = 0.0;
    // prediction at each training point
    std::vector<double> train_predictions;
};

// Projected gradient descent on the epsilon-SVR dual, run to convergence.
QpSolution projected_gradient_svr(const std::vector<std::vector<double>>& X,
                                  const std::vector<double>& y,
                                  const KernelSpec& kernel, const SvrHyper& hyper,
                                  std::size_t iterations = 200000);

} // namespace curvepred::oracles

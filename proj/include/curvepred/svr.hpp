#pragma once

#include <span>
#include <string>
#include <vector>

namespace curvepred {

enum class KernelKind { Linear, Polynomial, Gaussian };

struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double gamma = 1.0;   // gaussian
    int degree = 3;       // polynomial
    double coef0 = 1.0;   // polynomial

    static KernelSpec linear() { return {KernelKind::Linear}; }
    static KernelSpec polynomial(int degree = 3, double coef0 = 1.0);
    static KernelSpec gaussian(double gamma);
};

std::string kernel_name(const KernelSpec& spec);

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

struct SvrHyper {
    double C = 10.0;
    double epsilon = 0.01;
};

// Trained epsilon-SVR in dual form: f(x) = sum_i c_i K(x_i, x) + b with
// c_i = alpha_i - alpha_i^*.
struct SvrModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coeffs;
    double bias = 0.0;
    KernelSpec kernel;
    SvrHyper hyper;
    std::size_t dim = 0;

    std::size_t n_sv() const { return support_vectors.size(); }
};

// Solves the epsilon-SVR dual by two-variable working-set ascent with
// maximal-violating-pair selection; stops when every sample's KKT residual
// is within tol. Throws past 10^6 iterations.
SvrModel train_svr(const std::vector<std::vector<double>>& X,
                   const std::vector<double>& y, const KernelSpec& kernel,
                   const SvrHyper& hyper, double tol = 1e-4);

double predict(const SvrModel& model, std::span<const double> x);

double mse(const SvrModel& model, const std::vector<std::vector<double>>& X_test,
           const std::vector<double>& y_test);

void save_model(const SvrModel& model, const std::string& path);
SvrModel load_model(const std::string& path);

} // namespace curvepred

#include "curvepred/svr.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "curvepred/kernels.hpp"
#include "text_io.hpp"

namespace curvepred {

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
    if (degree < 1)
        throw std::invalid_argument("polynomial degree must be >= 1");
    return {KernelKind::Polynomial, 1.0, degree, coef0};
}

KernelSpec KernelSpec::gaussian(double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("gaussian gamma must be positive");
    return {KernelKind::Gaussian, gamma};
}

std::string kernel_name(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Polynomial: return "polynomial";
        case KernelKind::Gaussian: return "gaussian";
    }
    throw std::logic_error("unreachable");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    switch (spec.kind) {
        case KernelKind::Linear:
            return kernels::dot(x, y);
        case KernelKind::Polynomial:
            return std::pow(kernels::dot(x, y) + spec.coef0, spec.degree);
        case KernelKind::Gaussian:
            return std::exp(-spec.gamma * kernels::squared_distance(x, y));
    }
    throw std::logic_error("unreachable");
}

namespace {

constexpr std::size_t kMaxIterations = 1'000'000;
constexpr double kTau = 1e-12;
constexpr double kSvCutoff = 1e-12;

// The dual is solved over 2n variables t in [0,C]^(2n): p < n holds
// alpha_i (sign +1), p >= n holds alpha*_i (sign -1), with the equality
// constraint sum_p s_p t_p = 0.
struct DualProblem {
    std::size_t n;
    double C, eps;
    const std::vector<double>& targets;
    const std::vector<double>& gram; // n x n kernel matrix

    double sign(std::size_t p) const { return p < n ? 1.0 : -1.0; }
    std::size_t base(std::size_t p) const { return p < n ? p : p - n; }
    double q(std::size_t p, std::size_t r) const {
        return sign(p) * sign(r) * gram[base(p) * n + base(r)];
    }
    double lin(std::size_t p) const { return eps - sign(p) * targets[base(p)]; }
};

} // namespace

SvrModel train_svr(const std::vector<std::vector<double>>& X,
                   const std::vector<double>& y, const KernelSpec& kernel,
                   const SvrHyper& hyper, double tol) {
    const std::size_t n = X.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("train_svr needs |X| = |y| >= 2");
    if (!(tol > 0.0))
        throw std::invalid_argument("tol must be positive");
    if (!(hyper.C > 0.0) || !(hyper.epsilon >= 0.0))
        throw std::invalid_argument("invalid SVR hyper-parameters");
    const std::size_t dim = X[0].size();
    for (const auto& row : X) {
        if (row.size() != dim)
            throw std::invalid_argument("inconsistent feature dimensions");
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite feature value");
    }
    for (double v : y)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite target value");

    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            gram[i * n + j] = gram[j * n + i] = kernel_eval(kernel, X[i], X[j]);

    const DualProblem prob{n, hyper.C, hyper.epsilon, y, gram};
    const std::size_t m2 = 2 * n;
    std::vector<double> t(m2, 0.0), grad(m2);
    for (std::size_t p = 0; p < m2; ++p)
        grad[p] = prob.lin(p);

    const double C = hyper.C;
    auto in_up = [&](std::size_t p) {
        return prob.sign(p) > 0 ? t[p] < C : t[p] > 0.0;
    };
    auto in_low = [&](std::size_t p) {
        return prob.sign(p) > 0 ? t[p] > 0.0 : t[p] < C;
    };
    auto score = [&](std::size_t p) { return -prob.sign(p) * grad[p]; };

    double hi = 0.0, lo = 0.0;
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= kMaxIterations)
            throw std::runtime_error("train_svr: iteration cap exceeded");

        // maximal-violating pair
        std::size_t i = m2, j = m2;
        hi = -std::numeric_limits<double>::infinity();
        lo = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < m2; ++p) {
            if (in_up(p) && score(p) > hi) {
                hi = score(p);
                i = p;
            }
            if (in_low(p) && score(p) < lo) {
                lo = score(p);
                j = p;
            }
        }
        if (i == m2 || j == m2 || hi - lo <= tol)
            break;

        const double old_i = t[i], old_j = t[j];
        if (prob.sign(i) != prob.sign(j)) {
            double quad = prob.q(i, i) + prob.q(j, j) + 2.0 * prob.q(i, j);
            if (quad <= 0.0)
                quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = t[i] - t[j];
            t[i] += delta;
            t[j] += delta;
            if (diff > 0.0) {
                if (t[j] < 0.0) {
                    t[j] = 0.0;
                    t[i] = diff;
                }
            } else {
                if (t[i] < 0.0) {
                    t[i] = 0.0;
                    t[j] = -diff;
                }
            }
            if (diff > 0.0) {
                if (t[i] > C) {
                    t[i] = C;
                    t[j] = C - diff;
                }
            } else {
                if (t[j] > C) {
                    t[j] = C;
                    t[i] = C + diff;
                }
            }
        } else {
            double quad = prob.q(i, i) + prob.q(j, j) - 2.0 * prob.q(i, j);
            if (quad <= 0.0)
                quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = t[i] + t[j];
            t[i] -= delta;
            t[j] += delta;
            if (sum > C) {
                if (t[i] > C) {
                    t[i] = C;
                    t[j] = sum - C;
                }
            } else {
                if (t[j] < 0.0) {
                    t[j] = 0.0;
                    t[i] = sum;
                }
            }
            if (sum > C) {
                if (t[j] > C) {
                    t[j] = C;
                    t[i] = sum - C;
                }
            } else {
                if (t[i] < 0.0) {
                    t[i] = 0.0;
                    t[j] = sum;
                }
            }
        }

        const double di = t[i] - old_i, dj = t[j] - old_j;
        for (std::size_t p = 0; p < m2; ++p)
            grad[p] += prob.q(p, i) * di + prob.q(p, j) * dj;
    }

    // bias: average over unbounded support vectors, else the midpoint of
    // the KKT-feasible interval
    double bias_sum = 0.0;
    std::size_t n_unbounded = 0;
    for (std::size_t p = 0; p < m2; ++p) {
        if (t[p] > 0.0 && t[p] < C) {
            bias_sum += score(p);
            ++n_unbounded;
        }
    }
    double bias;
    if (n_unbounded > 0)
        bias = bias_sum / static_cast<double>(n_unbounded);
    else if (std::isfinite(hi) && std::isfinite(lo))
        bias = 0.5 * (hi + lo);
    else
        bias = 0.0;

    SvrModel model;
    model.kernel = kernel;
    model.hyper = hyper;
    model.bias = bias;
    model.dim = dim;
    for (std::size_t s = 0; s < n; ++s) {
        const double c = t[s] - t[s + n];
        if (std::abs(c) > kSvCutoff) {
            model.support_vectors.push_back(X[s]);
            model.dual_coeffs.push_back(c);
        }
    }
    return model;
}

double predict(const SvrModel& model, std::span<const double> x) {
    if (x.size() != model.dim)
        throw std::invalid_argument("predict: dimension mismatch");
    double acc = model.bias;
    for (std::size_t s = 0; s < model.n_sv(); ++s)
        acc += model.dual_coeffs[s] * kernel_eval(model.kernel, model.support_vectors[s], x);
    return acc;
}

double mse(const SvrModel& model, const std::vector<std::vector<double>>& X_test,
           const std::vector<double>& y_test) {
    if (X_test.empty() || X_test.size() != y_test.size())
        throw std::invalid_argument("mse: empty or mismatched test set");
    double acc = 0.0;
    for (std::size_t i = 0; i < X_test.size(); ++i) {
        const double r = predict(model, X_test[i]) - y_test[i];
        acc += r * r;
    }
    return acc / static_cast<double>(X_test.size());
}

void save_model(const SvrModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << kernel_name(model.kernel) << ' ' << text::format_double(model.kernel.gamma)
        << ' ' << model.kernel.degree << ' ' << text::format_double(model.kernel.coef0)
        << ' ' << text::format_double(model.hyper.C) << ' '
        << text::format_double(model.hyper.epsilon) << ' '
        << text::format_double(model.bias) << ' ' << model.n_sv() << ' ' << model.dim
        << '\n';
    for (std::size_t s = 0; s < model.n_sv(); ++s) {
        out << text::format_double(model.dual_coeffs[s]);
        for (double v : model.support_vectors[s])
            out << ' ' << text::format_double(v);
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

SvrModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    SvrModel model;
    std::string kind;
    std::string gamma_s, coef0_s, c_s, eps_s, bias_s;
    std::size_t n_sv = 0;
    in >> kind >> gamma_s >> model.kernel.degree >> coef0_s >> c_s >> eps_s >> bias_s >>
        n_sv >> model.dim;
    if (!in)
        throw std::runtime_error("malformed model header in '" + path + "'");
    if (kind == "linear")
        model.kernel.kind = KernelKind::Linear;
    else if (kind == "polynomial")
        model.kernel.kind = KernelKind::Polynomial;
    else if (kind == "gaussian")
        model.kernel.kind = KernelKind::Gaussian;
    else
        throw std::runtime_error("unknown kernel '" + kind + "' in '" + path + "'");
    model.kernel.gamma = text::parse_double(gamma_s);
    model.kernel.coef0 = text::parse_double(coef0_s);
    model.hyper.C = text::parse_double(c_s);
    model.hyper.epsilon = text::parse_double(eps_s);
    model.bias = text::parse_double(bias_s);
    for (std::size_t s = 0; s < n_sv; ++s) {
        std::string coeff_s;
        in >> coeff_s;
        std::vector<double> sv(model.dim);
        for (auto& v : sv) {
            std::string f;
            in >> f;
            v = text::parse_double(f);
        }
        if (!in)
            throw std::runtime_error("malformed support vector in '" + path + "'");
        model.dual_coeffs.push_back(text::parse_double(coeff_s));
        model.support_vectors.push_back(std::move(sv));
    }
    return model;
}

} // namespace curvepred

#include "curvepred/kernels.hpp"

namespace curvepred::kernels::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols,
                   const double* v, double* out) {
    for (std::size_t r = 0; r < rows; ++r)
        out[r] = dot_scalar(m + r * cols, v, cols);
}

} // namespace

const Backend& scalar_backend() {
    static const Backend b{dot_scalar, sqdist_scalar, axpy_scalar, matvec_scalar};
    return b;
}

} // namespace curvepred::kernels::detail

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Low-level vector kernels used by the SVR and the classifier trainer.
// Each operation has a scalar reference implementation and, on x86 CPUs
// with AVX2+FMA, a vectorized variant selected once at startup.

namespace curvepred::kernels {

// Name of the active backend: "scalar" or "avx2".
std::string_view backend();

// Force a specific backend ("scalar" or "avx2"); returns false if the
// requested backend is unavailable on this CPU. Intended for tests.
bool set_backend(std::string_view name);

double dot(std::span<const double> a, std::span<const double> b);

// Squared Euclidean distance ||a - b||^2.
double squared_distance(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// out = M * v for a row-major (rows x cols) matrix.
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> v, std::span<double> out);

namespace detail {

struct Backend {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sqdist)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
#endif

} // namespace detail

} // namespace curvepred::kernels

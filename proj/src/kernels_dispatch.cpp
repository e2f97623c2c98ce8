#include "curvepred/kernels.hpp"

#include <stdexcept>

namespace curvepred::kernels {

namespace {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Active {
    const detail::Backend* impl;
    std::string_view name;
};

Active& active() {
    static Active a = [] {
#if defined(__x86_64__) || defined(_M_X64)
        if (avx2_available())
            return Active{&detail::avx2_backend(), "avx2"};
#endif
        return Active{&detail::scalar_backend(), "scalar"};
    }();
    return a;
}

void check_same_size(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("kernels: size mismatch");
}

} // namespace

std::string_view backend() { return active().name; }

bool set_backend(std::string_view name) {
    if (name == "scalar") {
        active() = {&detail::scalar_backend(), "scalar"};
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && avx2_available()) {
        active() = {&detail::avx2_backend(), "avx2"};
        return true;
    }
#endif
    return false;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_same_size(a, b);
    return active().impl->dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    check_same_size(a, b);
    return active().impl->sqdist(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernels: size mismatch");
    active().impl->axpy(alpha, x.data(), y.data(), x.size());
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> v, std::span<double> out) {
    if (m.size() != rows * cols || v.size() != cols || out.size() != rows)
        throw std::invalid_argument("kernels: matvec size mismatch");
    active().impl->matvec(m.data(), rows, cols, v.data(), out.data());
}

} // namespace curvepred::kernels

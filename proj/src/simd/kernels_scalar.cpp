#include "windsynth/simd.hpp"

#include <cmath>

namespace windsynth::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

double sum_scalar(const double* x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::abs(a[i] - b[i]);
    }
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

constexpr KernelTable kScalar{
    Isa::Scalar,
    dot_scalar,
    axpy_scalar,
    sum_scalar,
    sum_abs_diff_scalar,
    sum_sq_diff_scalar,
};

} // namespace

const KernelTable& scalar_kernels() noexcept
{
    return kScalar;
}

} // namespace windsynth::simd

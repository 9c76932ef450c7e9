#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

// Dense inner-loop kernels shared by the perceptron and the metric suite.
// Each instruction set provides the same table; the scalar table is the
// reference the vector variants are tested against.
namespace windsynth::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

// Best table for this CPU, unless WINDSYNTH_ISA=scalar|avx2|neon overrides it.
const KernelTable& active() noexcept;
// Pins the active table; returns false if `isa` is unavailable here.
bool force(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept
{
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) noexcept
{
    return active().sum(x.data(), x.size());
}

inline double sum_abs_diff(std::span<const double> a, std::span<const double> b) noexcept
{
    assert(a.size() == b.size());
    return active().sum_abs_diff(a.data(), b.data(), a.size());
}

inline double sum_sq_diff(std::span<const double> a, std::span<const double> b) noexcept
{
    assert(a.size() == b.size());
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

} // namespace windsynth::simd

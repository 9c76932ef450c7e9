#include "support.hpp"

#include "windsynth/simd.hpp"

#include <cmath>

using namespace windsynth;

namespace {

std::vector<const simd::KernelTable*> vector_tables()
{
    std::vector<const simd::KernelTable*> out;
    if (auto* t = simd::avx2_kernels())
        out.push_back(t);
    if (auto* t = simd::neon_kernels())
        out.push_back(t);
    return out;
}

// Vector variants reassociate sums; bound the drift by n * eps * sum|terms|.
double bound(std::size_t n, double magnitude) { return 4.0 * static_cast<double>(n) * 1e-16 * magnitude + 1e-300; }

} // namespace

TEST_SUITE_BEGIN("simd");

TEST_CASE("scalar table is the plain sequential loop")
{
    const auto& s = simd::scalar_kernels();
    const double a[] = {1, 2, 3, 4, 5};
    const double b[] = {5, 4, 3, 2, 1};
    CHECK(s.dot(a, b, 5) == 35.0);
    CHECK(s.sum(a, 5) == 15.0);
    CHECK(s.sum_abs_diff(a, b, 5) == 12.0);
    CHECK(s.sum_sq_diff(a, b, 5) == 40.0);
    double y[] = {1, 1, 1, 1, 1};
    s.axpy(2.0, a, y, 5);
    CHECK(y[4] == 11.0);
    CHECK(s.dot(a, b, 0) == 0.0);
}

TEST_CASE("vector kernels agree with the scalar reference")
{
    const auto& ref = simd::scalar_kernels();
    auto tables = vector_tables();
    if (tables.empty())
        MESSAGE("no vector kernels on this CPU; only the scalar table is exercised");
    std::mt19937_64 rng(99);
    for (const auto* t : tables) {
        CAPTURE(simd::isa_name(t->isa));
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 223u, 1000u, 4099u}) {
            auto a = test_support::uniform_series(rng, n, -3, 3);
            auto b = test_support::uniform_series(rng, n, -3, 3);
            double mag_dot = 0, mag_sum = 0, mag_abs = 0, mag_sq = 0;
            for (std::size_t i = 0; i < n; ++i) {
                mag_dot += std::abs(a[i] * b[i]);
                mag_sum += std::abs(a[i]);
                mag_abs += std::abs(a[i] - b[i]);
                mag_sq += (a[i] - b[i]) * (a[i] - b[i]);
            }
            CHECK(std::abs(t->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= bound(n, mag_dot));
            CHECK(std::abs(t->sum(a.data(), n) - ref.sum(a.data(), n)) <= bound(n, mag_sum));
            CHECK(std::abs(t->sum_abs_diff(a.data(), b.data(), n) - ref.sum_abs_diff(a.data(), b.data(), n)) <=
                  bound(n, mag_abs));
            CHECK(std::abs(t->sum_sq_diff(a.data(), b.data(), n) - ref.sum_sq_diff(a.data(), b.data(), n)) <=
                  bound(n, mag_sq));

            // axpy is elementwise; FMA contraction may differ by one rounding
            auto y1 = b, y2 = b;
            t->axpy(-0.37, a.data(), y1.data(), n);
            ref.axpy(-0.37, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(std::abs(y1[i] - y2[i]) <= 4e-16 * (std::abs(y2[i]) + std::abs(0.37 * a[i])));
        }
    }
}

TEST_CASE("unaligned spans")
{
    std::mt19937_64 rng(7);
    auto a = test_support::uniform_series(rng, 130);
    auto b = test_support::uniform_series(rng, 130);
    const auto& ref = simd::scalar_kernels();
    for (const auto* t : vector_tables())
        for (std::size_t off = 1; off < 4; ++off)
            CHECK(t->dot(a.data() + off, b.data() + off, 120) ==
                  doctest::Approx(ref.dot(a.data() + off, b.data() + off, 120)).epsilon(1e-13));
}

TEST_CASE("force switches the active table")
{
    const auto before = simd::active().isa;
    CHECK(simd::force(simd::Isa::Scalar));
    CHECK(simd::active().isa == simd::Isa::Scalar);
    if (simd::avx2_kernels())
        CHECK(simd::force(simd::Isa::Avx2));
    else
        CHECK_FALSE(simd::force(simd::Isa::Avx2));
    simd::force(before);
}

TEST_SUITE_END();

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "funloci/core.hpp"
#include "funloci/kernels.hpp"

using namespace funloci;

namespace {

std::vector<double> draw(std::size_t n, std::uint64_t seed, double offset = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(offset, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Long double reference sums.
long double ref_sum(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  return s;
}

void check_table(const kernels::KernelTable& k) {
  CAPTURE(k.name);
  const auto& ref = kernels::scalar_table();
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 9ul, 15ul, 16ul, 17ul, 400ul, 9999ul, 10000ul,
                        10001ul, 10007ul, 33101ul}) {
    CAPTURE(n);
    const auto x = draw(n, 11 + n, 2.0);
    const auto y = draw(n, 97 + n, -1.0);
    const double c = 0.75;

    const double tol = 1e-12 * (1.0 + static_cast<double>(n));
    CHECK(std::abs(k.sum(x.data(), n) - ref.sum(x.data(), n)) <= tol);
    CHECK(std::abs(k.sum(x.data(), n) - static_cast<double>(ref_sum(x))) <= tol);
    CHECK(std::abs(k.sum_sq_dev(x.data(), n, c) - ref.sum_sq_dev(x.data(), n, c)) <=
          tol * 10);
    CHECK(std::abs(k.sum_sq_diff_dev(x.data(), y.data(), n, c) -
                   ref.sum_sq_diff_dev(x.data(), y.data(), n, c)) <= tol * 10);

    std::vector<double> a = y;
    std::vector<double> b = y;
    k.accumulate(a.data(), x.data(), n);
    ref.accumulate(b.data(), x.data(), n);
    CHECK(a == b);
  }
}

}  // namespace

TEST_CASE("scalar kernels against long double references") {
  const auto& k = kernels::scalar_table();
  const auto x = draw(1000, 5);
  long double sq = 0;
  for (double v : x) sq += (v - 0.5L) * (v - 0.5L);
  CHECK(k.sum(x.data(), x.size()) == doctest::Approx(static_cast<double>(ref_sum(x))).epsilon(1e-14));
  CHECK(k.sum_sq_dev(x.data(), x.size(), 0.5) ==
        doctest::Approx(static_cast<double>(sq)).epsilon(1e-14));
}

TEST_CASE("compensated path removes cancellation error") {
  // Alternating 1e8 offsets with small increments; the exact sum of the
  // stored values is representable in long double.
  const std::size_t n = 20000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 ? 1e8 : -1e8) + 1e-3 * static_cast<double>(i % 7);
  const double expect = static_cast<double>(ref_sum(x));
  for (const auto& name : kernels::available()) {
    kernels::select(name);
    CAPTURE(name);
    CHECK(std::abs(kernels::active().sum(x.data(), n) - expect) < 1e-9);
  }
  kernels::select("auto");
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  if (const auto* t = kernels::avx2_table()) check_table(*t);
  if (const auto* t = kernels::neon_table()) check_table(*t);
  check_table(kernels::scalar_table());
}

TEST_CASE("kernel selection") {
  const auto names = kernels::available();
  REQUIRE(!names.empty());
  CHECK(names.front() == "scalar");
  kernels::select("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_THROWS_AS(kernels::select("sse9"), Error);
  kernels::select("auto");
}

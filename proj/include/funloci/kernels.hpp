#pragma once
// Reduction kernels behind every H-score evaluation.
//
// Each kernel has a scalar reference and optional AVX2 / NEON variants; the
// active table is chosen once per process (CPU detection, overridable with
// FUNLOCI_KERNEL=scalar|avx2|neon|auto or kernels::select). Windows longer
// than kCompensatedThreshold use compensated accumulation in every variant.
//
// Variants agree to rounding, not bitwise: results are reproducible for a
// fixed kernel choice, independent of thread count.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace funloci::kernels {

inline constexpr std::size_t kCompensatedThreshold = 10000;

struct KernelTable {
  const char* name;
  // sum_t x[t]
  double (*sum)(const double* x, std::size_t n);
  // sum_t (x[t] - c)^2
  double (*sum_sq_dev)(const double* x, std::size_t n, double c);
  // sum_t (x[t] - y[t] - c)^2
  double (*sum_sq_diff_dev)(const double* x, const double* y, std::size_t n, double c);
  // acc[t] += x[t]
  void (*accumulate)(double* acc, const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

const KernelTable& active() noexcept;
// Throws funloci::Error(ConfigError) for unknown/unavailable names.
void select(std::string_view name);
std::vector<std::string> available();

}  // namespace funloci::kernels

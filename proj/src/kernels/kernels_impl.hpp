#pragma once
// Internal declarations shared by the kernel translation units.

#include <cstddef>

#include "funloci/kernels.hpp"

namespace funloci::kernels {

namespace scalar {
double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double c);
double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c);
void accumulate(double* acc, const double* x, std::size_t n);
}  // namespace scalar

#if defined(FUNLOCI_HAVE_AVX2)
namespace avx2 {
double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double c);
double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c);
void accumulate(double* acc, const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(FUNLOCI_HAVE_NEON)
namespace neon {
double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double c);
double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c);
void accumulate(double* acc, const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace funloci::kernels

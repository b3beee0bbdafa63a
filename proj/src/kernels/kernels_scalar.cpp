#include "kernels_impl.hpp"

namespace funloci::kernels::scalar {

namespace {

// Neumaier's variant of Kahan summation.
struct Compensated {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if ((sum >= 0 ? sum : -sum) >= (v >= 0 ? v : -v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double sum(const double* x, std::size_t n) {
  if (n > kCompensatedThreshold) {
    Compensated acc;
    for (std::size_t t = 0; t < n; ++t) acc.add(x[t]);
    return acc.value();
  }
  double s = 0.0;
  for (std::size_t t = 0; t < n; ++t) s += x[t];
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  if (n > kCompensatedThreshold) {
    Compensated acc;
    for (std::size_t t = 0; t < n; ++t) {
      const double r = x[t] - c;
      acc.add(r * r);
    }
    return acc.value();
  }
  double s = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double r = x[t] - c;
    s += r * r;
  }
  return s;
}

double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c) {
  if (n > kCompensatedThreshold) {
    Compensated acc;
    for (std::size_t t = 0; t < n; ++t) {
      const double r = x[t] - y[t] - c;
      acc.add(r * r);
    }
    return acc.value();
  }
  double s = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double r = x[t] - y[t] - c;
    s += r * r;
  }
  return s;
}

void accumulate(double* acc, const double* x, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) acc[t] += x[t];
}

}  // namespace funloci::kernels::scalar

#pragma once
// Direct textbook evaluations used as test oracles. Deliberately naive:
// two passes, plain loops, no workspace, no kernels.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "funloci/core.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct Fit {
  double mu = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
};

inline Fit fit(const Matrix& x, const std::vector<std::size_t>& rows, std::size_t a, std::size_t b,
               funloci::ClusterModelKind model) {
  const double ni = static_cast<double>(rows.size());
  const double ns = static_cast<double>(b - a + 1);
  Fit f;
  for (auto i : rows)
    for (std::size_t t = a; t <= b; ++t) f.mu += x[i][t];
  f.mu /= ni * ns;
  for (auto i : rows) {
    double m = 0.0;
    for (std::size_t t = a; t <= b; ++t) m += x[i][t];
    f.alpha.push_back(funloci::has_row_effects(model) ? m / ns - f.mu : 0.0);
  }
  for (std::size_t t = a; t <= b; ++t) {
    double m = 0.0;
    for (auto i : rows) m += x[i][t];
    f.beta.push_back(funloci::has_column_pattern(model) ? m / ni - f.mu : 0.0);
  }
  return f;
}

inline double hscore(const Matrix& x, const std::vector<std::size_t>& rows, std::size_t a,
                     std::size_t b, funloci::ClusterModelKind model) {
  const Fit f = fit(x, rows, a, b, model);
  double sum = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t t = a; t <= b; ++t) {
      const double r = x[rows[k]][t] - f.mu - f.alpha[k] - f.beta[t - a];
      sum += r * r;
    }
  }
  return sum / (static_cast<double>(rows.size()) * static_cast<double>(b - a + 1));
}

// Order-k B-spline by the plain recursive definition on an explicit knot
// vector, 0/0 := 0. The last basis function is closed at the right end.
inline double bspline(const std::vector<double>& knots, std::size_t l, std::size_t k, double x,
                      std::size_t n_basis) {
  if (k == 1) {
    if (knots[l] <= x && x < knots[l + 1]) return 1.0;
    // Right end of the domain belongs to the last nonempty cell.
    if (x == knots.back() && knots[l] < knots[l + 1] && knots[l + 1] == knots.back()) return 1.0;
    return 0.0;
  }
  double v = 0.0;
  const double d1 = knots[l + k - 1] - knots[l];
  const double d2 = knots[l + k] - knots[l + 1];
  if (d1 > 0) v += (x - knots[l]) / d1 * bspline(knots, l, k - 1, x, n_basis);
  if (d2 > 0) v += (knots[l + k] - x) / d2 * bspline(knots, l + 1, k - 1, x, n_basis);
  return v;
}

inline funloci::FunctionalDataset to_dataset(const Matrix& x) {
  return funloci::FunctionalDataset::validate(x);
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m, double scale = 5.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix x(n, std::vector<double>(m));
  for (auto& row : x)
    for (auto& v : row) v = u(rng);
  return x;
}

}  // namespace oracle

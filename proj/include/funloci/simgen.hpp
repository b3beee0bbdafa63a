#pragma once
// Synthetic curves x(t) = sum_l c_l phi_l(t) on a clamped B-spline basis
// with equally spaced breakpoints, background coefficients drawn from a
// rescaled Beta distribution and shared-shape motifs planted as repeated
// coefficient blocks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "funloci/core.hpp"

namespace funloci {

// B-spline basis of a given order (degree + 1) with n_basis functions and
// n_basis - order + 2 equally spaced breakpoints spanning [lo, hi].
class BSplineBasis {
 public:
  BSplineBasis(double lo, double hi, std::size_t n_basis, std::size_t order);

  std::size_t n_basis() const noexcept { return n_basis_; }
  std::size_t order() const noexcept { return order_; }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& knots() const noexcept { return knots_; }

  // Index of the first nonzero function at x; `values` receives the
  // `order` nonzero values phi_first .. phi_{first+order-1}.
  std::size_t evaluate(double x, std::span<double> values) const;

 private:
  std::size_t n_basis_;
  std::size_t order_;
  std::vector<double> breaks_;
  std::vector<double> knots_;  // clamped: n_basis + order entries
};

// grid.size() x n_basis row-major matrix of phi_l(grid[t]).
std::vector<double> bspline_design(std::span<const double> grid, std::size_t n_basis,
                                   std::size_t order);

struct MotifOccurrence {
  std::size_t curve = 0;
  std::size_t coef_start = 0;
};

struct MotifSpec {
  std::string id;
  std::vector<double> coefficients;  // at least `order` values
  std::vector<MotifOccurrence> occurrences;
  std::size_t target_length = 0;  // nominal interval length in grid points
};

struct SimConfig {
  std::size_t n_curves = 20;
  std::size_t grid_len = 400;
  std::size_t order = 4;
  std::size_t n_basis = 43;
  double beta_a = 0.45;
  double beta_b = 0.45;
  double coef_min = -15.0;
  double coef_max = 15.0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::vector<MotifSpec> motifs;

  void validate() const;
};

// A planted locus: the curves carrying one motif at one position, on the
// grid window where those curves coincide exactly.
struct PlantedLocus {
  std::string motif;
  CurveSet curves;
  SubInterval interval;
};

struct Simulation {
  FunctionalDataset data;
  std::vector<PlantedLocus> truth;
};

// 20 x 400 curves with motifs A, B, C, D spanning 40, 80, 40 and 10 grid
// points; motif coefficients are drawn from the same rescaled Beta.
SimConfig default_sim_config(std::uint64_t seed = 1, double sigma = 0.0, std::size_t order = 4);

// Ground truth only (no sampling); validates placements.
std::vector<PlantedLocus> planted_loci(const SimConfig& cfg);

Simulation generate(const SimConfig& cfg);

// Rescaled Beta draws, exposed for distribution checks.
std::vector<double> sample_background(std::uint64_t seed, std::size_t count, double a, double b,
                                      double lo, double hi);

}  // namespace funloci

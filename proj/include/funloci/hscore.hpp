#pragma once
// Mean squared residue (H-score) of a functional local cluster and the
// estimators of its additive model, for the four model kinds.
//
// Integrals over S are arithmetic means over the grid points of the window,
// so for a locus (I, S)
//
//   H(I,S) = 1/(|I||S|) sum_{i in I} sum_{t in S} (f_i(t) - mu - alpha_i - beta(t))^2
//
// with mu = f_IS, alpha_i = f_iS - mu, beta(t) = f_I(t) - mu and inactive
// terms set to zero.
//
// A score at or below kZeroScore times the mean square of the locus values
// is rounding noise and is returned as exactly 0, so perfect loci stay
// perfect (and zero-diameter clusters stay unsplit) under floating point.

#include <cstddef>
#include <span>
#include <vector>

#include "funloci/core.hpp"

namespace funloci {

inline constexpr double kZeroScore = 1e-24;

// Window statistics cached per (dataset, interval): row means f_iS of every
// curve, cross-curve means f_X(t) of all curves and the grand mean f_XS.
class HscoreWorkspace {
 public:
  HscoreWorkspace(const FunctionalDataset& ds, SubInterval s);

  const FunctionalDataset& dataset() const noexcept { return *ds_; }
  const SubInterval& interval() const noexcept { return interval_; }
  std::size_t length() const noexcept { return interval_.length(); }
  std::size_t n_curves() const noexcept { return ds_->n_curves(); }

  std::span<const double> window(std::size_t curve) const noexcept {
    return ds_->window(curve, interval_);
  }
  double row_mean(std::size_t curve) const noexcept { return row_means_[curve]; }
  // mean_t f_i(t)^2 over the window
  double row_mean_square(std::size_t curve) const noexcept { return row_mean_squares_[curve]; }
  std::span<const double> row_means() const noexcept { return row_means_; }
  std::span<const double> column_means() const noexcept { return column_means_; }
  double grand_mean() const noexcept { return grand_mean_; }

 private:
  const FunctionalDataset* ds_;
  SubInterval interval_;
  std::vector<double> row_means_;
  std::vector<double> row_mean_squares_;
  std::vector<double> column_means_;
  double grand_mean_ = 0.0;
};

struct FittedEstimates {
  double mu = 0.0;
  std::vector<double> alpha;  // per curve, zero when row effects are inactive
  std::vector<double> beta;   // per grid point, zero when the pattern is inactive
};

// `curves` must be nonempty, valid indices; EmptyCurveSet otherwise.
FittedEstimates fit_estimates(const HscoreWorkspace& ws, std::span<const CurveIndex> curves,
                              ClusterModelKind model);
double hscore(const HscoreWorkspace& ws, std::span<const CurveIndex> curves,
              ClusterModelKind model);

FittedEstimates fit_estimates(const FunctionalDataset& ds, std::span<const CurveIndex> curves,
                              const SubInterval& s, ClusterModelKind model);
double hscore(const FunctionalDataset& ds, std::span<const CurveIndex> curves,
              const SubInterval& s, ClusterModelKind model);

// Symmetric N x N matrix, row-major, zero diagonal.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }
  std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// d_ij = H({i, j}, S), evaluated in closed form from the cached window means.
double pair_dissimilarity(const HscoreWorkspace& ws, std::size_t i, std::size_t j,
                          ClusterModelKind model);
DissimilarityMatrix dissimilarity_matrix(const HscoreWorkspace& ws, ClusterModelKind model);
DissimilarityMatrix dissimilarity_matrix(const FunctionalDataset& ds, const SubInterval& s,
                                         ClusterModelKind model);

}  // namespace funloci

#include "funloci/hscore.hpp"

#include <string>
#include <utility>

#include "funloci/kernels.hpp"

namespace funloci {

namespace {

void check_curves(std::span<const CurveIndex> curves, std::size_t n_curves) {
  if (curves.empty()) throw Error(ErrorCode::EmptyCurveSet, "curve set is empty");
  for (std::size_t k = 0; k < curves.size(); ++k) {
    if (curves[k] >= n_curves) {
      throw Error(ErrorCode::InvalidCurveIndex,
                  "curve index " + std::to_string(curves[k]) + " is out of range");
    }
    if (k > 0 && curves[k] <= curves[k - 1]) {
      throw Error(ErrorCode::InvalidCurveIndex, "curve set must be strictly ascending");
    }
  }
}

double set_mean(const HscoreWorkspace& ws, std::span<const CurveIndex> curves) {
  double s = 0.0;
  for (CurveIndex c : curves) s += ws.row_mean(c);
  return s / static_cast<double>(curves.size());
}

double snap(double h, double mean_square) { return h <= kZeroScore * mean_square ? 0.0 : h; }

// f_I(t) for the window; reuses the cached all-curve means when I = X.
std::span<const double> set_column_means(const HscoreWorkspace& ws,
                                         std::span<const CurveIndex> curves,
                                         std::vector<double>& scratch) {
  if (curves.size() == ws.n_curves()) return ws.column_means();
  const auto& k = kernels::active();
  const std::size_t n = ws.length();
  scratch.assign(n, 0.0);
  for (CurveIndex c : curves) k.accumulate(scratch.data(), ws.window(c).data(), n);
  const double m = static_cast<double>(curves.size());
  for (double& v : scratch) v /= m;
  return scratch;
}

}  // namespace

HscoreWorkspace::HscoreWorkspace(const FunctionalDataset& ds, SubInterval s)
    : ds_(&ds), interval_(SubInterval::make(s.start, s.end, ds.n_points())) {
  const auto& k = kernels::active();
  const std::size_t n = interval_.length();
  const std::size_t rows = ds.n_curves();
  row_means_.resize(rows);
  row_mean_squares_.resize(rows);
  column_means_.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* w = ds.window(i, interval_).data();
    row_means_[i] = k.sum(w, n) / static_cast<double>(n);
    row_mean_squares_[i] = k.sum_sq_dev(w, n, 0.0) / static_cast<double>(n);
    total += row_means_[i];
    k.accumulate(column_means_.data(), w, n);
  }
  for (double& v : column_means_) v /= static_cast<double>(rows);
  grand_mean_ = total / static_cast<double>(rows);
}

FittedEstimates fit_estimates(const HscoreWorkspace& ws, std::span<const CurveIndex> curves,
                              ClusterModelKind model) {
  check_curves(curves, ws.n_curves());
  FittedEstimates fit;
  fit.mu = set_mean(ws, curves);
  fit.alpha.assign(curves.size(), 0.0);
  fit.beta.assign(ws.length(), 0.0);
  if (has_row_effects(model)) {
    for (std::size_t k = 0; k < curves.size(); ++k) fit.alpha[k] = ws.row_mean(curves[k]) - fit.mu;
  }
  if (has_column_pattern(model)) {
    std::vector<double> scratch;
    const auto cm = set_column_means(ws, curves, scratch);
    for (std::size_t t = 0; t < cm.size(); ++t) fit.beta[t] = cm[t] - fit.mu;
  }
  return fit;
}

double hscore(const HscoreWorkspace& ws, std::span<const CurveIndex> curves,
              ClusterModelKind model) {
  check_curves(curves, ws.n_curves());
  const auto& k = kernels::active();
  const std::size_t n = ws.length();
  const double mu = set_mean(ws, curves);

  thread_local std::vector<double> scratch;
  std::span<const double> cm;
  if (has_column_pattern(model)) cm = set_column_means(ws, curves, scratch);

  double ss = 0.0;
  double sq = 0.0;
  for (CurveIndex c : curves) {
    const double* w = ws.window(c).data();
    sq += ws.row_mean_square(c);
    switch (model) {
      case ClusterModelKind::Full:
        ss += k.sum_sq_diff_dev(w, cm.data(), n, ws.row_mean(c) - mu);
        break;
      case ClusterModelKind::RowEffects:
        ss += k.sum_sq_dev(w, n, ws.row_mean(c));
        break;
      case ClusterModelKind::ColumnPattern:
        ss += k.sum_sq_diff_dev(w, cm.data(), n, 0.0);
        break;
      case ClusterModelKind::Constant:
        ss += k.sum_sq_dev(w, n, mu);
        break;
    }
  }
  const double m = static_cast<double>(curves.size());
  return snap(ss / (m * static_cast<double>(n)), sq / m);
}

FittedEstimates fit_estimates(const FunctionalDataset& ds, std::span<const CurveIndex> curves,
                              const SubInterval& s, ClusterModelKind model) {
  return fit_estimates(HscoreWorkspace(ds, s), curves, model);
}

double hscore(const FunctionalDataset& ds, std::span<const CurveIndex> curves,
              const SubInterval& s, ClusterModelKind model) {
  return hscore(HscoreWorkspace(ds, s), curves, model);
}

namespace {

// Per-curve window variance v_i = mean_t (f_i(t) - f_iS)^2.
double window_variance(const HscoreWorkspace& ws, std::size_t i) {
  const std::size_t n = ws.length();
  return kernels::active().sum_sq_dev(ws.window(i).data(), n, ws.row_mean(i)) /
         static_cast<double>(n);
}

// Two-curve closed forms, with g = f_i - f_j and m the window means:
//   Full:  sum_t (g - (m_i - m_j))^2 / (4|S|)
//   Cols:  sum_t g^2 / (4|S|)
//   Rows:  (v_i + v_j) / 2
//   Const: (v_i + v_j) / 2 + ((m_i - m_j) / 2)^2
double pair_value(const HscoreWorkspace& ws, std::size_t i, std::size_t j, ClusterModelKind model,
                  double vi, double vj) {
  const auto& k = kernels::active();
  const std::size_t n = ws.length();
  const double scale = 4.0 * static_cast<double>(n);
  const double sq = 0.5 * (ws.row_mean_square(i) + ws.row_mean_square(j));
  switch (model) {
    case ClusterModelKind::Full:
      return snap(k.sum_sq_diff_dev(ws.window(i).data(), ws.window(j).data(), n,
                                    ws.row_mean(i) - ws.row_mean(j)) /
                      scale,
                  sq);
    case ClusterModelKind::ColumnPattern:
      return snap(k.sum_sq_diff_dev(ws.window(i).data(), ws.window(j).data(), n, 0.0) / scale, sq);
    case ClusterModelKind::RowEffects:
      return snap(0.5 * (vi + vj), sq);
    case ClusterModelKind::Constant: {
      const double half_gap = 0.5 * (ws.row_mean(i) - ws.row_mean(j));
      return snap(0.5 * (vi + vj) + half_gap * half_gap, sq);
    }
  }
  return 0.0;
}

bool needs_variance(ClusterModelKind model) {
  return model == ClusterModelKind::RowEffects || model == ClusterModelKind::Constant;
}

}  // namespace

double pair_dissimilarity(const HscoreWorkspace& ws, std::size_t i, std::size_t j,
                          ClusterModelKind model) {
  if (i >= ws.n_curves() || j >= ws.n_curves()) {
    throw Error(ErrorCode::InvalidCurveIndex, "curve index out of range");
  }
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  double vi = 0.0;
  double vj = 0.0;
  if (needs_variance(model)) {
    vi = window_variance(ws, i);
    vj = window_variance(ws, j);
  }
  return pair_value(ws, i, j, model, vi, vj);
}

DissimilarityMatrix dissimilarity_matrix(const HscoreWorkspace& ws, ClusterModelKind model) {
  const std::size_t n = ws.n_curves();
  DissimilarityMatrix d(n);
  std::vector<double> var(n, 0.0);
  if (needs_variance(model)) {
    for (std::size_t i = 0; i < n; ++i) var[i] = window_variance(ws, i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, pair_value(ws, i, j, model, var[i], var[j]));
  }
  return d;
}

DissimilarityMatrix dissimilarity_matrix(const FunctionalDataset& ds, const SubInterval& s,
                                         ClusterModelKind model) {
  return dissimilarity_matrix(HscoreWorkspace(ds, s), model);
}

}  // namespace funloci

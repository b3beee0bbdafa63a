#include "funloci/simgen.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace funloci {

namespace {

// splitmix64 finalizer; derives independent stream seeds from one seed.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t { kBackground = 0, kNoise = 1, kMotifs = 2 };

class RescaledBeta {
 public:
  RescaledBeta(double a, double b, double lo, double hi) : dist_(a, b), lo_(lo), hi_(hi) {}

  double operator()(boost::random::mt19937_64& rng) {
    return lo_ + (hi_ - lo_) * dist_(rng);
  }

 private:
  boost::random::beta_distribution<double> dist_;
  double lo_;
  double hi_;
};

}  // namespace

BSplineBasis::BSplineBasis(double lo, double hi, std::size_t n_basis, std::size_t order)
    : n_basis_(n_basis), order_(order) {
  if (order < 1 || n_basis < order || !(hi > lo)) {
    throw Error(ErrorCode::InvalidOrder, "B-spline basis needs 1 <= order <= n_basis and lo < hi");
  }
  const std::size_t cells = n_basis - order + 1;
  breaks_.resize(cells + 1);
  for (std::size_t j = 0; j < cells; ++j) {
    breaks_[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(cells);
  }
  breaks_[cells] = hi;

  knots_.reserve(n_basis + order);
  knots_.insert(knots_.end(), order - 1, lo);
  knots_.insert(knots_.end(), breaks_.begin(), breaks_.end());
  knots_.insert(knots_.end(), order - 1, hi);
}

std::size_t BSplineBasis::evaluate(double x, std::span<double> values) const {
  const std::size_t cells = breaks_.size() - 1;
  // Cell j holds breaks[j] <= x < breaks[j+1]; the right end belongs to the last cell.
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t j = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  if (j >= cells) j = cells - 1;

  // Cox-de Boor recurrence in triangular form over the `order` functions
  // that are nonzero on the cell.
  const std::size_t span = j + order_ - 1;
  std::vector<double> left(order_, 0.0);
  std::vector<double> right(order_, 0.0);
  values[0] = 1.0;
  for (std::size_t r = 1; r < order_; ++r) {
    left[r] = x - knots_[span + 1 - r];
    right[r] = knots_[span + r] - x;
    double saved = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
      const double temp = values[k] / (right[k + 1] + left[r - k]);
      values[k] = saved + right[k + 1] * temp;
      saved = left[r - k] * temp;
    }
    values[r] = saved;
  }
  return j;
}

std::vector<double> bspline_design(std::span<const double> grid, std::size_t n_basis,
                                   std::size_t order) {
  if (grid.size() < 2) throw Error(ErrorCode::TooFewPoints, "design needs at least 2 grid points");
  const BSplineBasis basis(grid.front(), grid.back(), n_basis, order);
  std::vector<double> out(grid.size() * n_basis, 0.0);
  std::vector<double> vals(order);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const std::size_t first = basis.evaluate(grid[t], vals);
    for (std::size_t k = 0; k < order; ++k) out[t * n_basis + first + k] = vals[k];
  }
  return out;
}

void SimConfig::validate() const {
  if (n_curves < 1) throw Error(ErrorCode::ConfigError, "n_curves must be at least 1");
  if (grid_len < 2) throw Error(ErrorCode::TooFewPoints, "grid_len must be at least 2");
  if (order < 2 || n_basis < order) {
    throw Error(ErrorCode::InvalidOrder, "spline order must satisfy 2 <= order <= n_basis");
  }
  if (!(sigma >= 0.0)) throw Error(ErrorCode::ConfigError, "sigma must be >= 0");
  if (!(beta_a > 0.0 && beta_b > 0.0) || !(coef_max > coef_min)) {
    throw Error(ErrorCode::ConfigError, "invalid background distribution");
  }
}

SimConfig default_sim_config(std::uint64_t seed, double sigma, std::size_t order) {
  // 40 knot cells over a 400-point grid, ~10 points per cell.
  constexpr std::size_t kCells = 40;
  SimConfig cfg;
  cfg.seed = seed;
  cfg.sigma = sigma;
  cfg.order = order;
  cfg.n_basis = kCells + order - 1;

  struct Layout {
    const char* id;
    std::size_t cells;
    std::size_t target;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> placements;
  };
  const std::vector<Layout> layout = {
      {"A", 4, 40, {{2, {0, 1, 2, 3, 4, 5}}, {22, {0, 6, 7, 8, 9}}}},
      {"B", 8, 80, {{8, {10, 11, 12, 13, 14, 15, 16}}}},
      {"C", 4, 40, {{28, {11, 12, 13, 14, 15, 17, 18}}}},
      {"D", 1, 10, {{36, {2, 3, 4, 17, 18, 19}}}},
  };

  boost::random::mt19937_64 rng(mix(seed, kMotifs));
  RescaledBeta draw(cfg.beta_a, cfg.beta_b, cfg.coef_min, cfg.coef_max);
  for (const auto& m : layout) {
    MotifSpec spec;
    spec.id = m.id;
    spec.target_length = m.target;
    spec.coefficients.resize(m.cells + order - 1);
    for (double& c : spec.coefficients) c = draw(rng);
    for (const auto& [start, curves] : m.placements) {
      for (std::size_t curve : curves) spec.occurrences.push_back({curve, start});
    }
    cfg.motifs.push_back(std::move(spec));
  }
  return cfg;
}

std::vector<PlantedLocus> planted_loci(const SimConfig& cfg) {
  cfg.validate();
  const BSplineBasis basis(0.0, static_cast<double>(cfg.grid_len - 1), cfg.n_basis, cfg.order);
  const auto& breaks = basis.breaks();

  // Coefficient ranges already claimed per curve, for overlap detection.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> claimed(cfg.n_curves);
  std::vector<PlantedLocus> out;

  for (const auto& motif : cfg.motifs) {
    const std::size_t k = motif.coefficients.size();
    if (k < cfg.order) {
      throw Error(ErrorCode::MotifOutOfRange,
                  "motif " + motif.id + " has fewer coefficients than the spline order");
    }
    std::map<std::size_t, CurveSet> by_start;
    for (const auto& occ : motif.occurrences) {
      if (occ.curve >= cfg.n_curves || occ.coef_start + k > cfg.n_basis) {
        throw Error(ErrorCode::MotifOutOfRange,
                    "motif " + motif.id + " placement lies outside the curve set or basis");
      }
      const std::pair<std::size_t, std::size_t> range{occ.coef_start, occ.coef_start + k};
      for (const auto& [lo, hi] : claimed[occ.curve]) {
        if (range.first < hi && lo < range.second) {
          throw Error(ErrorCode::OverlappingMotifPlacements,
                      "motif " + motif.id + " overlaps another placement on curve " +
                          std::to_string(occ.curve + 1));
        }
      }
      claimed[occ.curve].push_back(range);
      by_start[occ.coef_start].push_back(static_cast<CurveIndex>(occ.curve));
    }

    // Cells start..start+k-order are covered only by the block's functions.
    for (auto& [start, curves] : by_start) {
      const double lo = breaks[start];
      const double hi = breaks[start + k - cfg.order + 1];
      std::size_t first = cfg.grid_len;
      std::size_t last = 0;
      for (std::size_t t = 0; t < cfg.grid_len; ++t) {
        const double x = static_cast<double>(t);
        if (x >= lo && x <= hi) {
          first = std::min(first, t);
          last = t;
        }
      }
      if (first == cfg.grid_len || last == first) {
        throw Error(ErrorCode::MotifOutOfRange,
                    "motif " + motif.id + " covers fewer than 2 grid points");
      }
      std::sort(curves.begin(), curves.end());
      out.push_back(PlantedLocus{motif.id, std::move(curves), SubInterval{first, last}});
    }
  }
  return out;
}

std::vector<double> sample_background(std::uint64_t seed, std::size_t count, double a, double b,
                                      double lo, double hi) {
  boost::random::mt19937_64 rng(mix(seed, kBackground));
  RescaledBeta draw(a, b, lo, hi);
  std::vector<double> out(count);
  for (double& v : out) v = draw(rng);
  return out;
}

Simulation generate(const SimConfig& cfg) {
  auto truth = planted_loci(cfg);

  auto coef = sample_background(cfg.seed, cfg.n_curves * cfg.n_basis, cfg.beta_a, cfg.beta_b,
                                cfg.coef_min, cfg.coef_max);
  for (const auto& motif : cfg.motifs) {
    for (const auto& occ : motif.occurrences) {
      std::copy(motif.coefficients.begin(), motif.coefficients.end(),
                coef.begin() + static_cast<std::ptrdiff_t>(occ.curve * cfg.n_basis + occ.coef_start));
    }
  }

  std::vector<double> grid(cfg.grid_len);
  for (std::size_t t = 0; t < cfg.grid_len; ++t) grid[t] = static_cast<double>(t);
  const BSplineBasis basis(grid.front(), grid.back(), cfg.n_basis, cfg.order);

  std::vector<double> values(cfg.n_curves * cfg.grid_len, 0.0);
  std::vector<double> phi(cfg.order);
  for (std::size_t t = 0; t < cfg.grid_len; ++t) {
    const std::size_t first = basis.evaluate(grid[t], phi);
    for (std::size_t i = 0; i < cfg.n_curves; ++i) {
      const double* c = coef.data() + i * cfg.n_basis + first;
      double x = 0.0;
      for (std::size_t k = 0; k < cfg.order; ++k) x += c[k] * phi[k];
      values[i * cfg.grid_len + t] = x;
    }
  }

  if (cfg.sigma > 0.0) {
    boost::random::mt19937_64 rng(mix(cfg.seed, kNoise));
    boost::random::normal_distribution<double> noise(0.0, cfg.sigma);
    for (double& v : values) v += noise(rng);
  }

  std::vector<std::string> ids(cfg.n_curves);
  for (std::size_t i = 0; i < cfg.n_curves; ++i) ids[i] = "c" + std::to_string(i + 1);
  auto ds = FunctionalDataset::validate(std::move(values), cfg.n_curves, cfg.grid_len,
                                        std::move(grid), std::move(ids));
  return Simulation{std::move(ds), std::move(truth)};
}

}  // namespace funloci

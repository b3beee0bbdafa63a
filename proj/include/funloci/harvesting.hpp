#pragma once
// Dendrogram cutting: fixed delta, delta as a fraction of H(X, S_w), or an
// elbow-selected fraction.

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "funloci/core.hpp"
#include "funloci/hscore.hpp"

namespace funloci {

struct FixedDelta {
  double delta = 0.0;
};

struct DeltaPercent {
  double fraction = 0.5;  // in (0, 1)
};

enum class ElbowMetric { NClusters, MeanSize, MeanHscore };
enum class ElbowScope { PerInterval, Global };

std::string_view to_string(ElbowMetric m);
ElbowMetric parse_elbow_metric(std::string_view name);

struct Elbow {
  std::vector<double> fractions;  // candidate delta% values, strictly increasing
  ElbowMetric metric = ElbowMetric::NClusters;
  ElbowScope scope = ElbowScope::PerInterval;
};

struct HarvestPolicy {
  std::variant<FixedDelta, DeltaPercent, Elbow> mode = FixedDelta{};
  std::size_t min_curves = 2;

  // Throws ConfigError when a parameter is out of range.
  void validate() const;
};

// Node indices of the maximal nodes with height <= threshold (depth-first,
// left before right), regardless of size.
std::vector<std::size_t> cut_nodes(const Dendrogram& tree, double threshold);

struct CutResult {
  std::vector<LocalCluster> loci;  // |I| >= min_curves, fitted
  std::size_t emitted = 0;         // passing nodes including the undersized ones
};

// `ws` must be the workspace of the tree's interval.
CutResult cut(const Dendrogram& tree, double threshold, std::size_t min_curves,
              const HscoreWorkspace& ws, ClusterModelKind model);

struct ElbowPoint {
  double delta = 0.0;
  double metric = 0.0;
};

struct ElbowChoice {
  double delta = 0.0;
  bool low_confidence = false;
};

// Max perpendicular distance to the chord through the first and last point;
// ties go to the smaller delta. Needs >= 3 points with increasing deltas.
ElbowChoice elbow_select(std::span<const ElbowPoint> curve);

// Sufficient statistics of one cut, for per-interval or pooled metrics.
struct CutStats {
  std::size_t n_clusters = 0;
  std::size_t total_size = 0;
  double total_hscore = 0.0;

  double value(ElbowMetric m) const;
  CutStats& operator+=(const CutStats& o);
};

CutStats cut_stats(const Dendrogram& tree, double threshold, std::size_t min_curves);

// The per-interval threshold delta_w a policy yields, given per-fraction
// choices already made for the elbow mode.
double fraction_threshold(double fraction, double root_height);

struct HarvestedInterval {
  SubInterval interval;
  double root_height = 0.0;
  double threshold = 0.0;
  std::size_t emitted = 0;
  bool low_confidence = false;
  std::vector<LocalCluster> loci;
};

// Harvest a single interval. For Elbow with Global scope, pass the pooled
// fraction as `global_fraction`.
HarvestedInterval harvest_interval(const Dendrogram& tree, const HarvestPolicy& policy,
                                   const HscoreWorkspace& ws, ClusterModelKind model,
                                   double global_fraction = -1.0);

// Elbow with Global scope: pool the cut statistics over all trees per
// candidate fraction and pick one fraction for every interval.
ElbowChoice select_global_fraction(std::span<const std::vector<CutStats>> per_tree_stats,
                                   const Elbow& elbow);
std::vector<CutStats> elbow_stats(const Dendrogram& tree, const Elbow& elbow,
                                  std::size_t min_curves);

// Whole-collection harvest over trees built on `ds`, concatenated in the
// order the trees are given.
std::vector<LocalCluster> harvest(std::span<const Dendrogram> trees, const HarvestPolicy& policy,
                                  const FunctionalDataset& ds, ClusterModelKind model);

}  // namespace funloci

#pragma once
// Pipeline orchestration: lotting -> per-interval flowering + harvesting on a
// worker pool -> tasting.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "funloci/core.hpp"
#include "funloci/harvesting.hpp"
#include "funloci/lotting.hpp"

namespace funloci {

struct RunConfig {
  std::string input;
  ClusterModelKind model = ClusterModelKind::Full;
  LottingPlan lotting{ExhaustiveLotting{}};
  HarvestPolicy harvest;
  bool taste = true;
  unsigned workers = 1;
  std::string out;
  std::string summary_out;
  std::string dendrogram_out;
  bool quiet = true;

  // Range checks that do not need the dataset.
  void validate() const;
};

struct DatasetFingerprint {
  std::string hash;
  std::size_t n_curves = 0;
  std::size_t n_points = 0;

  friend bool operator==(const DatasetFingerprint&, const DatasetFingerprint&) = default;
};

struct IntervalDiagnostics {
  SubInterval interval;
  double h_all = 0.0;  // H(X, S_w)
  double delta = 0.0;  // threshold used on this interval
  std::size_t n_candidates = 0;  // loci with |I| >= min_curves
  std::size_t n_emitted = 0;     // including undersized (singleton) nodes
  bool low_confidence = false;   // elbow found no clear knee

  friend bool operator==(const IntervalDiagnostics&, const IntervalDiagnostics&) = default;
};

struct MiningRun {
  RunConfig config;
  DatasetFingerprint dataset;
  std::vector<std::string> curve_ids;
  // Every candidate locus, in tasting rank order, with interesting flags.
  std::vector<LocalCluster> candidates;
  std::vector<IntervalDiagnostics> intervals;  // canonical interval order
  double global_fraction = -1.0;  // elbow with global scope only

  std::vector<LocalCluster> survivors() const;
  std::size_t n_survivors() const;
  std::size_t n_emitted() const;
};

struct MineProgress {
  std::size_t done = 0;
  std::size_t total = 0;
};
using ProgressFn = std::function<void(const MineProgress&)>;

// Mines an in-memory dataset; cfg.input is only echoed. Output is identical
// for any worker count.
MiningRun mine(const FunctionalDataset& ds, const RunConfig& cfg, const ProgressFn& progress = {});

// Re-runs ranking and pruning on a finished run (flags reset first).
void retaste(MiningRun& run);

// Dendrograms of the given intervals, built with the same code path as mine().
std::vector<Dendrogram> flower_all(const FunctionalDataset& ds,
                                   const std::vector<SubInterval>& intervals,
                                   ClusterModelKind model, unsigned workers);

}  // namespace funloci

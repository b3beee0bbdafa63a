#include "funloci/harvesting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace funloci {

std::string_view to_string(ElbowMetric m) {
  switch (m) {
    case ElbowMetric::NClusters: return "n_clusters";
    case ElbowMetric::MeanSize: return "mean_size";
    case ElbowMetric::MeanHscore: return "mean_hscore";
  }
  return "n_clusters";
}

ElbowMetric parse_elbow_metric(std::string_view name) {
  if (name == "n_clusters") return ElbowMetric::NClusters;
  if (name == "mean_size") return ElbowMetric::MeanSize;
  if (name == "mean_hscore") return ElbowMetric::MeanHscore;
  throw Error(ErrorCode::ConfigError, "unknown elbow metric '" + std::string(name) +
                                          "' (expected n_clusters|mean_size|mean_hscore)");
}

void HarvestPolicy::validate() const {
  if (min_curves < 1) throw Error(ErrorCode::ConfigError, "min_curves must be at least 1");
  auto check_fraction = [](double f) {
    if (!(f > 0.0 && f < 1.0)) {
      throw Error(ErrorCode::ConfigError, "delta% must lie strictly between 0 and 1");
    }
  };
  if (const auto* fd = std::get_if<FixedDelta>(&mode)) {
    if (!(fd->delta >= 0.0) || !std::isfinite(fd->delta)) {
      throw Error(ErrorCode::ConfigError, "delta must be a finite value >= 0");
    }
  } else if (const auto* dp = std::get_if<DeltaPercent>(&mode)) {
    check_fraction(dp->fraction);
  } else {
    const auto& el = std::get<Elbow>(mode);
    if (el.fractions.size() < 3) {
      throw Error(ErrorCode::ConfigError, "the elbow rule needs at least 3 candidate delta% values");
    }
    for (std::size_t k = 0; k < el.fractions.size(); ++k) {
      check_fraction(el.fractions[k]);
      if (k > 0 && !(el.fractions[k] > el.fractions[k - 1])) {
        throw Error(ErrorCode::ConfigError, "elbow candidates must be strictly increasing");
      }
    }
  }
}

std::vector<std::size_t> cut_nodes(const Dendrogram& tree, double threshold) {
  std::vector<std::size_t> out;
  if (tree.nodes.empty()) return out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t at = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[at];
    if (node.height <= threshold) {
      out.push_back(at);
      continue;
    }
    if (node.is_leaf()) continue;
    stack.push_back(static_cast<std::size_t>(node.right));
    stack.push_back(static_cast<std::size_t>(node.left));
  }
  return out;
}

CutResult cut(const Dendrogram& tree, double threshold, std::size_t min_curves,
              const HscoreWorkspace& ws, ClusterModelKind model) {
  CutResult res;
  for (std::size_t at : cut_nodes(tree, threshold)) {
    ++res.emitted;
    const auto& node = tree.nodes[at];
    if (node.curves.size() < min_curves) continue;
    auto fit = fit_estimates(ws, node.curves, model);
    LocalCluster q;
    q.curves = node.curves;
    q.interval = tree.interval;
    q.model = model;
    q.hscore = node.height;
    q.mu = fit.mu;
    q.alpha = std::move(fit.alpha);
    q.beta = std::move(fit.beta);
    res.loci.push_back(std::move(q));
  }
  return res;
}

ElbowChoice elbow_select(std::span<const ElbowPoint> curve) {
  if (curve.size() < 3) {
    throw Error(ErrorCode::TooFewElbowPoints, "elbow selection needs at least 3 points");
  }
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (!(curve[k].delta > curve[k - 1].delta)) {
      throw Error(ErrorCode::ConfigError, "elbow deltas must be strictly increasing");
    }
  }

  // Work on axes rescaled to [0, 1]; the argmax of the perpendicular
  // distance is invariant to per-axis scaling.
  const auto& first = curve.front();
  const auto& last = curve.back();
  double lo = first.metric;
  double hi = first.metric;
  for (const auto& p : curve) {
    lo = std::min(lo, p.metric);
    hi = std::max(hi, p.metric);
  }
  const double xspan = last.delta - first.delta;
  const double yspan = hi - lo;

  ElbowChoice choice{curve[1].delta, true};
  if (!(yspan > 0.0)) return choice;

  const double dy = (last.metric - first.metric) / yspan;
  const double chord = std::hypot(1.0, dy);
  double best = -1.0;
  for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
    const double x = (curve[k].delta - first.delta) / xspan;
    const double y = (curve[k].metric - first.metric) / yspan;
    const double dist = std::abs(x * dy - y) / chord;
    if (dist > best + 1e-12) {
      best = dist;
      choice.delta = curve[k].delta;
    }
  }
  choice.low_confidence = best < 1e-9;
  return choice;
}

double CutStats::value(ElbowMetric m) const {
  switch (m) {
    case ElbowMetric::NClusters: return static_cast<double>(n_clusters);
    case ElbowMetric::MeanSize:
      return n_clusters ? static_cast<double>(total_size) / static_cast<double>(n_clusters) : 0.0;
    case ElbowMetric::MeanHscore:
      return n_clusters ? total_hscore / static_cast<double>(n_clusters) : 0.0;
  }
  return 0.0;
}

CutStats& CutStats::operator+=(const CutStats& o) {
  n_clusters += o.n_clusters;
  total_size += o.total_size;
  total_hscore += o.total_hscore;
  return *this;
}

CutStats cut_stats(const Dendrogram& tree, double threshold, std::size_t min_curves) {
  CutStats s;
  for (std::size_t at : cut_nodes(tree, threshold)) {
    const auto& node = tree.nodes[at];
    if (node.curves.size() < min_curves) continue;
    ++s.n_clusters;
    s.total_size += node.curves.size();
    s.total_hscore += node.height;
  }
  return s;
}

double fraction_threshold(double fraction, double root_height) { return fraction * root_height; }

std::vector<CutStats> elbow_stats(const Dendrogram& tree, const Elbow& elbow,
                                  std::size_t min_curves) {
  std::vector<CutStats> out;
  out.reserve(elbow.fractions.size());
  for (double f : elbow.fractions) {
    out.push_back(cut_stats(tree, fraction_threshold(f, tree.root_height()), min_curves));
  }
  return out;
}

namespace {

ElbowChoice choose(const std::vector<CutStats>& stats, const Elbow& elbow) {
  std::vector<ElbowPoint> pts;
  pts.reserve(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    pts.push_back({elbow.fractions[k], stats[k].value(elbow.metric)});
  }
  return elbow_select(pts);
}

}  // namespace

ElbowChoice select_global_fraction(std::span<const std::vector<CutStats>> per_tree_stats,
                                   const Elbow& elbow) {
  std::vector<CutStats> pooled(elbow.fractions.size());
  for (const auto& stats : per_tree_stats) {
    for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += stats[k];
  }
  return choose(pooled, elbow);
}

HarvestedInterval harvest_interval(const Dendrogram& tree, const HarvestPolicy& policy,
                                   const HscoreWorkspace& ws, ClusterModelKind model,
                                   double global_fraction) {
  HarvestedInterval out;
  out.interval = tree.interval;
  out.root_height = tree.root_height();

  if (const auto* fd = std::get_if<FixedDelta>(&policy.mode)) {
    out.threshold = fd->delta;
  } else if (const auto* dp = std::get_if<DeltaPercent>(&policy.mode)) {
    out.threshold = fraction_threshold(dp->fraction, out.root_height);
  } else {
    const auto& el = std::get<Elbow>(policy.mode);
    double fraction = global_fraction;
    if (el.scope == ElbowScope::PerInterval) {
      const auto choice = choose(elbow_stats(tree, el, policy.min_curves), el);
      fraction = choice.delta;
      out.low_confidence = choice.low_confidence;
    } else if (!(fraction > 0.0)) {
      throw Error(ErrorCode::ConfigError, "global elbow fraction was not selected");
    }
    out.threshold = fraction_threshold(fraction, out.root_height);
  }

  auto res = cut(tree, out.threshold, policy.min_curves, ws, model);
  out.emitted = res.emitted;
  out.loci = std::move(res.loci);
  return out;
}

std::vector<LocalCluster> harvest(std::span<const Dendrogram> trees, const HarvestPolicy& policy,
                                  const FunctionalDataset& ds, ClusterModelKind model) {
  policy.validate();
  double global_fraction = -1.0;
  if (const auto* el = std::get_if<Elbow>(&policy.mode); el && el->scope == ElbowScope::Global) {
    std::vector<std::vector<CutStats>> stats;
    stats.reserve(trees.size());
    for (const auto& t : trees) stats.push_back(elbow_stats(t, *el, policy.min_curves));
    global_fraction = select_global_fraction(stats, *el).delta;
  }
  std::vector<LocalCluster> out;
  for (const auto& t : trees) {
    const HscoreWorkspace ws(ds, t.interval);
    auto h = harvest_interval(t, policy, ws, model, global_fraction);
    for (auto& q : h.loci) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace funloci

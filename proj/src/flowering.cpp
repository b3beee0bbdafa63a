#include "funloci/flowering.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace funloci {

namespace {

double diameter(const DissimilarityMatrix& d, std::span<const CurveIndex> members) {
  double best = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    const auto row = d.row(members[a]);
    for (std::size_t b = a + 1; b < members.size(); ++b) best = std::max(best, row[members[b]]);
  }
  return best;
}

double sum_to(const DissimilarityMatrix& d, CurveIndex h, std::span<const CurveIndex> group) {
  const auto row = d.row(h);
  double s = 0.0;
  for (CurveIndex g : group) s += row[g];
  return s;
}

// One DIANA split of `members` (sorted). Returns (remaining, splinter), both
// sorted, or nothing when the cluster is a singleton or has zero diameter.
std::optional<std::pair<CurveSet, CurveSet>> split(const DissimilarityMatrix& d,
                                                   const CurveSet& members) {
  if (members.size() < 2 || diameter(d, members) == 0.0) return std::nullopt;

  // Splinter seed: largest average dissimilarity to the rest.
  std::size_t seed = 0;
  double seed_avg = -1.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const double avg = sum_to(d, members[k], members) / static_cast<double>(members.size() - 1);
    if (avg > seed_avg) {
      seed_avg = avg;
      seed = k;
    }
  }

  CurveSet splinter{members[seed]};
  CurveSet rest;
  rest.reserve(members.size() - 1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k != seed) rest.push_back(members[k]);
  }

  while (rest.size() > 1) {
    std::size_t best = rest.size();
    double best_gap = 0.0;
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const CurveIndex h = rest[k];
      // d(h, h) = 0, so summing over `rest` equals summing over rest \ {h}.
      const double to_rest = sum_to(d, h, rest) / static_cast<double>(rest.size() - 1);
      const double to_splinter = sum_to(d, h, splinter) / static_cast<double>(splinter.size());
      const double gap = to_rest - to_splinter;
      if (gap > best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    if (best == rest.size()) break;
    const CurveIndex moved = rest[best];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    splinter.insert(std::upper_bound(splinter.begin(), splinter.end(), moved), moved);
  }
  return std::make_pair(std::move(rest), std::move(splinter));
}

}  // namespace

Dendrogram diana(const DissimilarityMatrix& dissim, const NodeHeightFn& height) {
  Dendrogram tree;
  const std::size_t n = dissim.size();
  if (n == 0) return tree;

  CurveSet all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<CurveIndex>(i);
  tree.nodes.push_back(DendrogramNode{std::move(all), 0.0, -1, -1});

  // Each cluster is split independently of the others, so processing order
  // does not change the resulting tree.
  std::vector<std::size_t> pending{0};
  while (!pending.empty()) {
    const std::size_t at = pending.back();
    pending.pop_back();
    tree.nodes[at].height = height(tree.nodes[at].curves);
    auto parts = split(dissim, tree.nodes[at].curves);
    if (!parts) continue;

    auto& [a, b] = *parts;
    if (b.front() < a.front()) std::swap(a, b);
    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(DendrogramNode{std::move(a), 0.0, -1, -1});
    tree.nodes.push_back(DendrogramNode{std::move(b), 0.0, -1, -1});
    tree.nodes[at].left = left;
    tree.nodes[at].right = left + 1;
    pending.push_back(static_cast<std::size_t>(left) + 1);
    pending.push_back(static_cast<std::size_t>(left));
  }
  return tree;
}

Dendrogram flower_interval(const HscoreWorkspace& ws, ClusterModelKind model) {
  const auto d = dissimilarity_matrix(ws, model);
  Dendrogram tree =
      diana(d, [&](std::span<const CurveIndex> curves) { return hscore(ws, curves, model); });
  tree.interval = ws.interval();
  return tree;
}

Dendrogram flower_interval(const FunctionalDataset& ds, const SubInterval& s,
                           ClusterModelKind model) {
  return flower_interval(HscoreWorkspace(ds, s), model);
}

}  // namespace funloci

#pragma once
// Divisive (DIANA) clustering of the curves on one sub-interval, with the
// H-score of each node's curve set as its dendrogram height.

#include <functional>
#include <span>

#include "funloci/core.hpp"
#include "funloci/hscore.hpp"

namespace funloci {

// Height of a node, given its sorted curve set.
using NodeHeightFn = std::function<double(std::span<const CurveIndex>)>;

// Splits top-down until every unsplit cluster is a singleton or has zero
// diameter. Children are ordered so the left one holds the smaller curve
// index. The returned tree's `interval` is left default-initialized.
Dendrogram diana(const DissimilarityMatrix& dissim, const NodeHeightFn& height);

// dissimilarity_matrix + diana on the workspace's interval.
Dendrogram flower_interval(const HscoreWorkspace& ws, ClusterModelKind model);
Dendrogram flower_interval(const FunctionalDataset& ds, const SubInterval& s,
                           ClusterModelKind model);

}  // namespace funloci

#pragma once
// Ranking and redundancy pruning of candidate loci.

#include <span>
#include <vector>

#include "funloci/core.hpp"

namespace funloci {

// Strict weak order: |S| desc, |I| desc, H asc, start asc, curve set
// lexicographic asc.
bool rank_before(const LocalCluster& a, const LocalCluster& b);

std::vector<LocalCluster> rank(std::vector<LocalCluster> candidates);

// q1's curves are a subset of q2's, |S1| <= |S2| and the windows share at
// least half of S1's points (2 * overlap >= |S1|). Nested loci are the
// full-overlap case.
bool is_shifted_overlap(const LocalCluster& q1, const LocalCluster& q2);

// Ranks the candidates and flags the interesting ones: each locus is
// compared with the interesting loci ranked before it.
std::vector<LocalCluster> taste(std::vector<LocalCluster> candidates);

std::vector<LocalCluster> survivors(std::span<const LocalCluster> tasted);

}  // namespace funloci

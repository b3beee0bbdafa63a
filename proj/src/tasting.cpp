#include "funloci/tasting.hpp"

#include <algorithm>
#include <cstdint>

namespace funloci {

bool rank_before(const LocalCluster& a, const LocalCluster& b) {
  const std::size_t la = a.interval.length();
  const std::size_t lb = b.interval.length();
  if (la != lb) return la > lb;
  if (a.curves.size() != b.curves.size()) return a.curves.size() > b.curves.size();
  if (a.hscore != b.hscore) return a.hscore < b.hscore;
  if (a.interval.start != b.interval.start) return a.interval.start < b.interval.start;
  return a.curves < b.curves;
}

std::vector<LocalCluster> rank(std::vector<LocalCluster> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), rank_before);
  return candidates;
}

bool is_shifted_overlap(const LocalCluster& q1, const LocalCluster& q2) {
  const std::size_t len1 = q1.interval.length();
  if (len1 > q2.interval.length()) return false;
  if (2 * q1.interval.overlap(q2.interval) < len1) return false;
  return std::includes(q2.curves.begin(), q2.curves.end(), q1.curves.begin(), q1.curves.end());
}

namespace {

class CurveBits {
 public:
  CurveBits(const CurveSet& curves, std::size_t words) : bits_(words, 0) {
    for (CurveIndex c : curves) bits_[c >> 6] |= std::uint64_t{1} << (c & 63);
  }

  bool subset_of(const CurveBits& other) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      if (bits_[w] & ~other.bits_[w]) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> bits_;
};

}  // namespace

std::vector<LocalCluster> taste(std::vector<LocalCluster> candidates) {
  candidates = rank(std::move(candidates));

  CurveIndex max_curve = 0;
  for (const auto& q : candidates) {
    if (!q.curves.empty()) max_curve = std::max(max_curve, q.curves.back());
  }
  const std::size_t words = static_cast<std::size_t>(max_curve) / 64 + 1;

  struct Kept {
    SubInterval interval;
    std::size_t n_curves;
    CurveBits bits;
  };
  std::vector<Kept> kept;

  for (auto& q : candidates) {
    const std::size_t len = q.interval.length();
    const CurveBits bits(q.curves, words);
    bool redundant = false;
    for (const auto& k : kept) {
      if (len > k.interval.length() || q.curves.size() > k.n_curves) continue;
      if (2 * q.interval.overlap(k.interval) < len) continue;
      if (bits.subset_of(k.bits)) {
        redundant = true;
        break;
      }
    }
    q.interesting = !redundant;
    if (!redundant) kept.push_back(Kept{q.interval, q.curves.size(), bits});
  }
  return candidates;
}

std::vector<LocalCluster> survivors(std::span<const LocalCluster> tasted) {
  std::vector<LocalCluster> out;
  for (const auto& q : tasted) {
    if (q.interesting) out.push_back(q);
  }
  return out;
}

}  // namespace funloci

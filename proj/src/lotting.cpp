#include "funloci/lotting.hpp"

#include <algorithm>
#include <string>

namespace funloci {

namespace {

bool canonical_less(const SubInterval& a, const SubInterval& b) {
  if (a.start != b.start) return a.start < b.start;
  return a.length() < b.length();
}

}  // namespace

std::size_t exhaustive_count(std::size_t domain_len, std::size_t min_length) {
  if (min_length > domain_len) return 0;
  const std::size_t k = domain_len - min_length + 1;
  return k * (k + 1) / 2;
}

std::vector<SubInterval> enumerate_exhaustive(std::size_t domain_len, std::size_t min_length) {
  if (min_length < 2 || min_length > domain_len) {
    throw Error(ErrorCode::MinLengthOutOfRange,
                "minimum length " + std::to_string(min_length) + " must lie in [2, " +
                    std::to_string(domain_len) + "]");
  }
  std::vector<SubInterval> out;
  out.reserve(exhaustive_count(domain_len, min_length));
  for (std::size_t start = 0; start + min_length <= domain_len; ++start) {
    for (std::size_t end = start + min_length - 1; end < domain_len; ++end) {
      out.push_back(SubInterval{start, end});
    }
  }
  return out;
}

std::vector<SubInterval> enumerate_custom(std::size_t domain_len,
                                          const std::vector<std::size_t>& starts,
                                          const std::vector<std::size_t>& lengths,
                                          std::size_t min_length, EdgePolicy edge) {
  if (starts.empty()) throw Error(ErrorCode::EmptyStartList, "start list is empty");
  if (lengths.empty()) throw Error(ErrorCode::EmptyLengthList, "length list is empty");
  if (min_length < 2) {
    throw Error(ErrorCode::MinLengthOutOfRange, "minimum length must be at least 2");
  }
  for (std::size_t a : starts) {
    if (a >= domain_len) {
      throw Error(ErrorCode::InvalidInterval,
                  "start " + std::to_string(a + 1) + " lies outside the domain");
    }
  }
  for (std::size_t c : lengths) {
    if (c < 2) throw Error(ErrorCode::InvalidInterval, "window lengths must be at least 2");
  }

  std::vector<SubInterval> out;
  out.reserve(starts.size() * lengths.size());
  for (std::size_t a : starts) {
    for (std::size_t c : lengths) {
      std::size_t end = a + c - 1;
      if (end >= domain_len) {
        if (edge == EdgePolicy::Discard) continue;
        end = domain_len - 1;
      }
      if (end - a + 1 < min_length) continue;
      out.push_back(SubInterval{a, end});
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SubInterval> LottingPlan::produce(std::size_t domain_len) const {
  if (const auto* ex = std::get_if<ExhaustiveLotting>(&mode)) {
    return enumerate_exhaustive(domain_len, ex->min_length);
  }
  const auto& cu = std::get<CustomLotting>(mode);
  return enumerate_custom(domain_len, cu.starts, cu.lengths, cu.min_length, cu.edge);
}

}  // namespace funloci

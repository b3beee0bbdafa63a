#pragma once
// Interval enumeration: which sub-intervals S_w get mined.

#include <cstddef>
#include <variant>
#include <vector>

#include "funloci/core.hpp"

namespace funloci {

// What to do with a custom window (a_i, c_j) that runs past the last grid
// point: clamp its end to |T|-1, or discard it.
enum class EdgePolicy { Clamp, Discard };

struct ExhaustiveLotting {
  std::size_t min_length = 2;
};

struct CustomLotting {
  std::vector<std::size_t> starts;   // 0-based
  std::vector<std::size_t> lengths;  // in grid points
  std::size_t min_length = 2;
  EdgePolicy edge = EdgePolicy::Clamp;
};

struct LottingPlan {
  std::variant<ExhaustiveLotting, CustomLotting> mode;

  // Deduplicated, ordered by (start asc, length asc).
  std::vector<SubInterval> produce(std::size_t domain_len) const;
};

// All windows with at least `min_length` points; 2 <= min_length <= domain_len.
std::vector<SubInterval> enumerate_exhaustive(std::size_t domain_len, std::size_t min_length);

// Closed-form count sum_{l=c..|T|} (|T| - l + 1).
std::size_t exhaustive_count(std::size_t domain_len, std::size_t min_length);

// Windows [a, a + c - 1] for every start a and length c, with the overrun
// handled per `edge`; windows shorter than `min_length` are dropped.
std::vector<SubInterval> enumerate_custom(std::size_t domain_len,
                                          const std::vector<std::size_t>& starts,
                                          const std::vector<std::size_t>& lengths,
                                          std::size_t min_length = 2,
                                          EdgePolicy edge = EdgePolicy::Clamp);

}  // namespace funloci

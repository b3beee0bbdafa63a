#pragma once
// Shared domain types for the local-cluster miner.
//
// Curves are stored row-major (curve i, grid point t). All indices are
// 0-based in memory; conversion to 1-based happens at the I/O boundary.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace funloci {

enum class ErrorCode {
  // input data
  NonRectangular,
  NonFiniteValue,
  NonUniformGrid,
  TooFewPoints,
  ParseError,
  // operation preconditions
  EmptyCurveSet,
  InvalidCurveIndex,
  InvalidInterval,
  MinLengthOutOfRange,
  EmptyStartList,
  EmptyLengthList,
  InvalidOrder,
  OverlappingMotifPlacements,
  MotifOutOfRange,
  TooFewElbowPoints,
  // configuration / environment
  ConfigError,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised for a NaN/inf cell; row and col are 0-based.
class NonFiniteValueError : public Error {
 public:
  NonFiniteValueError(std::size_t row, std::size_t col);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

using CurveIndex = std::uint32_t;
using CurveSet = std::vector<CurveIndex>;

// Closed window [start, end] of grid indices.
struct SubInterval {
  std::size_t start = 0;
  std::size_t end = 1;

  std::size_t length() const noexcept { return end - start + 1; }
  bool contains(const SubInterval& other) const noexcept {
    return start <= other.start && other.end <= end;
  }
  // Number of grid points shared with `other` (0 when disjoint).
  std::size_t overlap(const SubInterval& other) const noexcept;

  // Validates 0 <= start <= end < domain_len and length >= 2.
  static SubInterval make(std::size_t start, std::size_t end, std::size_t domain_len);

  friend bool operator==(const SubInterval&, const SubInterval&) = default;
  friend auto operator<=>(const SubInterval&, const SubInterval&) = default;
};

enum class ClusterModelKind { Full, RowEffects, ColumnPattern, Constant };

constexpr bool has_row_effects(ClusterModelKind m) noexcept {
  return m == ClusterModelKind::Full || m == ClusterModelKind::RowEffects;
}
constexpr bool has_column_pattern(ClusterModelKind m) noexcept {
  return m == ClusterModelKind::Full || m == ClusterModelKind::ColumnPattern;
}

// "full", "rows", "cols", "const"
std::string_view to_string(ClusterModelKind m);
ClusterModelKind parse_model(std::string_view name);

class FunctionalDataset {
 public:
  // Takes ownership of a row-major matrix. An empty grid means 0,1,...,M-1;
  // empty ids mean "1".."N".
  static FunctionalDataset validate(std::vector<double> values, std::size_t n_curves,
                                    std::size_t n_points, std::vector<double> grid = {},
                                    std::vector<std::string> curve_ids = {});
  static FunctionalDataset validate(const std::vector<std::vector<double>>& rows,
                                    std::vector<double> grid = {},
                                    std::vector<std::string> curve_ids = {});

  std::size_t n_curves() const noexcept { return n_curves_; }
  std::size_t n_points() const noexcept { return n_points_; }

  std::span<const double> row(std::size_t curve) const noexcept {
    return {values_.data() + curve * n_points_, n_points_};
  }
  std::span<const double> window(std::size_t curve, const SubInterval& s) const noexcept {
    return {values_.data() + curve * n_points_ + s.start, s.length()};
  }
  double at(std::size_t curve, std::size_t t) const noexcept {
    return values_[curve * n_points_ + t];
  }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<std::string>& curve_ids() const noexcept { return curve_ids_; }

  // 64-bit FNV-1a over shape, grid and values; lowercase hex.
  std::string fingerprint() const;

  friend bool operator==(const FunctionalDataset&, const FunctionalDataset&) = default;

 private:
  FunctionalDataset() = default;

  std::vector<double> values_;
  std::vector<double> grid_;
  std::vector<std::string> curve_ids_;
  std::size_t n_curves_ = 0;
  std::size_t n_points_ = 0;
};

// Functional local cluster Q = (I, S) with its fitted additive model
// f_i(t) ~ mu + alpha_i + beta(t).
struct LocalCluster {
  CurveSet curves;  // sorted ascending
  SubInterval interval;
  ClusterModelKind model = ClusterModelKind::Full;
  double hscore = 0.0;
  double mu = 0.0;
  std::vector<double> alpha;  // one per curve, same order as `curves`
  std::vector<double> beta;   // one per grid point of `interval`
  bool interesting = false;

  friend bool operator==(const LocalCluster&, const LocalCluster&) = default;
};

struct DendrogramNode {
  CurveSet curves;
  double height = 0.0;  // H-score of `curves` on the tree's interval
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const noexcept { return left < 0; }

  friend bool operator==(const DendrogramNode&, const DendrogramNode&) = default;
};

// Node 0 is the root; children always have larger indices than parents.
struct Dendrogram {
  SubInterval interval;
  std::vector<DendrogramNode> nodes;

  const DendrogramNode& root() const { return nodes.front(); }
  // H(X, S_w), the score of all curves on the interval.
  double root_height() const { return nodes.front().height; }
  std::vector<std::size_t> leaves() const;
};

}  // namespace funloci

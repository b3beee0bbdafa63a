#include "funloci/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace funloci {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRectangular: return "NonRectangular";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyCurveSet: return "EmptyCurveSet";
    case ErrorCode::InvalidCurveIndex: return "InvalidCurveIndex";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::MinLengthOutOfRange: return "MinLengthOutOfRange";
    case ErrorCode::EmptyStartList: return "EmptyStartList";
    case ErrorCode::EmptyLengthList: return "EmptyLengthList";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::OverlappingMotifPlacements: return "OverlappingMotifPlacements";
    case ErrorCode::MotifOutOfRange: return "MotifOutOfRange";
    case ErrorCode::TooFewElbowPoints: return "TooFewPoints";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string non_finite_message(std::size_t row, std::size_t col) {
  std::ostringstream os;
  os << "non-finite value at row " << row + 1 << ", column " << col + 1;
  return os.str();
}

}  // namespace

NonFiniteValueError::NonFiniteValueError(std::size_t row, std::size_t col)
    : Error(ErrorCode::NonFiniteValue, non_finite_message(row, col)), row_(row), col_(col) {}

std::size_t SubInterval::overlap(const SubInterval& other) const noexcept {
  const std::size_t lo = std::max(start, other.start);
  const std::size_t hi = std::min(end, other.end);
  return lo <= hi ? hi - lo + 1 : 0;
}

SubInterval SubInterval::make(std::size_t start, std::size_t end, std::size_t domain_len) {
  if (start > end || end >= domain_len || end - start + 1 < 2) {
    std::ostringstream os;
    os << "invalid sub-interval [" << start << ", " << end << "] for a domain of " << domain_len
       << " points";
    throw Error(ErrorCode::InvalidInterval, os.str());
  }
  return SubInterval{start, end};
}

std::string_view to_string(ClusterModelKind m) {
  switch (m) {
    case ClusterModelKind::Full: return "full";
    case ClusterModelKind::RowEffects: return "rows";
    case ClusterModelKind::ColumnPattern: return "cols";
    case ClusterModelKind::Constant: return "const";
  }
  return "full";
}

ClusterModelKind parse_model(std::string_view name) {
  if (name == "full") return ClusterModelKind::Full;
  if (name == "rows") return ClusterModelKind::RowEffects;
  if (name == "cols") return ClusterModelKind::ColumnPattern;
  if (name == "const") return ClusterModelKind::Constant;
  throw Error(ErrorCode::ConfigError, "unknown model kind '" + std::string(name) +
                                          "' (expected full|rows|cols|const)");
}

FunctionalDataset FunctionalDataset::validate(std::vector<double> values, std::size_t n_curves,
                                              std::size_t n_points, std::vector<double> grid,
                                              std::vector<std::string> curve_ids) {
  if (n_curves == 0 || values.size() != n_curves * n_points) {
    throw Error(ErrorCode::NonRectangular, "value matrix is empty or not N x |T|");
  }
  if (n_points < 2) {
    throw Error(ErrorCode::TooFewPoints, "a dataset needs at least 2 grid points");
  }
  for (std::size_t i = 0; i < n_curves; ++i) {
    for (std::size_t t = 0; t < n_points; ++t) {
      if (!std::isfinite(values[i * n_points + t])) throw NonFiniteValueError(i, t);
    }
  }

  if (grid.empty()) {
    grid.resize(n_points);
    for (std::size_t t = 0; t < n_points; ++t) grid[t] = static_cast<double>(t);
  }
  if (grid.size() != n_points) {
    throw Error(ErrorCode::NonRectangular, "grid length does not match the number of columns");
  }
  for (std::size_t t = 0; t < n_points; ++t) {
    if (!std::isfinite(grid[t])) {
      throw Error(ErrorCode::NonUniformGrid, "grid coordinate is not finite");
    }
  }
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) {
    throw Error(ErrorCode::NonUniformGrid, "grid must be strictly increasing");
  }
  for (std::size_t t = 1; t + 1 < n_points; ++t) {
    const double d = grid[t + 1] - grid[t];
    if (std::abs(d - step) > 1e-9 * step) {
      std::ostringstream os;
      os << "grid spacing is not constant (step " << t + 1 << " is " << d << ", expected " << step
         << ")";
      throw Error(ErrorCode::NonUniformGrid, os.str());
    }
  }

  if (curve_ids.empty()) {
    curve_ids.reserve(n_curves);
    for (std::size_t i = 0; i < n_curves; ++i) curve_ids.push_back(std::to_string(i + 1));
  }
  if (curve_ids.size() != n_curves) {
    throw Error(ErrorCode::NonRectangular, "curve id count does not match the number of rows");
  }

  FunctionalDataset ds;
  ds.values_ = std::move(values);
  ds.grid_ = std::move(grid);
  ds.curve_ids_ = std::move(curve_ids);
  ds.n_curves_ = n_curves;
  ds.n_points_ = n_points;
  return ds;
}

FunctionalDataset FunctionalDataset::validate(const std::vector<std::vector<double>>& rows,
                                              std::vector<double> grid,
                                              std::vector<std::string> curve_ids) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::NonRectangular, "value matrix is empty");
  }
  const std::size_t m = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * m);
  for (const auto& r : rows) {
    if (r.size() != m) throw Error(ErrorCode::NonRectangular, "rows have different lengths");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return validate(std::move(flat), rows.size(), m, std::move(grid), std::move(curve_ids));
}

namespace {

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ull;

  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char le[8];
    for (int k = 0; k < 8; ++k) le[k] = static_cast<unsigned char>(v >> (8 * k));
    bytes(le, 8);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
};

}  // namespace

std::string FunctionalDataset::fingerprint() const {
  Fnv1a f;
  f.u64(n_curves_);
  f.u64(n_points_);
  for (double g : grid_) f.f64(g);
  for (double v : values_) f.f64(v);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 0; k < 16; ++k) out[15 - k] = kHex[(f.h >> (4 * k)) & 0xF];
  return out;
}

std::vector<std::size_t> Dendrogram::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].is_leaf()) out.push_back(k);
  }
  return out;
}

}  // namespace funloci

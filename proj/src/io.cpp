#include "funloci/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace funloci {

using json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t at = 0;
  for (;;) {
    const std::size_t comma = line.find(',', at);
    out.push_back(trim(line.substr(at, comma == std::string_view::npos ? line.npos : comma - at)));
    if (comma == std::string_view::npos) break;
    at = comma + 1;
  }
  return out;
}

// Trailing number in a header cell ("t12" -> 12, "0.5" -> 0.5).
std::optional<double> header_coordinate(std::string_view cell) {
  if (auto v = parse_number(cell)) return v;
  std::size_t k = cell.size();
  while (k > 0) {
    const char c = cell[k - 1];
    if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E') {
      --k;
    } else {
      break;
    }
  }
  // Shrink from the left until the suffix parses, so "time-3" gives -3 and
  // "value" gives nothing.
  for (; k < cell.size(); ++k) {
    if (auto v = parse_number(cell.substr(k))) return v;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::SchemaError, "results document: " + what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T read_field(const json& obj, const char* key) {
  try {
    return field(obj, key).get<T>();
  } catch (const json::exception&) {
    schema_error(std::string("field '") + key + "' has the wrong type");
  }
}

json to_one_based(const CurveSet& curves) {
  json out = json::array();
  for (CurveIndex c : curves) out.push_back(static_cast<std::uint64_t>(c) + 1);
  return out;
}

CurveSet from_one_based(const json& arr, std::size_t n_curves) {
  if (!arr.is_array()) schema_error("curve list must be an array");
  CurveSet out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_unsigned()) schema_error("curve index must be a positive integer");
    const auto c = v.get<std::uint64_t>();
    if (c < 1 || c > n_curves) schema_error("curve index out of range");
    out.push_back(static_cast<CurveIndex>(c - 1));
  }
  return out;
}

json config_to_json(const RunConfig& cfg) {
  json c;
  c["input"] = cfg.input;
  c["model"] = std::string(to_string(cfg.model));

  json lot;
  if (const auto* ex = std::get_if<ExhaustiveLotting>(&cfg.lotting.mode)) {
    lot["mode"] = "exhaustive";
    lot["min_len"] = ex->min_length;
  } else {
    const auto& cu = std::get<CustomLotting>(cfg.lotting.mode);
    lot["mode"] = "custom";
    json starts = json::array();
    for (auto s : cu.starts) starts.push_back(s + 1);
    lot["starts"] = std::move(starts);
    lot["lengths"] = cu.lengths;
    lot["min_len"] = cu.min_length;
    lot["edge"] = cu.edge == EdgePolicy::Clamp ? "clamp" : "discard";
  }
  c["lotting"] = std::move(lot);

  json h;
  if (const auto* fd = std::get_if<FixedDelta>(&cfg.harvest.mode)) {
    h["mode"] = "delta";
    h["delta"] = fd->delta;
  } else if (const auto* dp = std::get_if<DeltaPercent>(&cfg.harvest.mode)) {
    h["mode"] = "delta_pct";
    h["delta_pct"] = dp->fraction;
  } else {
    const auto& el = std::get<Elbow>(cfg.harvest.mode);
    h["mode"] = "elbow";
    h["delta_pct"] = el.fractions;
    h["metric"] = std::string(to_string(el.metric));
    h["scope"] = el.scope == ElbowScope::Global ? "global" : "interval";
  }
  h["min_curves"] = cfg.harvest.min_curves;
  c["harvest"] = std::move(h);
  c["taste"] = cfg.taste;
  return c;
}

RunConfig config_from_json(const json& c) {
  RunConfig cfg;
  cfg.input = read_field<std::string>(c, "input");
  try {
    cfg.model = parse_model(read_field<std::string>(c, "model"));
  } catch (const Error& e) {
    schema_error(e.what());
  }

  const auto& lot = field(c, "lotting");
  const auto lmode = read_field<std::string>(lot, "mode");
  if (lmode == "exhaustive") {
    cfg.lotting.mode = ExhaustiveLotting{read_field<std::size_t>(lot, "min_len")};
  } else if (lmode == "custom") {
    CustomLotting cu;
    for (auto s : read_field<std::vector<std::size_t>>(lot, "starts")) {
      if (s < 1) schema_error("custom starts are 1-based");
      cu.starts.push_back(s - 1);
    }
    cu.lengths = read_field<std::vector<std::size_t>>(lot, "lengths");
    cu.min_length = read_field<std::size_t>(lot, "min_len");
    const auto edge = read_field<std::string>(lot, "edge");
    if (edge != "clamp" && edge != "discard") schema_error("unknown edge policy '" + edge + "'");
    cu.edge = edge == "clamp" ? EdgePolicy::Clamp : EdgePolicy::Discard;
    cfg.lotting.mode = std::move(cu);
  } else {
    schema_error("unknown lotting mode '" + lmode + "'");
  }

  const auto& h = field(c, "harvest");
  const auto hmode = read_field<std::string>(h, "mode");
  if (hmode == "delta") {
    cfg.harvest.mode = FixedDelta{read_field<double>(h, "delta")};
  } else if (hmode == "delta_pct") {
    cfg.harvest.mode = DeltaPercent{read_field<double>(h, "delta_pct")};
  } else if (hmode == "elbow") {
    Elbow el;
    el.fractions = read_field<std::vector<double>>(h, "delta_pct");
    try {
      el.metric = parse_elbow_metric(read_field<std::string>(h, "metric"));
    } catch (const Error& e) {
      schema_error(e.what());
    }
    el.scope = read_field<std::string>(h, "scope") == "global" ? ElbowScope::Global : ElbowScope::PerInterval;
    cfg.harvest.mode = std::move(el);
  } else {
    schema_error("unknown harvest mode '" + hmode + "'");
  }
  cfg.harvest.min_curves = read_field<std::size_t>(h, "min_curves");
  cfg.taste = read_field<bool>(c, "taste");
  return cfg;
}

}  // namespace

FunctionalDataset parse_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string text;
  for (std::size_t no = 1; std::getline(in, text); ++no) {
    if (trim(text).empty()) continue;
    lines.emplace_back(no, std::move(text));
  }
  if (lines.empty()) throw Error(ErrorCode::NonRectangular, "input holds no rows");

  std::vector<std::vector<std::string_view>> cells;
  cells.reserve(lines.size());
  for (const auto& [no, line] : lines) cells.push_back(split(line));

  bool header = false;
  for (auto c : cells.front()) header = header || !parse_number(c);
  const std::size_t first_data = header ? 1 : 0;

  bool id_column = false;
  for (std::size_t r = first_data; r < cells.size(); ++r) {
    id_column = id_column || !parse_number(cells[r].front());
  }
  const std::size_t skip = id_column ? 1 : 0;

  if (first_data == cells.size()) throw Error(ErrorCode::NonRectangular, "input holds no data rows");
  const std::size_t width = cells[first_data].size();
  if (width <= skip) throw Error(ErrorCode::NonRectangular, "rows hold no values");
  const std::size_t m = width - skip;

  std::vector<double> grid;
  if (header) {
    const auto& hc = cells.front();
    if (hc.size() != width) {
      throw Error(ErrorCode::NonRectangular,
                  "line " + std::to_string(lines.front().first) + ": header has " +
                      std::to_string(hc.size()) + " cells, rows have " + std::to_string(width));
    }
    for (std::size_t k = skip; k < width; ++k) {
      const auto v = header_coordinate(hc[k]);
      if (!v) {
        grid.clear();
        break;
      }
      grid.push_back(*v);
    }
  }

  const std::size_t n = cells.size() - first_data;
  std::vector<double> values;
  values.reserve(n * m);
  std::vector<std::string> ids;
  for (std::size_t r = first_data; r < cells.size(); ++r) {
    const std::size_t no = lines[r].first;
    const auto& row = cells[r];
    if (row.size() != width) {
      throw Error(ErrorCode::NonRectangular, "line " + std::to_string(no) + ": expected " +
                                                 std::to_string(width) + " cells, found " +
                                                 std::to_string(row.size()));
    }
    if (id_column) ids.emplace_back(row.front());
    for (std::size_t k = skip; k < width; ++k) {
      const auto v = parse_number(row[k]);
      if (!v) parse_error(no, "cell " + std::to_string(k + 1) + " is not a number: '" + std::string(row[k]) + "'");
      values.push_back(*v);
    }
  }
  return FunctionalDataset::validate(std::move(values), n, m, std::move(grid), std::move(ids));
}

FunctionalDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_csv(in);
}

void write_csv(const FunctionalDataset& ds, std::ostream& out) {
  out << "id";
  for (double g : ds.grid()) out << ',' << format_double(g);
  out << '\n';
  for (std::size_t i = 0; i < ds.n_curves(); ++i) {
    out << ds.curve_ids()[i];
    for (double v : ds.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_csv(const FunctionalDataset& ds, const std::string& path) {
  std::ostringstream s;
  write_csv(ds, s);
  write_text(path, s.str());
}

RenderedResults render_results(const MiningRun& run, const std::string& sidecar_name) {
  json doc;
  doc["schema_version"] = kResultsSchemaVersion;
  doc["config"] = config_to_json(run.config);

  json ds;
  ds["fingerprint"] = run.dataset.hash;
  ds["n_curves"] = run.dataset.n_curves;
  ds["n_points"] = run.dataset.n_points;
  ds["curve_ids"] = run.curve_ids;
  doc["dataset"] = std::move(ds);

  json summary;
  summary["n_intervals"] = run.intervals.size();
  summary["n_emitted"] = run.n_emitted();
  summary["n_candidates"] = run.candidates.size();
  summary["n_interesting"] = run.n_survivors();
  summary["global_delta_pct"] = run.global_fraction > 0.0 ? json(run.global_fraction) : json(nullptr);
  doc["summary"] = std::move(summary);

  json intervals = json::array();
  for (const auto& d : run.intervals) {
    json j;
    j["start"] = d.interval.start + 1;
    j["end"] = d.interval.end + 1;
    j["h_all"] = d.h_all;
    j["delta"] = d.delta;
    j["n_candidates"] = d.n_candidates;
    j["n_emitted"] = d.n_emitted;
    j["low_confidence"] = d.low_confidence;
    intervals.push_back(std::move(j));
  }
  doc["intervals"] = std::move(intervals);

  json side_beta = json::object();
  json loci = json::array();
  for (std::size_t k = 0; k < run.candidates.size(); ++k) {
    const auto& q = run.candidates[k];
    const std::string id = std::to_string(k + 1);
    json j;
    j["id"] = k + 1;
    j["curves"] = to_one_based(q.curves);
    j["start"] = q.interval.start + 1;
    j["end"] = q.interval.end + 1;
    j["model"] = std::string(to_string(q.model));
    j["hscore"] = q.hscore;
    j["mu"] = q.mu;
    j["alpha"] = q.alpha;
    if (q.beta.size() > kInlineBetaLimit) {
      side_beta[id] = q.beta;
      j["beta"] = json{{"sidecar", sidecar_name}, {"key", id}};
    } else {
      j["beta"] = q.beta;
    }
    j["interesting"] = q.interesting;
    loci.push_back(std::move(j));
  }
  doc["loci"] = std::move(loci);

  RenderedResults out;
  out.document = doc.dump() + "\n";
  if (!side_beta.empty()) {
    json side;
    side["schema_version"] = kResultsSchemaVersion;
    side["beta"] = std::move(side_beta);
    out.sidecar = side.dump() + "\n";
  }
  return out;
}

MiningRun parse_results(const std::string& document, const std::string& sidecar) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("results document: ") + e.what());
  }
  if (read_field<int>(doc, "schema_version") != kResultsSchemaVersion) {
    schema_error("unsupported schema_version");
  }

  MiningRun run;
  run.config = config_from_json(field(doc, "config"));
  const auto& ds = field(doc, "dataset");
  run.dataset.hash = read_field<std::string>(ds, "fingerprint");
  run.dataset.n_curves = read_field<std::size_t>(ds, "n_curves");
  run.dataset.n_points = read_field<std::size_t>(ds, "n_points");
  run.curve_ids = read_field<std::vector<std::string>>(ds, "curve_ids");
  const auto& gf = field(field(doc, "summary"), "global_delta_pct");
  run.global_fraction = gf.is_null() ? -1.0 : gf.get<double>();

  const std::size_t n_points = run.dataset.n_points;
  auto interval = [&](const json& j) {
    const auto s = read_field<std::size_t>(j, "start");
    const auto e = read_field<std::size_t>(j, "end");
    if (s < 1 || e < s + 1 || e > n_points) schema_error("interval out of range");
    return SubInterval{s - 1, e - 1};
  };

  for (const auto& j : field(doc, "intervals")) {
    IntervalDiagnostics d;
    d.interval = interval(j);
    d.h_all = read_field<double>(j, "h_all");
    d.delta = read_field<double>(j, "delta");
    d.n_candidates = read_field<std::size_t>(j, "n_candidates");
    d.n_emitted = read_field<std::size_t>(j, "n_emitted");
    d.low_confidence = read_field<bool>(j, "low_confidence");
    run.intervals.push_back(d);
  }

  json side;
  bool side_loaded = false;
  for (const auto& j : field(doc, "loci")) {
    LocalCluster q;
    q.curves = from_one_based(field(j, "curves"), run.dataset.n_curves);
    q.interval = interval(j);
    try {
      q.model = parse_model(read_field<std::string>(j, "model"));
    } catch (const Error& e) {
      schema_error(e.what());
    }
    q.hscore = read_field<double>(j, "hscore");
    q.mu = read_field<double>(j, "mu");
    q.alpha = read_field<std::vector<double>>(j, "alpha");
    const auto& beta = field(j, "beta");
    if (beta.is_object()) {
      if (!side_loaded) {
        if (sidecar.empty()) schema_error("beta refers to a sidecar that was not provided");
        try {
          side = json::parse(sidecar);
        } catch (const json::parse_error& e) {
          throw Error(ErrorCode::ParseError, std::string("beta sidecar: ") + e.what());
        }
        side_loaded = true;
      }
      q.beta = read_field<std::vector<double>>(field(side, "beta"), read_field<std::string>(beta, "key").c_str());
    } else {
      q.beta = read_field<std::vector<double>>(j, "beta");
    }
    q.interesting = read_field<bool>(j, "interesting");
    if (q.alpha.size() != q.curves.size() || q.beta.size() != q.interval.length()) {
      schema_error("locus " + std::to_string(run.candidates.size() + 1) +
                   " has estimate vectors of the wrong size");
    }
    run.candidates.push_back(std::move(q));
  }
  return run;
}

namespace {

std::string with_suffix(const std::string& path, const char* suffix) {
  std::filesystem::path p(path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string() + suffix;
}

}  // namespace

std::string sidecar_path_for(const std::string& results_path) {
  return with_suffix(results_path, ".beta.json");
}

std::string summary_path_for(const std::string& results_path) {
  return with_suffix(results_path, ".summary.csv");
}

void write_results(const MiningRun& run, const std::string& path) {
  const std::string side_path = sidecar_path_for(path);
  const auto rendered =
      render_results(run, std::filesystem::path(side_path).filename().string());
  if (!rendered.sidecar.empty()) write_text(side_path, rendered.sidecar);
  write_summary_csv(run, run.config.summary_out.empty() ? summary_path_for(path)
                                                        : run.config.summary_out);
  write_text(path, rendered.document);
}

MiningRun read_results(const std::string& path) {
  const std::string doc = read_text(path);
  std::string side;
  const std::string side_path = sidecar_path_for(path);
  if (std::filesystem::exists(side_path)) side = read_text(side_path);
  auto run = parse_results(doc, side);
  run.config.out = path;
  return run;
}

void write_summary_csv(const MiningRun& run, std::ostream& out, bool interesting_only) {
  out << "id,start,end,length,n_curves,hscore,interesting\n";
  for (std::size_t k = 0; k < run.candidates.size(); ++k) {
    const auto& q = run.candidates[k];
    if (interesting_only && !q.interesting) continue;
    out << k + 1 << ',' << q.interval.start + 1 << ',' << q.interval.end + 1 << ','
        << q.interval.length() << ',' << q.curves.size() << ',' << format_double(q.hscore) << ','
        << (q.interesting ? "true" : "false") << '\n';
  }
}

void write_summary_csv(const MiningRun& run, const std::string& path, bool interesting_only) {
  std::ostringstream s;
  write_summary_csv(run, s, interesting_only);
  write_text(path, s.str());
}

std::string render_truth(const Simulation& sim, const SimConfig& cfg) {
  json doc;
  doc["seed"] = cfg.seed;
  doc["sigma"] = cfg.sigma;
  doc["n_curves"] = cfg.n_curves;
  doc["grid_len"] = cfg.grid_len;
  doc["order"] = cfg.order;
  doc["n_basis"] = cfg.n_basis;
  doc["background"] = {{"beta_a", cfg.beta_a}, {"beta_b", cfg.beta_b},
                       {"min", cfg.coef_min},  {"max", cfg.coef_max}};
  json motifs = json::array();
  for (const auto& m : cfg.motifs) {
    json j;
    j["id"] = m.id;
    j["target_length"] = m.target_length;
    j["coefficients"] = m.coefficients;
    json occ = json::array();
    for (const auto& o : m.occurrences) {
      occ.push_back({{"curve", o.curve + 1}, {"coef_start", o.coef_start + 1}});
    }
    j["occurrences"] = std::move(occ);
    motifs.push_back(std::move(j));
  }
  doc["motifs"] = std::move(motifs);
  json loci = json::array();
  for (const auto& p : sim.truth) {
    loci.push_back({{"motif", p.motif},
                    {"curves", to_one_based(p.curves)},
                    {"start", p.interval.start + 1},
                    {"end", p.interval.end + 1}});
  }
  doc["loci"] = std::move(loci);
  return doc.dump(1) + "\n";
}

void write_truth(const Simulation& sim, const SimConfig& cfg, const std::string& path) {
  write_text(path, render_truth(sim, cfg));
}

std::string render_dendrograms(const std::vector<Dendrogram>& trees) {
  json arr = json::array();
  for (const auto& t : trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({{"curves", to_one_based(n.curves)},
                       {"height", n.height},
                       {"left", n.left < 0 ? json(nullptr) : json(n.left)},
                       {"right", n.right < 0 ? json(nullptr) : json(n.right)}});
    }
    arr.push_back(
        {{"start", t.interval.start + 1}, {"end", t.interval.end + 1}, {"nodes", std::move(nodes)}});
  }
  return arr.dump() + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move output into place at '" + path + "'");
  }
}

}  // namespace funloci

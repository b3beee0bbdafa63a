// funloci command-line front end: mine, simulate, taste, export.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "funloci/io.hpp"
#include "funloci/kernels.hpp"
#include "funloci/mine.hpp"
#include "funloci/simgen.hpp"

namespace {

using namespace funloci;

constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRectangular:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NonUniformGrid:
    case ErrorCode::TooFewPoints:
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::IoError:
      return kExitInput;
    case ErrorCode::EmptyCurveSet:
    case ErrorCode::InvalidCurveIndex:
    case ErrorCode::InvalidInterval:
    case ErrorCode::MinLengthOutOfRange:
    case ErrorCode::EmptyStartList:
    case ErrorCode::EmptyLengthList:
    case ErrorCode::InvalidOrder:
    case ErrorCode::OverlappingMotifPlacements:
    case ErrorCode::MotifOutOfRange:
    case ErrorCode::TooFewElbowPoints:
    case ErrorCode::ConfigError:
      return kExitConfig;
  }
  return kExitInternal;
}

// "1,5,9" or "1:33001:250" (inclusive, step defaults to 1), mixed freely.
std::vector<std::size_t> parse_index_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size() || s.empty() || s.front() == '-') {
      throw Error(ErrorCode::ConfigError, std::string(flag) + ": '" + s + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string p;
    while (std::getline(is, p, ':')) parts.push_back(p);
    if (parts.size() == 1) {
      out.push_back(number(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const std::size_t a = number(parts[0]);
      const std::size_t b = number(parts[1]);
      const std::size_t step = parts.size() == 3 ? number(parts[2]) : 1;
      if (step == 0 || b < a) {
        throw Error(ErrorCode::ConfigError, std::string(flag) + ": bad range '" + item + "'");
      }
      for (std::size_t v = a; v <= b; v += step) out.push_back(v);
    } else {
      throw Error(ErrorCode::ConfigError, std::string(flag) + ": bad range '" + item + "'");
    }
  }
  return out;
}

struct MineArgs {
  std::string input;
  std::string model = "full";
  std::optional<std::size_t> min_len;
  std::string starts;
  std::string lengths;
  std::string edge = "clamp";
  std::optional<double> delta;
  std::vector<double> delta_pct;
  std::string elbow_metric;
  bool elbow_global = false;
  std::size_t min_curves = 2;
  bool no_taste = false;
  unsigned workers = 1;
  std::string out = "results.json";
  std::string summary;
  std::string dendrograms;
};

RunConfig build_config(const MineArgs& a) {
  RunConfig cfg;
  cfg.input = a.input;
  cfg.model = parse_model(a.model);

  if (a.starts.empty() != a.lengths.empty()) {
    throw Error(ErrorCode::ConfigError, "--starts and --lengths must be given together");
  }
  if (!a.starts.empty()) {
    CustomLotting cu;
    for (std::size_t s : parse_index_list(a.starts, "--starts")) {
      if (s < 1) throw Error(ErrorCode::ConfigError, "--starts are 1-based");
      cu.starts.push_back(s - 1);
    }
    cu.lengths = parse_index_list(a.lengths, "--lengths");
    cu.min_length = a.min_len.value_or(2);
    if (a.edge != "clamp" && a.edge != "discard") {
      throw Error(ErrorCode::ConfigError, "--edge must be clamp or discard");
    }
    cu.edge = a.edge == "clamp" ? EdgePolicy::Clamp : EdgePolicy::Discard;
    cfg.lotting.mode = std::move(cu);
  } else {
    if (!a.min_len) throw Error(ErrorCode::ConfigError, "give --min-len, or --starts and --lengths");
    cfg.lotting.mode = ExhaustiveLotting{*a.min_len};
  }

  const int modes = (a.delta ? 1 : 0) + (!a.delta_pct.empty() && a.elbow_metric.empty() ? 1 : 0) +
                    (a.elbow_metric.empty() ? 0 : 1);
  if (modes != 1) {
    throw Error(ErrorCode::ConfigError,
                "choose exactly one of --delta, --delta-pct or --elbow-metric");
  }
  if (a.delta) {
    cfg.harvest.mode = FixedDelta{*a.delta};
  } else if (a.elbow_metric.empty()) {
    if (a.delta_pct.size() != 1) {
      throw Error(ErrorCode::ConfigError, "--delta-pct takes one value unless --elbow-metric is set");
    }
    cfg.harvest.mode = DeltaPercent{a.delta_pct.front()};
  } else {
    Elbow el;
    el.metric = parse_elbow_metric(a.elbow_metric);
    el.scope = a.elbow_global ? ElbowScope::Global : ElbowScope::PerInterval;
    el.fractions = a.delta_pct;
    if (el.fractions.empty()) {
      for (int k = 1; k <= 19; ++k) el.fractions.push_back(k / 20.0);
    }
    cfg.harvest.mode = std::move(el);
  }
  cfg.harvest.min_curves = a.min_curves;
  cfg.taste = !a.no_taste;
  cfg.workers = a.workers;
  cfg.out = a.out;
  cfg.summary_out = a.summary;
  cfg.dendrogram_out = a.dendrograms;
  return cfg;
}

// Output failures are not the user's input being wrong.
template <class Fn>
void writing(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) {
      std::cerr << "error: " << e.what() << '\n';
      std::exit(kExitInternal);
    }
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional local-cluster miner"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  std::string kernel;
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_option("--kernel", kernel, "Reduction kernel: auto|scalar|avx2|neon");

  MineArgs m;
  auto* mine_cmd = app.add_subcommand("mine", "Mine local clusters from a CSV dataset");
  mine_cmd->add_option("--input", m.input, "Dataset CSV (rows are curves)")->required();
  mine_cmd->add_option("--model", m.model, "full|rows|cols|const");
  mine_cmd->add_option("--min-len", m.min_len, "Minimum interval length c");
  mine_cmd->add_option("--starts", m.starts, "Custom 1-based starts, e.g. 1,5 or 1:33001:250");
  mine_cmd->add_option("--lengths", m.lengths, "Custom lengths, e.g. 500:33000:500,33101");
  mine_cmd->add_option("--edge", m.edge, "Custom windows past the last point: clamp|discard");
  mine_cmd->add_option("--delta", m.delta, "Fixed H-score threshold");
  mine_cmd->add_option("--delta-pct", m.delta_pct,
                       "Threshold as a fraction of H(X,S) (a list with --elbow-metric)")
      ->delimiter(',');
  mine_cmd->add_option("--elbow-metric", m.elbow_metric, "n_clusters|mean_size|mean_hscore");
  mine_cmd->add_flag("--elbow-global", m.elbow_global, "One elbow fraction for all intervals");
  mine_cmd->add_option("--min-curves", m.min_curves, "Smallest locus kept");
  mine_cmd->add_flag("--no-taste", m.no_taste, "Skip redundancy pruning");
  mine_cmd->add_option("--workers", m.workers, "Worker threads");
  mine_cmd->add_option("--out", m.out, "Results document path");
  mine_cmd->add_option("--summary", m.summary, "Summary CSV path (default <out>.summary.csv)");
  mine_cmd->add_option("--dendrograms", m.dendrograms, "Also dump every interval's dendrogram");

  std::uint64_t seed = 1;
  double sigma = 0.0;
  std::size_t order = 4;
  std::string sim_out = "sim.csv";
  std::string truth_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a simulated dataset and its ground truth");
  sim_cmd->add_option("--seed", seed, "RNG seed");
  sim_cmd->add_option("--sigma", sigma, "Noise standard deviation");
  sim_cmd->add_option("--order", order, "B-spline order (4 = cubic)");
  sim_cmd->add_option("--out", sim_out, "Dataset CSV path");
  sim_cmd->add_option("--truth", truth_out, "Ground truth JSON path (default <out>.truth.json)");

  std::string taste_in;
  std::string taste_out;
  auto* taste_cmd = app.add_subcommand("taste", "Re-run redundancy pruning on a results document");
  taste_cmd->add_option("--input", taste_in, "Results document")->required();
  taste_cmd->add_option("--out", taste_out, "Output path (default: overwrite input)");

  std::string export_in;
  std::string export_out;
  bool export_interesting = false;
  auto* export_cmd = app.add_subcommand("export", "Write the flat CSV summary of a results document");
  export_cmd->add_option("--input", export_in, "Results document")->required();
  export_cmd->add_option("--out", export_out, "CSV path (default: standard output)");
  export_cmd->add_flag("--interesting", export_interesting, "Only loci flagged interesting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (!kernel.empty()) kernels::select(kernel);

    if (*mine_cmd) {
      const auto ds = load_csv(m.input);
      const auto cfg = build_config(m);
      ProgressFn progress;
      if (!quiet) {
        progress = [](const MineProgress& p) {
          std::fprintf(stderr, "progress %zu/%zu\n", p.done, p.total);
        };
      }
      const auto run = mine(ds, cfg, progress);
      writing([&] { write_results(run, cfg.out); });
      if (!cfg.dendrogram_out.empty()) {
        const auto trees = flower_all(ds, cfg.lotting.produce(ds.n_points()), cfg.model, cfg.workers);
        writing([&] { write_text(cfg.dendrogram_out, render_dendrograms(trees)); });
      }
      if (!quiet) {
        std::fprintf(stderr, "intervals %zu candidates %zu interesting %zu\n", run.intervals.size(),
                     run.candidates.size(), run.n_survivors());
      }
    } else if (*sim_cmd) {
      const auto cfg = default_sim_config(seed, sigma, order);
      const auto sim = generate(cfg);
      if (truth_out.empty()) {
        std::string base = sim_out;
        if (base.size() > 4 && base.ends_with(".csv")) base.resize(base.size() - 4);
        truth_out = base + ".truth.json";
      }
      writing([&] {
        write_csv(sim.data, sim_out);
        write_truth(sim, cfg, truth_out);
      });
    } else if (*taste_cmd) {
      auto run = read_results(taste_in);
      retaste(run);
      const std::string out = taste_out.empty() ? taste_in : taste_out;
      run.config.summary_out.clear();
      writing([&] { write_results(run, out); });
    } else if (*export_cmd) {
      const auto run = read_results(export_in);
      if (export_out.empty()) {
        write_summary_csv(run, std::cout, export_interesting);
      } else {
        writing([&] { write_summary_csv(run, export_out, export_interesting); });
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}

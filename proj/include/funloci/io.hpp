#pragma once
// File formats: dataset CSV, results document (+ beta sidecar), summary
// CSV, simulation ground truth and dendrogram dumps.
//
// Every user-facing index (curves, start, end) is 1-based.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "funloci/core.hpp"
#include "funloci/mine.hpp"
#include "funloci/simgen.hpp"

namespace funloci {

inline constexpr int kResultsSchemaVersion = 1;
// Beta vectors longer than this go to the sidecar file.
inline constexpr std::size_t kInlineBetaLimit = 2000;

// Rows are curves. A first row containing a non-numeric cell is a header
// whose cells give grid coordinates (a numeric suffix such as "t12" counts);
// a non-numeric first column holds curve ids.
FunctionalDataset parse_csv(std::istream& in);
FunctionalDataset load_csv(const std::string& path);

// Header "id,<grid...>" followed by "<id>,<values...>" rows; doubles are
// written with round-trip precision.
void write_csv(const FunctionalDataset& ds, std::ostream& out);
void write_csv(const FunctionalDataset& ds, const std::string& path);

struct RenderedResults {
  std::string document;
  std::string sidecar;  // empty when every beta is inlined
};

// `sidecar_name` is the file name recorded in beta references.
RenderedResults render_results(const MiningRun& run, const std::string& sidecar_name);
MiningRun parse_results(const std::string& document, const std::string& sidecar);

// Default side files derived from a results path "x.json": "x.beta.json"
// and "x.summary.csv".
std::string sidecar_path_for(const std::string& results_path);
std::string summary_path_for(const std::string& results_path);

// Writes the document, the sidecar when needed, and the summary CSV
// (run.config.summary_out, or summary_path_for(path) when empty).
void write_results(const MiningRun& run, const std::string& path);
MiningRun read_results(const std::string& path);

// id,start,end,length,n_curves,hscore,interesting; one row per locus in
// rank order, id = 1-based rank.
void write_summary_csv(const MiningRun& run, std::ostream& out, bool interesting_only = false);
void write_summary_csv(const MiningRun& run, const std::string& path,
                       bool interesting_only = false);

std::string render_truth(const Simulation& sim, const SimConfig& cfg);
void write_truth(const Simulation& sim, const SimConfig& cfg, const std::string& path);

std::string render_dendrograms(const std::vector<Dendrogram>& trees);

// Reads a whole file; throws IoError.
std::string read_text(const std::string& path);
// Writes via a temporary file and rename so partial output never appears.
void write_text(const std::string& path, const std::string& text);

}  // namespace funloci

#include "funloci/mine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "funloci/flowering.hpp"
#include "funloci/tasting.hpp"

namespace funloci {

void RunConfig::validate() const {
  harvest.validate();
  if (workers < 1) throw Error(ErrorCode::ConfigError, "workers must be at least 1");
  if (const auto* ex = std::get_if<ExhaustiveLotting>(&lotting.mode)) {
    if (ex->min_length < 2) {
      throw Error(ErrorCode::MinLengthOutOfRange, "minimum interval length must be at least 2");
    }
  } else {
    const auto& cu = std::get<CustomLotting>(lotting.mode);
    if (cu.starts.empty()) throw Error(ErrorCode::EmptyStartList, "custom lotting needs starts");
    if (cu.lengths.empty()) throw Error(ErrorCode::EmptyLengthList, "custom lotting needs lengths");
  }
}

std::vector<LocalCluster> MiningRun::survivors() const { return funloci::survivors(candidates); }

std::size_t MiningRun::n_survivors() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const auto& q) { return q.interesting; }));
}

std::size_t MiningRun::n_emitted() const {
  std::size_t n = 0;
  for (const auto& d : intervals) n += d.n_emitted;
  return n;
}

namespace {

// Runs fn(slot) for every slot on up to `workers` threads. Slots are handed
// out longest interval first so the tail of the run stays balanced; results
// land in per-slot storage, so scheduling never affects output.
template <class Fn>
void run_pool(const std::vector<SubInterval>& intervals, unsigned workers, Fn&& fn,
              const ProgressFn& progress) {
  const std::size_t total = intervals.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return intervals[a].length() > intervals[b].length();
  });

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  const std::size_t step = std::max<std::size_t>(1, total / 100);

  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        fn(order[k]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress && (d % step == 0 || d == total)) {
        std::lock_guard lock(mu);
        progress(MineProgress{d, total});
      }
    }
  };

  const auto n_threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), total));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<Dendrogram> flower_all(const FunctionalDataset& ds,
                                   const std::vector<SubInterval>& intervals,
                                   ClusterModelKind model, unsigned workers) {
  std::vector<Dendrogram> trees(intervals.size());
  run_pool(
      intervals, workers,
      [&](std::size_t w) { trees[w] = flower_interval(ds, intervals[w], model); }, {});
  return trees;
}

MiningRun mine(const FunctionalDataset& ds, const RunConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const auto intervals = cfg.lotting.produce(ds.n_points());
  const std::size_t n = intervals.size();

  MiningRun run;
  run.config = cfg;
  run.dataset = DatasetFingerprint{ds.fingerprint(), ds.n_curves(), ds.n_points()};
  run.curve_ids = ds.curve_ids();

  const auto* elbow = std::get_if<Elbow>(&cfg.harvest.mode);
  const bool global = elbow && elbow->scope == ElbowScope::Global;
  bool global_low_confidence = false;

  // Global elbow needs statistics from every tree before any interval can be
  // cut; trees are rebuilt in the second pass rather than held in memory.
  if (global) {
    std::vector<std::vector<CutStats>> stats(n);
    run_pool(
        intervals, cfg.workers,
        [&](std::size_t w) {
          const HscoreWorkspace ws(ds, intervals[w]);
          stats[w] = elbow_stats(flower_interval(ws, cfg.model), *elbow, cfg.harvest.min_curves);
        },
        {});
    const auto choice = select_global_fraction(stats, *elbow);
    run.global_fraction = choice.delta;
    global_low_confidence = choice.low_confidence;
  }

  std::vector<HarvestedInterval> slots(n);
  run_pool(
      intervals, cfg.workers,
      [&](std::size_t w) {
        const HscoreWorkspace ws(ds, intervals[w]);
        const auto tree = flower_interval(ws, cfg.model);
        slots[w] = harvest_interval(tree, cfg.harvest, ws, cfg.model, run.global_fraction);
      },
      progress);

  run.intervals.reserve(n);
  std::size_t total = 0;
  for (const auto& h : slots) total += h.loci.size();
  std::vector<LocalCluster> candidates;
  candidates.reserve(total);
  for (auto& h : slots) {
    run.intervals.push_back(IntervalDiagnostics{h.interval, h.root_height, h.threshold,
                                                h.loci.size(), h.emitted,
                                                global ? global_low_confidence : h.low_confidence});
    for (auto& q : h.loci) candidates.push_back(std::move(q));
    h.loci.clear();
    h.loci.shrink_to_fit();
  }

  run.candidates = cfg.taste ? taste(std::move(candidates)) : rank(std::move(candidates));
  return run;
}

void retaste(MiningRun& run) {
  for (auto& q : run.candidates) q.interesting = false;
  run.candidates = taste(std::move(run.candidates));
  run.config.taste = true;
}

}  // namespace funloci

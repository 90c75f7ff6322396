#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lid/estimators.hpp"
#include "lid/generators.hpp"

namespace lid {

enum class SliceMode { All, Inliers, Outliers };

struct SliceSpec {
  SliceMode mode = SliceMode::All;
  double fraction = 0.10;  // in (0, 0.5]
};

// One experiment: a family swept over intrinsic dimensions, `runs`
// independently seeded sets of n points each, every estimator applied at
// every k. Slicing restricts the query set only; neighborhoods are always
// drawn from the full set.
struct ExperimentConfig {
  Family family = Family::Gaussian;
  std::vector<int> d_values;  // single table entry for m-family
  int runs = 20;
  Index n = 10000;
  std::vector<int> k_values;
  std::vector<EstimatorSpec> estimators;
  SliceSpec slice;
  std::uint64_t base_seed = 0;
};

// Strict JSON parsing (unknown keys are errors); see README for the schema.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

inline constexpr int kAggregateRun = -1;  // printed as run=ALL

// Statistics of one (family, d, k, estimator, run) cell over the usable
// estimates; degenerate estimates are excluded from all moments and counted
// in n_degenerate. Aggregate rows carry the across-run averages of the
// moments (mean-of-means, mean-of-stds) and summed counts.
struct ReportRow {
  std::string family;
  int d = 0;
  int k = 0;
  std::string estimator;
  int run = kAggregateRun;
  bool all_degenerate = false;  // moments are empty/NaN when set
  double mean = 0, stddev = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double whisker_lo = 0, whisker_hi = 0;
  std::int64_t n_box_outliers = 0, n_degenerate = 0, n_clamped = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
};

// The floor(fraction*n) points nearest to (Inliers) or farthest from
// (Outliers) the empirical mean of the set, under the set's metric. Ties are
// broken by point index; the result is sorted ascending by index.
std::vector<Index> select_extremes(const PointSet& points, double fraction,
                                   SliceMode mode);

// Moments and box statistics of one batch. Quartiles interpolate linearly
// between order statistics (h = (n-1)p); whiskers follow the 1.5 IQR rule.
// Fills only the statistics fields; keys are the caller's business.
ReportRow summarize(const EstimateBatch& batch);

using ProgressFn = std::function<void(const std::string&)>;
using BatchSink = std::function<void(const EstimateBatch&, int d, int k, int run)>;

// Runs the full experiment; deterministic given the config (including under
// any thread count). Per-cell failures are recorded as all-degenerate rows;
// the experiment completes. `progress` (if set) receives a line per
// generated set; `sink` (if set) receives every per-point batch.
ExperimentReport run_experiment(const ExperimentConfig& config, int threads = 0,
                                const ProgressFn& progress = {},
                                const BatchSink& sink = {});

}  // namespace lid

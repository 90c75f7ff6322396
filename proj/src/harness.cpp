#include "lid/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lid/parallel.hpp"
#include "lid/random.hpp"

namespace lid {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw std::runtime_error("experiment config: " + message);
}

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
          return item.key() == key;
        }) == allowed.end()) {
      config_error(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

EstimatorSpec parse_estimator(const json& entry) {
  EstimatorSpec spec;
  std::string token;
  if (entry.is_string()) {
    token = entry.get<std::string>();
  } else if (entry.is_object()) {
    check_keys(entry, "estimator entry", {"method", "theta", "ged_pair_strategy"});
    if (!entry.contains("method")) config_error("estimator entry needs 'method'");
    token = entry.at("method").get<std::string>();
    if (entry.contains("theta")) spec.theta = entry.at("theta").get<double>();
    if (entry.contains("ged_pair_strategy")) {
      const auto s = ged_strategy_from_token(
          entry.at("ged_pair_strategy").get<std::string>());
      if (!s) config_error("unknown ged_pair_strategy");
      spec.ged_pair_strategy = *s;
    }
  } else {
    config_error("estimator entries must be strings or objects");
  }
  const auto method = method_from_token(token);
  if (!method) config_error("unknown estimator '" + token + "'");
  spec.method = *method;
  return spec;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("top level must be an object");
  check_keys(root, "config",
             {"generator", "runs", "n", "k_values", "estimators", "slice",
              "base_seed"});

  ExperimentConfig cfg;
  if (!root.contains("generator")) config_error("missing 'generator'");
  const json& gen = root.at("generator");
  check_keys(gen, "generator", {"family", "d"});
  if (!gen.contains("family")) config_error("generator needs 'family'");
  const auto family = family_from_token(gen.at("family").get<std::string>());
  if (!family) {
    config_error("unknown family '" + gen.at("family").get<std::string>() + "'");
  }
  cfg.family = *family;

  if (gen.contains("d")) {
    const json& d = gen.at("d");
    if (d.is_number_integer()) {
      cfg.d_values = {d.get<int>()};
    } else if (d.is_array()) {
      for (const auto& v : d) cfg.d_values.push_back(v.get<int>());
    } else {
      config_error("'d' must be an integer or an array of integers");
    }
  }
  if (const auto dims = m_family_dims(cfg.family)) {
    if (cfg.d_values.empty()) {
      cfg.d_values = {dims->intrinsic};
    } else if (cfg.d_values.size() != 1 || cfg.d_values[0] != dims->intrinsic) {
      config_error("dimension of " + std::string(family_token(cfg.family)) +
                   " is fixed by the manifold table");
    }
  } else if (cfg.d_values.empty()) {
    config_error("parametric families need 'd'");
  }

  if (!root.contains("runs") || !root.contains("n") ||
      !root.contains("k_values") || !root.contains("estimators") ||
      !root.contains("base_seed")) {
    config_error("required keys: runs, n, k_values, estimators, base_seed");
  }
  cfg.runs = root.at("runs").get<int>();
  cfg.n = root.at("n").get<Index>();
  for (const auto& k : root.at("k_values")) cfg.k_values.push_back(k.get<int>());
  for (const auto& e : root.at("estimators")) cfg.estimators.push_back(parse_estimator(e));
  cfg.base_seed = root.at("base_seed").get<std::uint64_t>();

  if (root.contains("slice")) {
    const json& slice = root.at("slice");
    if (slice.is_string()) {
      if (slice.get<std::string>() != "all") config_error("slice string must be 'all'");
    } else if (slice.is_object()) {
      check_keys(slice, "slice", {"mode", "fraction"});
      const std::string mode = slice.value("mode", "all");
      if (mode == "all") {
        cfg.slice.mode = SliceMode::All;
      } else if (mode == "inliers") {
        cfg.slice.mode = SliceMode::Inliers;
      } else if (mode == "outliers") {
        cfg.slice.mode = SliceMode::Outliers;
      } else {
        config_error("slice mode must be all, inliers or outliers");
      }
      if (slice.contains("fraction")) cfg.slice.fraction = slice.at("fraction").get<double>();
    } else {
      config_error("'slice' must be a string or an object");
    }
  }

  if (cfg.runs < 1) config_error("runs must be >= 1");
  if (cfg.n < 2) config_error("n must be >= 2");
  for (int d : cfg.d_values) {
    if (d < 1) config_error("d values must be >= 1");
  }
  for (int k : cfg.k_values) {
    if (k < 2 || k >= cfg.n) config_error("every k must satisfy 2 <= k < n");
  }
  if (cfg.estimators.empty()) config_error("estimators must be non-empty");
  if (!(cfg.slice.fraction > 0.0) || cfg.slice.fraction > 0.5) {
    config_error("slice fraction must lie in (0, 0.5]");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::vector<Index> select_extremes(const PointSet& points, double fraction,
                                   SliceMode mode) {
  if (mode == SliceMode::All) {
    throw std::invalid_argument("select_extremes: mode must be Inliers or Outliers");
  }
  if (!(fraction > 0.0) || fraction > 0.5) {
    throw std::invalid_argument("select_extremes: fraction must lie in (0, 0.5]");
  }
  const Index n = points.size();
  const auto count = static_cast<Index>(std::floor(fraction * static_cast<double>(n)));

  const Eigen::RowVectorXd center = points.coords.colwise().mean();
  std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double d2;
    if (points.metric == Metric::FlatTorus) {
      d2 = 0.0;
      for (Index j = 0; j < points.dim(); ++j) {
        const double raw = center[j] - points.coords(i, j);
        const double delta = raw - std::round(raw);
        d2 += delta * delta;
      }
    } else {
      d2 = (points.coords.row(i) - center).squaredNorm();
    }
    order[static_cast<std::size_t>(i)] = {d2, i};
  }
  std::sort(order.begin(), order.end());

  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(count));
  if (mode == SliceMode::Inliers) {
    for (Index i = 0; i < count; ++i) picked.push_back(order[i].second);
  } else {
    for (Index i = n - count; i < n; ++i) picked.push_back(order[i].second);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

ReportRow summarize(const EstimateBatch& batch) {
  ReportRow row;
  std::vector<double> values;
  values.reserve(batch.estimates.size());
  for (const Estimate& e : batch.estimates) {
    row.n_clamped += e.clamped_pairs;
    if (e.usable()) {
      values.push_back(e.value);
    } else {
      ++row.n_degenerate;
    }
  }
  if (values.empty()) {
    row.all_degenerate = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean = row.stddev = row.min = row.q1 = row.median = row.q3 = row.max =
        row.whisker_lo = row.whisker_hi = nan;
    return row;
  }

  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  row.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - row.mean) * (v - row.mean);
  row.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  row.min = values.front();
  row.max = values.back();
  row.q1 = quantile_sorted(values, 0.25);
  row.median = quantile_sorted(values, 0.50);
  row.q3 = quantile_sorted(values, 0.75);

  const double iqr = row.q3 - row.q1;
  const double lo_fence = row.q1 - 1.5 * iqr;
  const double hi_fence = row.q3 + 1.5 * iqr;
  row.whisker_lo = row.max;
  row.whisker_hi = row.min;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      ++row.n_box_outliers;
    } else {
      row.whisker_lo = std::min(row.whisker_lo, v);
      row.whisker_hi = std::max(row.whisker_hi, v);
    }
  }
  if (row.n_box_outliers == std::ssize(values)) {  // cannot happen, but keep sane
    row.whisker_lo = row.min;
    row.whisker_hi = row.max;
  }
  return row;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int threads,
                                const ProgressFn& progress, const BatchSink& sink) {
  ExperimentReport report;
  const std::string family{family_token(config.family)};

  // cell[d][k][est][run]
  const std::size_t n_d = config.d_values.size();
  const std::size_t n_k = config.k_values.size();
  const std::size_t n_e = config.estimators.size();
  const auto runs = static_cast<std::size_t>(config.runs);
  std::vector<ReportRow> cells(n_d * n_k * n_e * runs);
  auto cell = [&](std::size_t di, std::size_t ki, std::size_t ei,
                  std::size_t run) -> ReportRow& {
    return cells[((di * n_k + ki) * n_e + ei) * runs + run];
  };

  for (std::size_t di = 0; di < n_d; ++di) {
    const int d = config.d_values[di];
    for (std::size_t run = 0; run < runs; ++run) {
      GeneratorSpec gspec;
      gspec.family = config.family;
      gspec.d = is_m_family(config.family) ? 0 : d;
      gspec.n = config.n;
      gspec.seed = derive_seed(config.base_seed, run);
      const PointSet points = generate(gspec);

      std::vector<Index> queries;
      if (config.slice.mode != SliceMode::All) {
        queries = select_extremes(points, config.slice.fraction, config.slice.mode);
      }

      for (std::size_t ki = 0; ki < n_k; ++ki) {
        const int k = config.k_values[ki];

        // One kNN pass per query, shared by all estimators of this cell.
        const std::size_t n_queries =
            queries.empty() ? static_cast<std::size_t>(points.size())
                            : queries.size();
        std::vector<std::vector<Estimate>> per_estimator(
            n_e, std::vector<Estimate>(n_queries));
        parallel_for(n_queries, threads, [&](std::size_t qi) {
          const Index point =
              queries.empty() ? static_cast<Index>(qi) : queries[qi];
          try {
            const Neighborhood nb = knn(points, point, k);
            for (std::size_t ei = 0; ei < n_e; ++ei) {
              EstimatorSpec spec = config.estimators[ei];
              spec.k = k;
              try {
                per_estimator[ei][qi] = estimate_neighborhood(nb, spec);
              } catch (const std::exception&) {
                per_estimator[ei][qi] = Estimate{};
              }
            }
          } catch (const std::exception&) {
            for (std::size_t ei = 0; ei < n_e; ++ei) {
              per_estimator[ei][qi] = Estimate{};
            }
          }
        });

        for (std::size_t ei = 0; ei < n_e; ++ei) {
          EstimateBatch batch;
          batch.method = config.estimators[ei].method;
          batch.k = k;
          if (queries.empty()) {
            batch.point_ids.resize(points.size());
            for (Index i = 0; i < points.size(); ++i) batch.point_ids[i] = i;
          } else {
            batch.point_ids = queries;
          }
          batch.estimates = std::move(per_estimator[ei]);

          ReportRow row = summarize(batch);
          row.family = family;
          row.d = d;
          row.k = k;
          row.estimator = std::string(method_token(batch.method));
          row.run = static_cast<int>(run);
          cell(di, ki, ei, run) = std::move(row);

          if (sink) sink(batch, d, k, static_cast<int>(run));
        }
      }
      if (progress) {
        progress(family + " d=" + std::to_string(d) + " run=" +
                 std::to_string(run + 1) + "/" + std::to_string(config.runs));
      }
    }
  }

  // Emit per-run rows grouped by cell, each followed by its aggregate.
  for (std::size_t di = 0; di < n_d; ++di) {
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      for (std::size_t ei = 0; ei < n_e; ++ei) {
        ReportRow agg;
        agg.family = family;
        agg.d = config.d_values[di];
        agg.k = config.k_values[ki];
        agg.estimator = std::string(method_token(config.estimators[ei].method));
        agg.run = kAggregateRun;
        int usable_runs = 0;
        for (std::size_t run = 0; run < runs; ++run) {
          const ReportRow& r = cell(di, ki, ei, run);
          report.rows.push_back(r);
          agg.n_box_outliers += r.n_box_outliers;
          agg.n_degenerate += r.n_degenerate;
          agg.n_clamped += r.n_clamped;
          if (r.all_degenerate) continue;
          ++usable_runs;
          agg.mean += r.mean;
          agg.stddev += r.stddev;
          agg.min += r.min;
          agg.q1 += r.q1;
          agg.median += r.median;
          agg.q3 += r.q3;
          agg.max += r.max;
          agg.whisker_lo += r.whisker_lo;
          agg.whisker_hi += r.whisker_hi;
        }
        if (usable_runs == 0) {
          agg.all_degenerate = true;
          const double nan = std::numeric_limits<double>::quiet_NaN();
          agg.mean = agg.stddev = agg.min = agg.q1 = agg.median = agg.q3 =
              agg.max = agg.whisker_lo = agg.whisker_hi = nan;
        } else {
          const double nr = usable_runs;
          agg.mean /= nr;
          agg.stddev /= nr;
          agg.min /= nr;
          agg.q1 /= nr;
          agg.median /= nr;
          agg.q3 /= nr;
          agg.max /= nr;
          agg.whisker_lo /= nr;
          agg.whisker_hi /= nr;
        }
        report.rows.push_back(std::move(agg));
      }
    }
  }
  return report;
}

}  // namespace lid

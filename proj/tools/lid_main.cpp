// lid - local intrinsic dimensionality estimation toolkit.
//
// Subcommands: generate (synthetic data sets), estimate (per-point ID
// estimates for a CSV data set), experiment (multi-run bias/variance study
// driven by a JSON config), compare (join report CSVs and print deltas).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "lid/csv.hpp"
#include "lid/estimators.hpp"
#include "lid/generators.hpp"
#include "lid/harness.hpp"
#include "lid/parallel.hpp"

namespace {

namespace fs = std::filesystem;

struct GenerateArgs {
  std::string family;
  int d = 0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool header = false;
};

int run_generate(const GenerateArgs& args) {
  const auto family = lid::family_from_token(args.family);
  if (!family) throw std::runtime_error("unknown family '" + args.family + "'");

  lid::GeneratorSpec spec;
  spec.family = *family;
  spec.d = args.d;
  spec.n = args.n;
  spec.seed = args.seed;
  const lid::PointSet points = lid::generate(spec);

  lid::write_pointset_csv(args.out, points, args.header);

  nlohmann::json manifest = {
      {"family", std::string(lid::family_token(spec.family))},
      {"d", lid::ground_truth_id(spec)},
      {"D", lid::ambient_dim(spec)},
      {"n", spec.n},
      {"seed", spec.seed},
  };
  fs::path manifest_path(args.out);
  manifest_path.replace_extension(".json");
  std::ofstream mout(manifest_path);
  if (!mout) throw std::runtime_error("cannot open output file: " + manifest_path.string());
  mout << manifest.dump(2) << '\n';

  std::cerr << "wrote " << points.size() << "x" << points.dim() << " points to "
            << args.out << " (manifest " << manifest_path.string() << ")\n";
  return 0;
}

struct EstimateArgs {
  std::string in;
  bool header = false;
  std::string metric = "euclidean";
  std::string method;
  int k = 100;
  double theta = 0.025;
  std::string ged_strategy = "max-over-pairs";
  std::string out;
};

int run_estimate(const EstimateArgs& args, int threads) {
  const auto method = lid::method_from_token(args.method);
  if (!method) throw std::runtime_error("unknown method '" + args.method + "'");

  lid::Metric metric;
  if (args.metric == "euclidean") {
    metric = lid::Metric::Euclidean;
  } else if (args.metric == "torus") {
    metric = lid::Metric::FlatTorus;
  } else {
    throw std::runtime_error("metric must be 'euclidean' or 'torus'");
  }

  lid::EstimatorSpec spec;
  spec.method = *method;
  spec.k = args.k;
  spec.theta = args.theta;
  const auto strategy = lid::ged_strategy_from_token(args.ged_strategy);
  if (!strategy) throw std::runtime_error("unknown ged strategy '" + args.ged_strategy + "'");
  spec.ged_pair_strategy = *strategy;

  const lid::PointSet points = lid::read_pointset_csv(args.in, args.header, metric);
  const lid::EstimateBatch batch = lid::estimate_batch(points, spec, {}, threads);

  if (args.out.empty()) {
    lid::write_estimates_csv(std::cout, batch);
  } else {
    lid::write_estimates_csv(args.out, batch);
    std::cerr << "wrote " << batch.point_ids.size() << " estimates to " << args.out << "\n";
  }
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string dump_dir;
};

int run_experiment_cmd(const ExperimentArgs& args, int threads) {
  const lid::ExperimentConfig config = lid::load_experiment_config(args.config);

  lid::BatchSink sink;
  if (!args.dump_dir.empty()) {
    fs::create_directories(args.dump_dir);
    sink = [&](const lid::EstimateBatch& batch, int d, int k, int run) {
      const std::string name = std::string(lid::family_token(config.family)) +
                               "_d" + std::to_string(d) + "_k" + std::to_string(k) +
                               "_" + std::string(lid::method_token(batch.method)) +
                               "_run" + std::to_string(run) + ".csv";
      lid::write_estimates_csv((fs::path(args.dump_dir) / name).string(), batch);
    };
  }

  const lid::ExperimentReport report = lid::run_experiment(
      config, threads, [](const std::string& line) { std::cerr << line << "\n"; },
      sink);
  lid::write_report_csv(args.out, report);
  std::cerr << "wrote " << report.rows.size() << " report rows to " << args.out << "\n";
  return 0;
}

int run_compare(const std::vector<std::string>& paths) {
  using Key = std::tuple<std::string, int, int, std::string>;
  std::vector<std::map<Key, lid::ReportRow>> aggregates;
  std::vector<Key> order;  // first report's aggregate row order

  for (std::size_t ri = 0; ri < paths.size(); ++ri) {
    lid::ExperimentReport report;
    try {
      report = lid::read_report_csv(paths[ri]);
    } catch (const std::exception& e) {
      throw std::runtime_error(paths[ri] + ": " + e.what());
    }
    std::map<Key, lid::ReportRow> agg;
    for (const lid::ReportRow& row : report.rows) {
      if (row.run != lid::kAggregateRun || row.all_degenerate) continue;
      Key key{row.family, row.d, row.k, row.estimator};
      agg.emplace(key, row);
      if (ri == 0) order.push_back(key);
    }
    aggregates.push_back(std::move(agg));
  }

  std::printf("%-10s %4s %5s %-8s", "family", "d", "k", "estimator");
  for (std::size_t ri = 0; ri < paths.size(); ++ri) {
    std::printf(" %11s %11s", ("mean_" + std::to_string(ri)).c_str(),
                ("std_" + std::to_string(ri)).c_str());
  }
  for (std::size_t ri = 1; ri < paths.size(); ++ri) {
    std::printf(" %11s %11s", ("dmean_" + std::to_string(ri)).c_str(),
                ("dstd_" + std::to_string(ri)).c_str());
  }
  std::printf("\n");

  for (const Key& key : order) {
    bool everywhere = true;
    for (const auto& agg : aggregates) {
      if (!agg.count(key)) everywhere = false;
    }
    if (!everywhere) continue;
    const auto& [family, d, k, estimator] = key;
    std::printf("%-10s %4d %5d %-8s", family.c_str(), d, k, estimator.c_str());
    const lid::ReportRow& base = aggregates[0].at(key);
    for (const auto& agg : aggregates) {
      const lid::ReportRow& row = agg.at(key);
      std::printf(" %11.5g %11.5g", row.mean, row.stddev);
    }
    for (std::size_t ri = 1; ri < aggregates.size(); ++ri) {
      const lid::ReportRow& row = aggregates[ri].at(key);
      std::printf(" %11.5g %11.5g", row.mean - base.mean, row.stddev - base.stddev);
    }
    std::printf("\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local intrinsic dimensionality estimation toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker thread cap (0 = auto, or the LID_THREADS environment variable)");

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic data set CSV + JSON manifest");
  generate->add_option("--family", gen.family, "gaussian, uniform, torus, or m1..m13")->required();
  generate->add_option("--d", gen.d, "intrinsic dimension (parametric families only)");
  generate->add_option("--n", gen.n, "number of points")->required();
  generate->add_option("--seed", gen.seed, "RNG seed")->default_val(0);
  generate->add_option("--out", gen.out, "output CSV path")->required();
  generate->add_flag("--header", gen.header, "write a header row");

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "per-point ID estimates for a data set CSV");
  estimate->add_option("--in", est.in, "input CSV path")->required();
  estimate->add_flag("--header", est.header, "input has a header row");
  estimate->add_option("--metric", est.metric, "euclidean or torus")->default_val("euclidean");
  estimate->add_option("--method", est.method,
                       "tle, tle-c, tle-n, tle-cn, mle, mom, ed, ged, lcd, lpca")->required();
  estimate->add_option("--k", est.k, "neighborhood size")->default_val(100);
  estimate->add_option("--theta", est.theta, "LPCA eigenvalue threshold")->default_val(0.025);
  estimate->add_option("--ged-strategy", est.ged_strategy, "max-over-pairs or half-to-full")
      ->default_val("max-over-pairs");
  estimate->add_option("--out", est.out, "output CSV path (default: stdout)");

  ExperimentArgs exp;
  CLI::App* experiment = app.add_subcommand("experiment", "run a JSON-configured experiment");
  experiment->add_option("--config", exp.config, "experiment config JSON")->required();
  experiment->add_option("--out", exp.out, "report CSV path")->required();
  experiment->add_option("--dump-dir", exp.dump_dir, "also dump per-point estimate CSVs here");

  std::vector<std::string> report_paths;
  CLI::App* compare = app.add_subcommand("compare", "join report CSVs and print mean/std deltas");
  compare->add_option("reports", report_paths, "report CSV paths")->expected(2, -1);

  CLI11_PARSE(app, argc, argv);

  lid::set_default_thread_count(threads);

  try {
    if (*generate) return run_generate(gen);
    if (*estimate) return run_estimate(est, threads);
    if (*experiment) return run_experiment_cmd(exp, threads);
    if (*compare) return run_compare(report_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

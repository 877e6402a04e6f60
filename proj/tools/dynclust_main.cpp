// Copyright 2026 The dynclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "dynclust/metric.hpp"
#include "dynclust/runner.hpp"
#include "dynclust/stream.hpp"
#include "dynclust/workloads.hpp"

namespace {

using namespace dynclust;

struct RunArgs {
  std::string objective = "kcenter";
  std::size_t k = 2;
  double epsilon = 0.5;
  double delta = 0.0;
  std::string metric;
  std::string coords;
  std::string stream;
  std::string oracle = "off";
  std::string offline = "exact-or-greedy";
  std::uint64_t seed = 0;
  std::string out;
  bool timing = false;
};

struct GenerateArgs {
  std::string kind;
  WorkloadParams params;
  std::string out_stream;
  std::string out_metric;
  std::string out_labels;
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

int Run(const RunArgs& args) {
  std::unique_ptr<MetricBackend> backend;
  if (!args.metric.empty()) {
    auto in = OpenInput(args.metric);
    backend = LoadMatrix(in);
  } else {
    auto in = OpenInput(args.coords);
    backend = LoadCoordinates(in);
  }
  MetricOracle oracle(std::move(backend));
  oracle.RescaleToUnitMinimum();
  const double computed = std::max(1.0, oracle.MaxSiteDistance());
  const double delta = args.delta > 0.0 ? args.delta : computed;
  oracle.set_delta_bound(delta);

  auto in = OpenInput(args.stream);
  const auto ops = ParseStream(in);

  ClustererConfig config;
  config.objective = ParseRunObjective(args.objective);
  config.k = args.k;
  config.epsilon = args.epsilon;
  config.delta = delta;
  config.seed = args.seed;
  config.offline = args.offline == "exact" ? OfflineMode::kExact : OfflineMode::kExactOrGreedy;
  RunOptions options;
  options.oracle = args.oracle == "on";
  options.timing = args.timing;

  const RunReport report = RunStream(oracle, ops, config, options);
  if (!args.out.empty()) {
    auto out = OpenOutput(args.out);
    WriteReportCsv(out, report);
  }
  std::cout << "objective: " << RunObjectiveName(config.objective) << '\n'
            << "k: " << config.k << '\n'
            << "epsilon: " << config.epsilon << '\n'
            << "delta: " << std::setprecision(9) << delta << '\n';
  WriteSummary(std::cout, report.summary);
  if (report.summary.oracle_skipped > 0) {
    std::cerr << "warning: " << report.summary.oracle_skipped
              << " queries exceeded the exact solver budget; their ratio is blank\n";
  }
  return 0;
}

int Generate(const GenerateArgs& args) {
  const WorkloadKind kind = ParseWorkloadKind(args.kind);
  const Workload w = GenerateWorkload(kind, args.params);
  {
    auto out = OpenOutput(args.out_stream);
    WriteStream(out, w.ops);
  }
  {
    auto out = OpenOutput(args.out_metric);
    if (!w.coords.empty()) {
      out << std::setprecision(std::numeric_limits<double>::max_digits10);
      for (std::size_t i = 0; i < w.coords.size(); ++i) {
        out << w.keys[i];
        for (double c : w.coords[i]) out << ' ' << c;
        out << '\n';
      }
    } else {
      WriteMatrix(out, w.matrix);
    }
  }
  if (!args.out_labels.empty()) {
    if (w.labels.empty()) throw std::runtime_error("this workload kind has no labels");
    auto out = OpenOutput(args.out_labels);
    for (std::size_t i = 0; i < w.labels.size(); ++i) out << w.keys[i] << ' ' << w.labels[i] << '\n';
  }
  std::cout << "kind: " << WorkloadName(kind) << '\n'
            << "ops: " << w.ops.size() << '\n'
            << "points: " << w.keys.size() << '\n'
            << "metric: " << (w.coords.empty() ? "matrix" : "coordinates") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic k-center, sum-of-radii and sum-of-diameters clustering"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Replay an update stream through a clustering ladder");
  run_cmd->add_option("--objective", run.objective, "kcenter, kcenter-det, sor or sod")
      ->check(CLI::IsMember({"kcenter", "kcenter-det", "sor", "sod"}))
      ->capture_default_str();
  run_cmd->add_option("--k", run.k, "Number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--epsilon", run.epsilon, "Ladder step, in (0, 1]")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  run_cmd->add_option("--delta", run.delta, "Aspect ratio bound; defaults to the metric's largest distance");
  auto* metric_opt = run_cmd->add_option("--metric", run.metric, "Distance matrix file")->check(CLI::ExistingFile);
  auto* coords_opt = run_cmd->add_option("--coords", run.coords, "Coordinate file (key x y ...)")
                         ->check(CLI::ExistingFile);
  metric_opt->excludes(coords_opt);
  run_cmd->add_option("--stream", run.stream, "Update stream file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--oracle", run.oracle, "Compare each query with the exact optimum")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run_cmd->add_option("--offline", run.offline, "Offline sum-of-radii solver: exact or exact-or-greedy")
      ->check(CLI::IsMember({"exact", "exact-or-greedy"}))
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "CSV report path");
  run_cmd->add_flag("--timing", run.timing, "Fill the wall-time column (output no longer reproducible)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic or adversarial stream with its metric");
  gen_cmd->add_option("kind", gen.kind,
                      "uniform-euclidean, clustered-gaussian, sliding-window, adversary-adaptive or "
                      "adversary-oblivious")
      ->required();
  gen_cmd->add_option("--n", gen.params.n, "Number of points")->capture_default_str();
  gen_cmd->add_option("--dim", gen.params.dim, "Dimension")->capture_default_str();
  gen_cmd->add_option("--clusters", gen.params.clusters, "Gaussian clusters")->capture_default_str();
  gen_cmd->add_option("--sigma", gen.params.sigma, "Gaussian spread")->capture_default_str();
  gen_cmd->add_option("--delete-fraction", gen.params.delete_fraction, "Deletion chance after each insert")
      ->capture_default_str();
  gen_cmd->add_option("--window", gen.params.window, "Sliding window length")->capture_default_str();
  gen_cmd->add_option("--query-every", gen.params.query_every, "Updates between queries (0 = none)")
      ->capture_default_str();
  gen_cmd->add_option("--k", gen.params.k, "k for adversarial streams")->capture_default_str();
  gen_cmd->add_option("--ops", gen.params.ops, "Updates of the adaptive adversary")->capture_default_str();
  gen_cmd->add_option("--budget", gen.params.budget, "Distance queries per insert of the probing algorithm")
      ->capture_default_str();
  gen_cmd->add_option("--blocks", gen.params.blocks, "Oblivious blocks")->capture_default_str();
  gen_cmd->add_option("--delta", gen.params.delta, "Oblivious far distance")->capture_default_str();
  gen_cmd->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out-stream", gen.out_stream, "Stream output path")->required();
  gen_cmd->add_option("--out-metric", gen.out_metric, "Metric output path (coordinates or matrix)")->required();
  gen_cmd->add_option("--out-labels", gen.out_labels, "Ground-truth labels (clustered-gaussian)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) {
      if (run.metric.empty() && run.coords.empty()) throw std::runtime_error("one of --metric or --coords is required");
      return Run(run);
    }
    return Generate(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

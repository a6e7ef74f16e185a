// Command-line harness for sparse principal component detection experiments.
//
// Subcommands: error-table, rate-sweep, reduction-demo, calibrate,
// gen-graph, gen-data, stat.
// Exit codes: 0 success, 2 config error, 3 infeasible, 4 resource budget.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsepc/detection.hpp"
#include "sparsepc/errors.hpp"
#include "sparsepc/experiment.hpp"
#include "sparsepc/io.hpp"
#include "sparsepc/reduction.hpp"
#include "sparsepc/samplers.hpp"
#include "sparsepc/sdp.hpp"

namespace {

using nlohmann::json;
using namespace sparsepc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitResource = 4;

struct CommonOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::string> format;
};

void add_overrides(CLI::App* cmd, CommonOverrides& common, bool config_required) {
  auto* config = cmd->add_option("--config", common.config_path, "experiment config (JSON)");
  if (config_required) config->required();
  cmd->add_option("--seed", common.seed, "root seed (overrides config)");
  cmd->add_option("--out", common.out_dir, "output directory (overrides config)");
  cmd->add_option("--threads", common.threads, "worker threads, 0 = hardware (overrides config)");
  cmd->add_option("--format", common.format, "csv|json|both (overrides config)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

ExperimentConfig load_config(const CommonOverrides& common, const std::string& mode) {
  ExperimentConfig cfg = ExperimentConfig::from_json_file(common.config_path);
  if (cfg.mode != mode) {
    throw InvalidArgument("config mode '" + cfg.mode + "' does not match subcommand '" + mode +
                          "'");
  }
  if (common.seed) cfg.seed = *common.seed;
  if (common.out_dir) cfg.out_dir = *common.out_dir;
  if (common.threads) cfg.threads = *common.threads;
  if (common.format) cfg.format = *common.format;
  cfg.validate();
  return cfg;
}

void emit_record(const std::string& format, const json& record, const std::string& csv_header,
                 const std::string& csv_row) {
  if (format == "csv") {
    std::cout << "schema=1\n" << csv_header << '\n' << csv_row << '\n';
  } else {
    std::cout << record.dump(2) << '\n';
  }
}

int run_one_shot_reduction(const ExperimentConfig& cfg, const std::string& graph_path) {
  std::ifstream in(graph_path);
  if (!in) throw InvalidArgument("cannot open graph file: " + graph_path);
  int declared_kappa = 0;
  const Graph g = read_edge_list(in, &declared_kappa);
  if (cfg.grid.d.size() != 1 || cfg.grid.n.size() != 1 || cfg.grid.k.size() != 1 ||
      cfg.grid.statistic.size() != 1) {
    throw InvalidArgument("--graph mode needs singleton d, n, k and statistic in the grid");
  }
  if (g.vertex_count() % 2 != 0) {
    throw InvalidArgument("--graph mode needs an even vertex count");
  }

  ReductionParams params;
  params.d = cfg.grid.d.front();
  params.n = cfg.grid.n.front();
  params.k = cfg.grid.k.front();
  params.m = g.vertex_count() / 2;
  params.kappa = declared_kappa;
  params.alpha = cfg.reduction.alpha;
  params.mu = cfg.reduction.mu;
  params.gamma_factor = cfg.reduction.gamma;
  params.delta = cfg.reduction.relaxed_delta > 0.0 ? cfg.reduction.relaxed_delta : cfg.delta;
  params.a = 2.0 * params.mu;
  params.b = 1.0 - (2.0 - params.alpha) * params.mu;
  params.relaxed = cfg.reduction.relaxed_delta > 0.0;

  RngStream stream = RngStream(cfg.seed).child("reduction-file");
  RngStream bl_rng = stream.child("bl");
  const SampleMatrix x = bottom_left(g, params.d, params.n, bl_rng);
  DetectionConfig det;
  det.d = params.d;
  det.n = params.n;
  det.k = params.k;
  det.delta = cfg.delta;
  const StatisticKind kind = statistic_kind_from_string(cfg.grid.statistic.front());
  const TestOutcome outcome = run_test(x, det, kind, cfg.support_budget);

  const json record = {{"schema", 1},
                       {"graph", graph_path},
                       {"vertices", g.vertex_count()},
                       {"declared_kappa", declared_kappa},
                       {"statistic_kind", to_string(kind)},
                       {"statistic", outcome.statistic},
                       {"threshold", outcome.threshold},
                       {"reject", outcome.reject},
                       {"precision", outcome.precision}};
  emit_record(cfg.format == "csv" ? "csv" : "json", record,
              "graph,vertices,declared_kappa,statistic_kind,statistic,threshold,reject,precision",
              graph_path + ',' + std::to_string(g.vertex_count()) + ',' +
                  std::to_string(declared_kappa) + ',' + to_string(kind) + ',' +
                  format_double(outcome.statistic) + ',' + format_double(outcome.threshold) +
                  ',' + (outcome.reject ? "1" : "0") + ',' + format_double(outcome.precision));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse principal component detection toolkit"};
  app.require_subcommand(1);

  // error-table | rate-sweep | reduction-demo
  CommonOverrides error_common, sweep_common, reduction_common;
  auto* error_cmd = app.add_subcommand("error-table", "Monte Carlo type I/II error table");
  add_overrides(error_cmd, error_common, true);
  auto* sweep_cmd = app.add_subcommand("rate-sweep", "empirical detection-boundary sweep");
  add_overrides(sweep_cmd, sweep_common, true);
  auto* reduction_cmd =
      app.add_subcommand("reduction-demo", "planted-clique to sparse-PC reduction demo");
  add_overrides(reduction_cmd, reduction_common, true);
  std::string reduction_graph_path;
  reduction_cmd->add_option("--graph", reduction_graph_path,
                            "push one external edge-list graph through the reduction");

  // calibrate
  auto* calibrate_cmd = app.add_subcommand("calibrate", "empirical null quantile threshold");
  int cal_d = 0, cal_n = 0, cal_k = 0, cal_trials = 200;
  double cal_delta = 0.05;
  std::string cal_statistic = "sparse_eig", cal_family = "rademacher", cal_format = "json";
  std::uint64_t cal_seed = 0;
  calibrate_cmd->add_option("--d", cal_d)->required();
  calibrate_cmd->add_option("--n", cal_n)->required();
  calibrate_cmd->add_option("--k", cal_k)->required();
  calibrate_cmd->add_option("--delta", cal_delta);
  calibrate_cmd->add_option("--trials", cal_trials);
  calibrate_cmd->add_option("--statistic", cal_statistic)
      ->check(CLI::IsMember({"sparse_eig", "sdp", "dual"}));
  calibrate_cmd->add_option("--family", cal_family)
      ->check(CLI::IsMember({"gaussian", "rademacher"}));
  calibrate_cmd->add_option("--seed", cal_seed);
  calibrate_cmd->add_option("--format", cal_format)->check(CLI::IsMember({"csv", "json"}));

  // gen-graph
  auto* gen_graph_cmd = app.add_subcommand("gen-graph", "write an edge-list graph sample");
  int gg_m = 0, gg_kappa = 0;
  std::uint64_t gg_seed = 0;
  std::string gg_out = "results";
  gen_graph_cmd->add_option("--m", gg_m, "vertex count")->required();
  gen_graph_cmd->add_option("--kappa", gg_kappa, "planted clique size, 0 = Erdos-Renyi");
  gen_graph_cmd->add_option("--seed", gg_seed);
  gen_graph_cmd->add_option("--out", gg_out, "output directory");

  // gen-data
  auto* gen_data_cmd = app.add_subcommand("gen-data", "write a CSV data sample");
  int gd_d = 0, gd_n = 0, gd_k = 1;
  double gd_theta = 0.0;
  std::string gd_family = "gaussian", gd_out = "results";
  std::uint64_t gd_seed = 0;
  gen_data_cmd->add_option("--d", gd_d)->required();
  gen_data_cmd->add_option("--n", gd_n)->required();
  gen_data_cmd->add_option("--family", gd_family)
      ->check(CLI::IsMember({"gaussian", "rademacher", "rademacher_planted"}));
  gen_data_cmd->add_option("--theta", gd_theta, "spike strength; 0 = null sample");
  gen_data_cmd->add_option("--k", gd_k, "spike sparsity (support = first k coordinates)");
  gen_data_cmd->add_option("--seed", gd_seed);
  gen_data_cmd->add_option("--out", gd_out, "output directory");

  // stat
  auto* stat_cmd = app.add_subcommand("stat", "one-shot statistic on a CSV matrix");
  std::string st_input, st_statistic = "sparse_eig", st_format = "json";
  int st_k = 1;
  double st_epsilon = 0.0;
  std::uint64_t st_budget = kDefaultSupportBudget;
  stat_cmd->add_option("--input", st_input, "CSV sample (gen-data format)")->required();
  stat_cmd->add_option("--k", st_k)->required();
  stat_cmd->add_option("--statistic", st_statistic)
      ->check(CLI::IsMember({"sparse_eig", "sdp", "dual"}));
  stat_cmd->add_option("--epsilon", st_epsilon, "SDP precision; 0 = 1/sqrt(n)");
  stat_cmd->add_option("--budget", st_budget, "support enumeration budget");
  stat_cmd->add_option("--format", st_format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (error_cmd->parsed()) {
      run_error_experiment(load_config(error_common, "error-table"));
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      run_rate_sweep(load_config(sweep_common, "rate-sweep"));
      return kExitOk;
    }
    if (reduction_cmd->parsed()) {
      const ExperimentConfig cfg = load_config(reduction_common, "reduction-demo");
      if (!reduction_graph_path.empty()) {
        return run_one_shot_reduction(cfg, reduction_graph_path);
      }
      const ReductionDemoResult result = run_reduction_demo(cfg);
      if (!result.any_feasible) {
        std::cerr << "reduction-demo: every cell infeasible; see cells output for the "
                     "feasibility frontier\n";
        return kExitInfeasible;
      }
      return kExitOk;
    }
    if (calibrate_cmd->parsed()) {
      DetectionConfig det;
      det.d = cal_d;
      det.n = cal_n;
      det.k = cal_k;
      det.delta = cal_delta;
      const double tau = calibrate_threshold(
          det, statistic_kind_from_string(cal_statistic), cal_trials, cal_seed,
          cal_family == "gaussian" ? NullFamily::kGaussian : NullFamily::kRademacher);
      const json record = {{"schema", 1},    {"d", cal_d},
                           {"n", cal_n},     {"k", cal_k},
                           {"delta", cal_delta}, {"statistic_kind", cal_statistic},
                           {"family", cal_family}, {"trials", cal_trials},
                           {"seed", cal_seed},  {"tau", tau}};
      emit_record(cal_format, record, "d,n,k,delta,statistic_kind,family,trials,seed,tau",
                  std::to_string(cal_d) + ',' + std::to_string(cal_n) + ',' +
                      std::to_string(cal_k) + ',' + format_double(cal_delta) + ',' +
                      cal_statistic + ',' + cal_family + ',' + std::to_string(cal_trials) + ',' +
                      std::to_string(cal_seed) + ',' + format_double(tau));
      return kExitOk;
    }
    if (gen_graph_cmd->parsed()) {
      const Graph g = gg_kappa > 0 ? sample_planted_clique(gg_m, gg_kappa, gg_seed)
                                   : sample_er_graph(gg_m, gg_seed);
      std::filesystem::create_directories(gg_out);
      std::ofstream out(gg_out + "/graph.edges", std::ios::binary);
      if (!out) throw InvalidArgument("cannot open " + gg_out + "/graph.edges");
      write_edge_list(g, out);
      return kExitOk;
    }
    if (gen_data_cmd->parsed()) {
      SampleMatrix x;
      if (gd_theta > 0.0) {
        if (gd_family == "rademacher") {
          throw InvalidArgument("gen-data: family rademacher has no spiked sampler; "
                                "use rademacher_planted");
        }
        std::vector<int> support(gd_k);
        for (int i = 0; i < gd_k; ++i) support[i] = i;
        const SparseDirection v = SparseDirection::uniform_on(gd_d, std::move(support));
        x = sample_spiked(gd_d, gd_n, v, gd_theta,
                          gd_family == "gaussian" ? SpikedFamily::kGaussian
                                                  : SpikedFamily::kRademacherPlanted,
                          gd_seed);
      } else {
        x = sample_null(gd_d, gd_n,
                        gd_family == "gaussian" ? NullFamily::kGaussian : NullFamily::kRademacher,
                        gd_seed);
      }
      std::filesystem::create_directories(gd_out);
      std::ofstream out(gd_out + "/data.csv", std::ios::binary);
      if (!out) throw InvalidArgument("cannot open " + gd_out + "/data.csv");
      write_sample_csv(x, out);
      return kExitOk;
    }
    if (stat_cmd->parsed()) {
      std::ifstream in(st_input);
      if (!in) throw InvalidArgument("cannot open input: " + st_input);
      const SampleMatrix x = read_sample_csv(in);
      const SymmetricMatrix sigma = empirical_covariance(x);
      const StatisticKind kind = statistic_kind_from_string(st_statistic);
      double value = 0.0;
      double precision = 0.0;
      int iterations = 0;
      bool converged = true;
      if (kind == StatisticKind::kSparseEig) {
        value = sparse_eigmax(sigma, st_k, st_budget).value;
      } else if (kind == StatisticKind::kDual) {
        value = dual_bound(sigma, st_k);
      } else {
        const double epsilon = st_epsilon > 0.0 ? st_epsilon : 1.0 / std::sqrt(x.n());
        const SdpSolution sol = sdp_relax(sigma, st_k, epsilon);
        value = sol.value;
        precision = sol.precision;
        iterations = sol.iterations;
        converged = sol.converged;
      }
      const json record = {{"schema", 1},
                           {"input", st_input},
                           {"d", x.d()},
                           {"n", x.n()},
                           {"k", st_k},
                           {"statistic_kind", st_statistic},
                           {"value", value},
                           {"precision", precision},
                           {"iterations", iterations},
                           {"converged", converged}};
      emit_record(st_format, record,
                  "input,d,n,k,statistic_kind,value,precision,iterations,converged",
                  st_input + ',' + std::to_string(x.d()) + ',' + std::to_string(x.n()) + ',' +
                      std::to_string(st_k) + ',' + st_statistic + ',' + format_double(value) +
                      ',' + format_double(precision) + ',' + std::to_string(iterations) + ',' +
                      (converged ? "1" : "0"));
      return kExitOk;
    }
  } catch (const ResourceLimit& e) {
    std::cerr << "resource budget: " << e.what() << '\n';
    return kExitResource;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

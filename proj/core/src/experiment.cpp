#include "sparsepc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sparsepc/errors.hpp"
#include "sparsepc/io.hpp"

namespace sparsepc {
namespace {

using nlohmann::json;

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

double standard_normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double binomial_se(double p, int trials) {
  return trials > 0 ? std::sqrt(p * (1.0 - p) / trials) : 0.0;
}

struct Cell {
  int index = 0;
  int d = 0, n = 0, k = 0;
  double theta = 0.0;
  std::string family, statistic, threshold_mode;
};

std::vector<Cell> expand_grid(const GridSpec& grid) {
  std::vector<Cell> cells;
  int index = 0;
  for (const int d : grid.d)
    for (const int n : grid.n)
      for (const int k : grid.k)
        for (const double theta : grid.theta)
          for (const std::string& family : grid.family)
            for (const std::string& statistic : grid.statistic)
              for (const std::string& mode : grid.threshold_mode) {
                Cell c;
                c.index = index++;
                c.d = d;
                c.n = n;
                c.k = k;
                c.theta = theta;
                c.family = family;
                c.statistic = statistic;
                c.threshold_mode = mode;
                cells.push_back(std::move(c));
              }
  return cells;
}

NullFamily null_family_for(const std::string& family) {
  if (family == "gaussian") return NullFamily::kGaussian;
  if (family == "rademacher" || family == "rademacher_planted") return NullFamily::kRademacher;
  throw InvalidArgument("unknown family: " + family);
}

SpikedFamily spiked_family_for(const std::string& family) {
  if (family == "gaussian") return SpikedFamily::kGaussian;
  if (family == "rademacher_planted") return SpikedFamily::kRademacherPlanted;
  throw InvalidArgument("family " + family + " has no spiked sampler");
}

/// Statistic value plus solver diagnostics at the statistic's own precision.
struct StatValue {
  double value = 0.0;
  int iterations = 0;
  double gap = 0.0;
};

StatValue statistic_on(const SymmetricMatrix& sigma, const DetectionConfig& cfg,
                       StatisticKind kind, std::uint64_t budget) {
  const TestOutcome outcome = evaluate_statistic(sigma, cfg, kind, budget);
  StatValue v;
  v.value = outcome.statistic;
  v.iterations = outcome.iterations;
  v.gap = outcome.precision;
  return v;
}

SampleMatrix draw_dataset(const Cell& cell, bool alternative, RngStream& stream) {
  if (!alternative || cell.theta == 0.0) {
    RngStream data = stream.child("data");
    return sample_null(cell.d, cell.n, null_family_for(cell.family), data);
  }
  RngStream dir_stream = stream.child("direction");
  const SparseDirection v =
      SparseDirection::uniform_on(cell.d, sample_subset(cell.d, cell.k, dir_stream));
  RngStream data = stream.child("data");
  return sample_spiked(cell.d, cell.n, v, cell.theta, spiked_family_for(cell.family), data);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open output file: " + path);
  out << contents;
}

std::string bool_field(bool b) { return b ? "1" : "0"; }

json cell_to_json(const CellSummary& c) {
  return json{{"cell", c.cell},
              {"d", c.d},
              {"n", c.n},
              {"k", c.k},
              {"theta", c.theta},
              {"family", c.family},
              {"statistic", c.statistic},
              {"threshold_mode", c.threshold_mode},
              {"skipped", c.skipped},
              {"skip_reason", c.skip_reason},
              {"in_regime", c.in_regime},
              {"tau", c.tau},
              {"trials", c.trials},
              {"type1", c.type1},
              {"type2", c.type2},
              {"max_error", c.max_error},
              {"se_type1", c.se_type1},
              {"se_type2", c.se_type2}};
}

std::string trials_csv(const std::vector<TrialRecord>& trials, const std::vector<Cell>& cells) {
  std::ostringstream out;
  out << "schema=1\n";
  out << "cell,trial,hypothesis,stream_key,d,n,k,theta,family,statistic,threshold_mode,"
         "stat_value,threshold,reject,iterations,gap\n";
  for (const TrialRecord& t : trials) {
    const Cell& c = cells[static_cast<std::size_t>(t.cell)];
    out << t.cell << ',' << t.trial << ',' << t.hypothesis << ',' << t.stream_key << ',' << c.d
        << ',' << c.n << ',' << c.k << ',' << format_double(c.theta) << ',' << c.family << ','
        << c.statistic << ',' << c.threshold_mode << ',' << format_double(t.statistic) << ','
        << format_double(t.threshold) << ',' << bool_field(t.reject) << ',' << t.iterations << ','
        << format_double(t.gap) << '\n';
  }
  return out.str();
}

// The echoed configuration is part of the result files. `threads` is
// deliberately absent: scheduling cannot affect results, and outputs must be
// byte-identical across thread counts.
json config_to_json(const ExperimentConfig& cfg) {
  return json{{"mode", cfg.mode},
              {"seed", cfg.seed},
              {"trials", cfg.trials},
              {"delta", cfg.delta},
              {"out", cfg.out_dir},
              {"format", cfg.format},
              {"calibration_trials", cfg.calibration_trials},
              {"support_budget", cfg.support_budget},
              {"grid",
               {{"d", cfg.grid.d},
                {"n", cfg.grid.n},
                {"k", cfg.grid.k},
                {"theta", cfg.grid.theta},
                {"family", cfg.grid.family},
                {"statistic", cfg.grid.statistic},
                {"threshold_mode", cfg.grid.threshold_mode}}},
              {"sweep",
               {{"theta_min", cfg.sweep.theta_min},
                {"theta_max", cfg.sweep.theta_max},
                {"steps", cfg.sweep.steps},
                {"trials_per_probe", cfg.sweep.trials_per_probe}}},
              {"reduction",
               {{"alpha", cfg.reduction.alpha},
                {"mu", cfg.reduction.mu},
                {"gamma", cfg.reduction.gamma},
                {"relaxed_delta", cfg.reduction.relaxed_delta}}}};
}

void emit(const ExperimentConfig& cfg,
          const std::vector<std::pair<std::string, std::string>>& csv_files,
          const json& summary) {
  std::filesystem::create_directories(cfg.out_dir);
  const bool want_csv = cfg.format == "csv" || cfg.format == "both";
  const bool want_json = cfg.format == "json" || cfg.format == "both";
  if (want_csv) {
    for (const auto& [name, contents] : csv_files) {
      write_file(cfg.out_dir + "/" + name, contents);
    }
  }
  if (want_json) {
    write_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (mode != "error-table" && mode != "rate-sweep" && mode != "reduction-demo") {
    throw InvalidArgument("ExperimentConfig: unknown mode " + mode);
  }
  if (trials < 1) throw InvalidArgument("ExperimentConfig: trials must be >= 1");
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    throw InvalidArgument("ExperimentConfig: delta must lie in (0, 1/3)");
  }
  if (format != "csv" && format != "json" && format != "both") {
    throw InvalidArgument("ExperimentConfig: format must be csv, json or both");
  }
  if (threads < 0) throw InvalidArgument("ExperimentConfig: threads must be >= 0");
  if (calibration_trials < 100) {
    throw InvalidArgument("ExperimentConfig: calibration_trials must be >= 100");
  }
  if (sweep.steps < 1 || sweep.trials_per_probe < 1 || !(sweep.theta_max > sweep.theta_min)) {
    throw InvalidArgument("ExperimentConfig: malformed sweep section");
  }
  for (const std::string& s : grid.statistic) statistic_kind_from_string(s);
  for (const std::string& f : grid.family) null_family_for(f);
  for (const std::string& mode_name : grid.threshold_mode) {
    if (mode_name != "theoretical" && mode_name != "calibrated") {
      throw InvalidArgument("ExperimentConfig: threshold_mode must be theoretical or calibrated");
    }
  }
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.mode = j.value("mode", cfg.mode);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.format = j.value("format", cfg.format);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.calibration_trials = j.value("calibration_trials", cfg.calibration_trials);
    cfg.support_budget = j.value("support_budget", cfg.support_budget);
    if (j.contains("grid")) {
      const json& g = j["grid"];
      cfg.grid.d = g.value("d", cfg.grid.d);
      cfg.grid.n = g.value("n", cfg.grid.n);
      cfg.grid.k = g.value("k", cfg.grid.k);
      cfg.grid.theta = g.value("theta", cfg.grid.theta);
      cfg.grid.family = g.value("family", cfg.grid.family);
      cfg.grid.statistic = g.value("statistic", cfg.grid.statistic);
      cfg.grid.threshold_mode = g.value("threshold_mode", cfg.grid.threshold_mode);
    }
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      cfg.sweep.theta_min = s.value("theta_min", cfg.sweep.theta_min);
      cfg.sweep.theta_max = s.value("theta_max", cfg.sweep.theta_max);
      cfg.sweep.steps = s.value("steps", cfg.sweep.steps);
      cfg.sweep.trials_per_probe = s.value("trials_per_probe", cfg.sweep.trials_per_probe);
    }
    if (j.contains("reduction")) {
      const json& r = j["reduction"];
      cfg.reduction.alpha = r.value("alpha", cfg.reduction.alpha);
      cfg.reduction.mu = r.value("mu", cfg.reduction.mu);
      cfg.reduction.gamma = r.value("gamma", cfg.reduction.gamma);
      cfg.reduction.relaxed_delta = r.value("relaxed_delta", cfg.reduction.relaxed_delta);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2); }

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

RankSumResult rank_sum_greater(const std::vector<double>& baseline,
                               const std::vector<double>& greater) {
  const std::size_t n0 = baseline.size();
  const std::size_t n1 = greater.size();
  if (n0 == 0 || n1 == 0) throw InvalidArgument("rank_sum_greater: empty sample");
  struct Tagged {
    double value;
    bool from_greater;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(n0 + n1);
  for (const double v : baseline) pooled.push_back({v, false});
  for (const double v : greater) pooled.push_back({v, true});
  std::sort(pooled.begin(), pooled.end(),
            [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  const double total = static_cast<double>(n0 + n1);
  double rank_sum = 0.0;
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double tied = static_cast<double>(j - i);
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t) {
      if (pooled[t].from_greater) rank_sum += avg_rank;
    }
    tie_term += tied * tied * tied - tied;
    i = j;
  }
  const double u = rank_sum - static_cast<double>(n1) * (n1 + 1) / 2.0;
  const double mean = static_cast<double>(n0) * static_cast<double>(n1) / 2.0;
  const double variance = static_cast<double>(n0) * static_cast<double>(n1) / 12.0 *
                          ((total + 1.0) - tie_term / (total * (total - 1.0)));
  RankSumResult r;
  if (variance <= 0.0) {
    r.z = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.z = (u - mean - 0.5) / std::sqrt(variance);
  r.p_value = standard_normal_sf(r.z);
  return r;
}

ErrorTableResult run_error_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Cell> cells = expand_grid(cfg.grid);
  const RngStream root = RngStream(cfg.seed).child("error-table");

  ErrorTableResult result;
  result.cells.resize(cells.size());
  std::vector<std::vector<TrialRecord>> per_cell(cells.size());

  for (const Cell& cell : cells) {
    CellSummary& summary = result.cells[static_cast<std::size_t>(cell.index)];
    summary.cell = cell.index;
    summary.d = cell.d;
    summary.n = cell.n;
    summary.k = cell.k;
    summary.theta = cell.theta;
    summary.family = cell.family;
    summary.statistic = cell.statistic;
    summary.threshold_mode = cell.threshold_mode;
    summary.trials = cfg.trials;

    DetectionConfig det;
    det.d = cell.d;
    det.n = cell.n;
    det.k = cell.k;
    det.delta = cfg.delta;
    det.theta = cell.theta;
    try {
      det.validate();
    } catch (const InvalidArgument& e) {
      summary.skipped = true;
      summary.skip_reason = sanitize(e.what());
      continue;
    }
    summary.in_regime = in_sparse_regime(det);

    const StatisticKind kind = statistic_kind_from_string(cell.statistic);
    if ((kind == StatisticKind::kSparseEig) && support_count(cell.d, cell.k) > cfg.support_budget) {
      summary.skipped = true;
      summary.skip_reason = "support budget exceeded";
      continue;
    }
    if (cell.family == "rademacher_planted" && cell.theta > 0.0 &&
        (cell.k < 2 || cell.theta / (cell.k - 1) > 0.5)) {
      summary.skipped = true;
      summary.skip_reason = "theta not realizable by the rademacher_planted family";
      continue;
    }
    if (cell.threshold_mode == "theoretical" && !summary.in_regime) {
      summary.skipped = true;
      summary.skip_reason = "outside sparse regime R0 (theoretical thresholds inapplicable)";
      continue;
    }

    double tau = 0.0;
    if (cell.threshold_mode == "theoretical") {
      tau = kind == StatisticKind::kSparseEig ? threshold_sparse_eig(det) : threshold_sdp(det);
    } else {
      RngStream calib = RngStream(cfg.seed).child("calibration").child(
          static_cast<std::uint64_t>(cell.index));
      tau = calibrate_threshold(det, kind, cfg.calibration_trials, calib.next_u64(),
                                null_family_for(cell.family));
    }
    summary.tau = tau;

    std::vector<TrialRecord>& records = per_cell[static_cast<std::size_t>(cell.index)];
    records.resize(static_cast<std::size_t>(2 * cfg.trials));
    parallel_for(2 * cfg.trials, cfg.threads, [&](int task) {
      const int trial = task / 2;
      const bool alternative = (task % 2) == 1;
      RngStream stream = root.child(static_cast<std::uint64_t>(cell.index))
                             .child(static_cast<std::uint64_t>(trial))
                             .child(alternative ? "H1" : "H0");
      const SampleMatrix x = draw_dataset(cell, alternative, stream);
      const StatValue v = statistic_on(empirical_covariance(x), det, kind, cfg.support_budget);
      TrialRecord& rec = records[static_cast<std::size_t>(task)];
      rec.cell = cell.index;
      rec.trial = trial;
      rec.hypothesis = alternative ? "H1" : "H0";
      rec.stream_key = stream.key();
      rec.statistic = v.value;
      rec.threshold = 1.0 + tau;
      rec.reject = v.value > 1.0 + tau;
      rec.iterations = v.iterations;
      rec.gap = v.gap;
    });

    int rejects_h0 = 0;
    int accepts_h1 = 0;
    for (const TrialRecord& rec : records) {
      if (rec.hypothesis == "H0" && rec.reject) ++rejects_h0;
      if (rec.hypothesis == "H1" && !rec.reject) ++accepts_h1;
    }
    summary.type1 = static_cast<double>(rejects_h0) / cfg.trials;
    summary.type2 = static_cast<double>(accepts_h1) / cfg.trials;
    summary.max_error = std::max(summary.type1, summary.type2);
    summary.se_type1 = binomial_se(summary.type1, cfg.trials);
    summary.se_type2 = binomial_se(summary.type2, cfg.trials);
  }

  for (const std::vector<TrialRecord>& records : per_cell) {
    result.trials.insert(result.trials.end(), records.begin(), records.end());
  }

  std::ostringstream cells_csv;
  cells_csv << "schema=1\n";
  cells_csv << "cell,d,n,k,theta,family,statistic,threshold_mode,skipped,skip_reason,in_regime,"
               "tau,trials,type1,type2,max_error,se_type1,se_type2\n";
  json cells_json = json::array();
  for (const CellSummary& c : result.cells) {
    cells_csv << c.cell << ',' << c.d << ',' << c.n << ',' << c.k << ',' << format_double(c.theta)
              << ',' << c.family << ',' << c.statistic << ',' << c.threshold_mode << ','
              << bool_field(c.skipped) << ',' << sanitize(c.skip_reason) << ','
              << bool_field(c.in_regime) << ',' << format_double(c.tau) << ',' << c.trials << ','
              << format_double(c.type1) << ',' << format_double(c.type2) << ','
              << format_double(c.max_error) << ',' << format_double(c.se_type1) << ','
              << format_double(c.se_type2) << '\n';
    cells_json.push_back(cell_to_json(c));
  }

  json summary = {{"schema", 1},
                  {"config", config_to_json(cfg)},
                  {"cells", cells_json},
                  {"trial_count", result.trials.size()}};
  emit(cfg,
       {{"trials.csv", trials_csv(result.trials, cells)}, {"cells.csv", cells_csv.str()}},
       summary);
  return result;
}

RateSweepResult run_rate_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  int varying = 0;
  if (cfg.grid.d.size() > 1) ++varying;
  if (cfg.grid.n.size() > 1) ++varying;
  if (cfg.grid.k.size() > 1) ++varying;
  if (varying > 1) {
    throw InvalidArgument("rate-sweep: vary exactly one of (d, n, k) at a time");
  }

  std::vector<Cell> cells;
  int index = 0;
  for (const std::string& statistic : cfg.grid.statistic)
    for (const int d : cfg.grid.d)
      for (const int n : cfg.grid.n)
        for (const int k : cfg.grid.k) {
          Cell c;
          c.index = index++;
          c.d = d;
          c.n = n;
          c.k = k;
          c.family = cfg.grid.family.front();
          c.statistic = statistic;
          c.threshold_mode = "calibrated";
          cells.push_back(std::move(c));
        }

  const RngStream root = RngStream(cfg.seed).child("rate-sweep");
  RateSweepResult result;
  result.cells.resize(cells.size());

  for (const Cell& cell : cells) {
    SweepCell& sc = result.cells[static_cast<std::size_t>(cell.index)];
    sc.cell = cell.index;
    sc.d = cell.d;
    sc.n = cell.n;
    sc.k = cell.k;
    sc.statistic = cell.statistic;
    sc.family = cell.family;

    DetectionConfig det;
    det.d = cell.d;
    det.n = cell.n;
    det.k = cell.k;
    det.delta = cfg.delta;
    det.validate();
    const StatisticKind kind = statistic_kind_from_string(cell.statistic);

    RngStream calib = root.child(static_cast<std::uint64_t>(cell.index)).child("calibration");
    sc.tau_calibrated = calibrate_threshold(det, kind, cfg.calibration_trials, calib.next_u64(),
                                            null_family_for(cell.family));

    auto probe_type2 = [&](int step, double theta) {
      Cell probe_cell = cell;
      probe_cell.theta = theta;
      std::vector<int> accepts(static_cast<std::size_t>(cfg.sweep.trials_per_probe));
      parallel_for(cfg.sweep.trials_per_probe, cfg.threads, [&](int trial) {
        RngStream stream = root.child(static_cast<std::uint64_t>(cell.index))
                               .child(static_cast<std::uint64_t>(step))
                               .child(static_cast<std::uint64_t>(trial));
        const SampleMatrix x = draw_dataset(probe_cell, true, stream);
        const StatValue v = statistic_on(empirical_covariance(x), det, kind, cfg.support_budget);
        accepts[static_cast<std::size_t>(trial)] = v.value > 1.0 + sc.tau_calibrated ? 0 : 1;
      });
      int total = 0;
      for (const int a : accepts) total += a;
      return static_cast<double>(total) / cfg.sweep.trials_per_probe;
    };

    // Step 0 probes theta_max; if even that fails, the boundary is censored.
    const double t2_at_max = probe_type2(0, cfg.sweep.theta_max);
    result.probes.push_back({cell.index, 0, cfg.sweep.theta_max, t2_at_max,
                             cfg.sweep.trials_per_probe});
    double lo = cfg.sweep.theta_min;
    double hi = cfg.sweep.theta_max;
    if (t2_at_max > cfg.delta) {
      sc.undetectable = true;
      sc.boundary = cfg.sweep.theta_max;
      sc.bracket_lo = lo;
      sc.bracket_hi = hi;
    } else {
      for (int step = 1; step <= cfg.sweep.steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        const double t2 = probe_type2(step, mid);
        result.probes.push_back({cell.index, step, mid, t2, cfg.sweep.trials_per_probe});
        if (t2 <= cfg.delta) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      sc.boundary = 0.5 * (lo + hi);
      sc.bracket_lo = lo;
      sc.bracket_hi = hi;
    }

    // Non-monotone empirical power beyond Monte Carlo noise earns a warning.
    std::vector<SweepProbe> mine;
    for (const SweepProbe& p : result.probes) {
      if (p.cell == cell.index) mine.push_back(p);
    }
    std::sort(mine.begin(), mine.end(),
              [](const SweepProbe& a, const SweepProbe& b) { return a.theta < b.theta; });
    for (std::size_t i = 1; i < mine.size(); ++i) {
      const double se = binomial_se(0.5, cfg.sweep.trials_per_probe);
      if (mine[i].type2 > mine[i - 1].type2 + 4.0 * se) sc.monotone_warning = true;
    }

    sc.theta_star = std::sqrt(cell.k * std::log(static_cast<double>(cell.d)) / cell.n);
    sc.ratio_to_theta_star = sc.boundary / sc.theta_star;
    sc.ratio_to_sqrt_k_theta_star = sc.boundary / (std::sqrt(static_cast<double>(cell.k)) * sc.theta_star);
  }

  std::ostringstream probes_csv;
  probes_csv << "schema=1\ncell,step,theta,type2,trials\n";
  for (const SweepProbe& p : result.probes) {
    probes_csv << p.cell << ',' << p.step << ',' << format_double(p.theta) << ','
               << format_double(p.type2) << ',' << p.trials << '\n';
  }
  std::ostringstream sweep_csv;
  sweep_csv << "schema=1\n";
  sweep_csv << "cell,d,n,k,statistic,family,tau_calibrated,boundary,bracket_lo,bracket_hi,"
               "theta_star,ratio_to_theta_star,ratio_to_sqrt_k_theta_star,monotone_warning,"
               "undetectable\n";
  json cells_json = json::array();
  for (const SweepCell& c : result.cells) {
    sweep_csv << c.cell << ',' << c.d << ',' << c.n << ',' << c.k << ',' << c.statistic << ','
              << c.family << ',' << format_double(c.tau_calibrated) << ','
              << format_double(c.boundary) << ',' << format_double(c.bracket_lo) << ','
              << format_double(c.bracket_hi) << ',' << format_double(c.theta_star) << ','
              << format_double(c.ratio_to_theta_star) << ','
              << format_double(c.ratio_to_sqrt_k_theta_star) << ','
              << bool_field(c.monotone_warning) << ',' << bool_field(c.undetectable) << '\n';
    cells_json.push_back(json{{"cell", c.cell},
                              {"d", c.d},
                              {"n", c.n},
                              {"k", c.k},
                              {"statistic", c.statistic},
                              {"family", c.family},
                              {"tau_calibrated", c.tau_calibrated},
                              {"boundary", c.boundary},
                              {"bracket_lo", c.bracket_lo},
                              {"bracket_hi", c.bracket_hi},
                              {"theta_star", c.theta_star},
                              {"ratio_to_theta_star", c.ratio_to_theta_star},
                              {"ratio_to_sqrt_k_theta_star", c.ratio_to_sqrt_k_theta_star},
                              {"monotone_warning", c.monotone_warning},
                              {"undetectable", c.undetectable}});
  }
  json summary = {{"schema", 1},
                  {"config", config_to_json(cfg)},
                  {"cells", cells_json},
                  {"probe_count", result.probes.size()}};
  emit(cfg, {{"probes.csv", probes_csv.str()}, {"sweep.csv", sweep_csv.str()}}, summary);
  return result;
}

ReductionDemoResult run_reduction_demo(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Cell> cells;
  int index = 0;
  for (const std::string& statistic : cfg.grid.statistic)
    for (const int d : cfg.grid.d)
      for (const int n : cfg.grid.n)
        for (const int k : cfg.grid.k) {
          Cell c;
          c.index = index++;
          c.d = d;
          c.n = n;
          c.k = k;
          c.statistic = statistic;
          c.family = "bottom_left";
          c.threshold_mode = "theoretical";
          cells.push_back(std::move(c));
        }

  const bool relaxed = cfg.reduction.relaxed_delta > 0.0;
  const double selection_delta = relaxed ? cfg.reduction.relaxed_delta : cfg.delta;
  const RngStream root = RngStream(cfg.seed).child("reduction-demo");

  ReductionDemoResult result;
  result.cells.resize(cells.size());
  std::vector<std::vector<TrialRecord>> per_cell(cells.size());

  for (const Cell& cell : cells) {
    ReductionCell& rc = result.cells[static_cast<std::size_t>(cell.index)];
    rc.cell = cell.index;
    rc.d = cell.d;
    rc.n = cell.n;
    rc.k = cell.k;
    rc.statistic = cell.statistic;
    rc.trials = cfg.trials;

    ReductionParams params;
    try {
      params = select_clique_params(cell.d, cell.n, cell.k, cfg.reduction.alpha,
                                    cfg.reduction.mu, cfg.reduction.gamma, selection_delta,
                                    relaxed);
    } catch (const std::runtime_error& e) {
      rc.skipped = true;
      rc.skip_reason = sanitize(e.what());
      continue;
    }
    const ParamTranscript t = validate_reduction_params(params);
    rc.m = params.m;
    rc.kappa = params.kappa;
    rc.branch_constant = params.branch_constant;
    rc.large_k_branch = params.large_k_branch;
    rc.theta_bar = t.theta_bar;
    rc.branch_lower_bound = t.branch_lower_bound;
    rc.realized_rate_constant = t.realized_rate_constant;
    rc.cond_a = t.cond_a;
    rc.cond_b = t.cond_b;
    rc.cond_c = t.cond_c;
    rc.sandwich_lower = t.sandwich_lower;
    rc.sandwich_upper = t.sandwich_upper;
    rc.theta_bound = t.theta_bound;
    rc.regime_r0 = t.regime_r0;
    rc.regime_extra = t.regime_extra;
    result.any_feasible = true;

    const StatisticKind kind = statistic_kind_from_string(cell.statistic);
    std::vector<TrialRecord>& records = per_cell[static_cast<std::size_t>(cell.index)];
    records.resize(static_cast<std::size_t>(2 * cfg.trials));
    parallel_for(2 * cfg.trials, cfg.threads, [&](int task) {
      const int trial = task / 2;
      const bool planted = (task % 2) == 1;
      RngStream stream = root.child(static_cast<std::uint64_t>(cell.index))
                             .child(static_cast<std::uint64_t>(trial))
                             .child(planted ? "H1" : "H0");
      const TestOutcome outcome = reduction_pipeline(params, cfg.delta, planted, kind, stream);
      TrialRecord& rec = records[static_cast<std::size_t>(task)];
      rec.cell = cell.index;
      rec.trial = trial;
      rec.hypothesis = planted ? "H1" : "H0";
      rec.stream_key = stream.key();
      rec.statistic = outcome.statistic;
      rec.threshold = outcome.threshold;
      rec.reject = outcome.reject;
      rec.iterations = outcome.iterations;
      rec.gap = outcome.precision;
    });

    std::vector<double> null_values;
    std::vector<double> planted_values;
    for (const TrialRecord& rec : records) {
      (rec.hypothesis == "H1" ? planted_values : null_values).push_back(rec.statistic);
    }
    auto mean_sd = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (const double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (const double x : v) var += (x - mean) * (x - mean);
      var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
      return std::pair<double, double>(mean, std::sqrt(var));
    };
    std::tie(rc.null_mean, rc.null_sd) = mean_sd(null_values);
    std::tie(rc.planted_mean, rc.planted_sd) = mean_sd(planted_values);
    const RankSumResult rs = rank_sum_greater(null_values, planted_values);
    rc.rank_sum_z = rs.z;
    rc.rank_sum_p = rs.p_value;
  }

  for (const std::vector<TrialRecord>& records : per_cell) {
    result.trials.insert(result.trials.end(), records.begin(), records.end());
  }

  std::ostringstream cells_csv;
  cells_csv << "schema=1\n";
  cells_csv << "cell,d,n,k,statistic,skipped,skip_reason,m,kappa,branch_constant,large_k_branch,"
               "theta_bar,branch_lower_bound,realized_rate_constant,cond_a,cond_b,cond_c,"
               "sandwich_lower,sandwich_upper,theta_bound,regime_r0,regime_extra,trials,"
               "null_mean,null_sd,planted_mean,planted_sd,rank_sum_z,rank_sum_p\n";
  json cells_json = json::array();
  for (const ReductionCell& c : result.cells) {
    cells_csv << c.cell << ',' << c.d << ',' << c.n << ',' << c.k << ',' << c.statistic << ','
              << bool_field(c.skipped) << ',' << sanitize(c.skip_reason) << ',' << c.m << ','
              << c.kappa << ',' << c.branch_constant << ',' << bool_field(c.large_k_branch) << ','
              << format_double(c.theta_bar) << ',' << format_double(c.branch_lower_bound) << ','
              << format_double(c.realized_rate_constant) << ',' << bool_field(c.cond_a) << ','
              << bool_field(c.cond_b) << ',' << bool_field(c.cond_c) << ','
              << bool_field(c.sandwich_lower) << ',' << bool_field(c.sandwich_upper) << ','
              << bool_field(c.theta_bound) << ',' << bool_field(c.regime_r0) << ','
              << bool_field(c.regime_extra) << ',' << c.trials << ','
              << format_double(c.null_mean) << ',' << format_double(c.null_sd) << ','
              << format_double(c.planted_mean) << ',' << format_double(c.planted_sd) << ','
              << format_double(c.rank_sum_z) << ',' << format_double(c.rank_sum_p) << '\n';
    cells_json.push_back(json{{"cell", c.cell},
                              {"d", c.d},
                              {"n", c.n},
                              {"k", c.k},
                              {"statistic", c.statistic},
                              {"skipped", c.skipped},
                              {"skip_reason", c.skip_reason},
                              {"m", c.m},
                              {"kappa", c.kappa},
                              {"branch_constant", c.branch_constant},
                              {"large_k_branch", c.large_k_branch},
                              {"theta_bar", c.theta_bar},
                              {"branch_lower_bound", c.branch_lower_bound},
                              {"realized_rate_constant", c.realized_rate_constant},
                              {"cond_a", c.cond_a},
                              {"cond_b", c.cond_b},
                              {"cond_c", c.cond_c},
                              {"sandwich_lower", c.sandwich_lower},
                              {"sandwich_upper", c.sandwich_upper},
                              {"theta_bound", c.theta_bound},
                              {"regime_r0", c.regime_r0},
                              {"regime_extra", c.regime_extra},
                              {"trials", c.trials},
                              {"null_mean", c.null_mean},
                              {"null_sd", c.null_sd},
                              {"planted_mean", c.planted_mean},
                              {"planted_sd", c.planted_sd},
                              {"rank_sum_z", c.rank_sum_z},
                              {"rank_sum_p", c.rank_sum_p}});
  }

  json summary = {{"schema", 1},
                  {"config", config_to_json(cfg)},
                  {"cells", cells_json},
                  {"any_feasible", result.any_feasible},
                  {"trial_count", result.trials.size()}};
  emit(cfg,
       {{"trials.csv", trials_csv(result.trials, cells)}, {"cells.csv", cells_csv.str()}},
       summary);
  return result;
}

}  // namespace sparsepc

// stablegen: simulate and verify the genealogy of stationary stable
// branching populations with immigration. One binary, subcommand style; all
// randomness flows from --seed through per-replica stream derivation.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stablegen/acceptance.hpp"
#include "stablegen/analytics.hpp"
#include "stablegen/coalescent.hpp"
#include "stablegen/errors.hpp"
#include "stablegen/io.hpp"
#include "stablegen/mechanism.hpp"
#include "stablegen/random.hpp"
#include "stablegen/rates.hpp"
#include "stablegen/simulate.hpp"
#include "stablegen/stats.hpp"
#include "stablegen/version.hpp"

namespace {

using nlohmann::json;
using namespace stablegen;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;
constexpr int kExitNumeric = 4;

// Nested JSON objects become dotted config paths, so
// {"simulate": {"gwi": {"horizon": 3}}} configures `simulate gwi --horizon`.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    flatten({}, j, items);
    return items;
  }

 private:
  static std::string scalar(const json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
  }

  static void flatten(std::vector<std::string> parents, const json& j,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        flatten(deeper, value, items);
      } else {
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (value.is_array()) {
          for (const auto& element : value) {
            item.inputs.push_back(scalar(element));
          }
        } else {
          item.inputs.push_back(scalar(value));
        }
        items.push_back(std::move(item));
      }
    }
  }
};

int default_threads() {
  if (const char* env = std::getenv("STABLEGEN_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) {
      return value;
    }
  }
  return 1;
}

struct CommonOpts {
  double alpha = 1.0;
  double gamma = 1.0;
  double b = 2.0;
  bool critical = false;
  std::uint64_t seed = 1;
  std::int64_t replicas = 1;
  int threads = default_threads();
  std::string format = "json";
  std::string output;
  std::int64_t state_cap = 10'000'000;

  StableMechanism mechanism() const {
    return critical ? StableMechanism::critical(gamma, b)
                    : StableMechanism::sub_critical(alpha, gamma, b);
  }
};

void add_mechanism_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--alpha", opts.alpha, "sub-criticality rate alpha")->capture_default_str();
  cmd->add_option("--gamma", opts.gamma, "stable coefficient gamma")->capture_default_str();
  cmd->add_option("--b", opts.b, "stable index b in (1, 2]")->capture_default_str();
  cmd->add_flag("--critical", opts.critical, "critical regime (alpha = 0)");
}

void add_run_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "master seed; replica i uses stream i")
      ->capture_default_str();
  cmd->add_option("--replicas", opts.replicas, "number of replicas")->capture_default_str();
  cmd->add_option("--threads", opts.threads,
                  "worker threads (default from STABLEGEN_THREADS); results do not depend on it")
      ->capture_default_str();
  cmd->add_option("--format", opts.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", opts.output, "output path (default stdout)");
  cmd->add_option("--state-cap", opts.state_cap, "truncate paths above this state")
      ->capture_default_str();
}

std::string command_line(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) {
      line += ' ';
    }
    line += argv[i];
  }
  return line;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << text;
}

std::string json_lines(const json& meta, const std::vector<json>& records) {
  std::string out = json{{"meta", meta}}.dump();
  out += '\n';
  for (const json& record : records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  // "start:stop:step" or comma list "0.5,1,2"
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0) {
      throw std::invalid_argument("grid must be start:stop:step with step > 0");
    }
    for (double x = start; x <= stop + 1e-12 * step; x += step) {
      values.push_back(x);
    }
    return values;
  }
  std::stringstream stream(spec);
  std::string token;
  while (std::getline(stream, token, ',')) {
    values.push_back(std::stod(token));
  }
  if (values.empty()) {
    throw std::invalid_argument("empty grid");
  }
  return values;
}

// Deterministic replica fan-out: replica i always draws from stream i, and
// per-replica results land in replica-indexed slots before merging.
void run_replicas(std::int64_t replicas, int threads,
                  const std::function<void(std::int64_t first, std::int64_t last)>& block) {
  if (threads <= 1 || replicas < 256) {
    block(0, replicas);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, replicas));
  std::vector<std::thread> pool;
  const std::int64_t chunk = (replicas + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t first = w * chunk;
    const std::int64_t last = std::min(replicas, first + chunk);
    if (first < last) {
      pool.emplace_back([&block, first, last] { block(first, last); });
    }
  }
  for (auto& worker : pool) {
    worker.join();
  }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  CommonOpts common;
  double horizon = 1.0;
  double t_min = -1.0;
  double t_start = -5.0;
  double t_end = -0.5;
  double big_t = 1.0;
  std::int64_t max_jumps = 1 << 22;
  double marginal_time = 0.0;
  bool has_marginal = false;
};

int run_simulate(const std::string& kind, const SimulateOpts& opts, const std::string& cmdline) {
  const StableMechanism mech = opts.common.mechanism();
  SimulateOptions sim_opts;
  sim_opts.state_cap = opts.common.state_cap;
  sim_opts.max_jumps = opts.max_jumps;
  auto make_path = [&](Simulator& sim, Rng& rng) -> JumpPath {
    if (kind == "gwi") {
      return sim.gwi(opts.horizon, rng);
    }
    if (kind == "ancestral") {
      return sim.ancestral(opts.t_min, rng);
    }
    if (kind == "ancestral-direct") {
      return sim.ancestral_direct(opts.t_start, opts.t_end, opts.max_jumps, rng);
    }
    return sim.gwi_critical(opts.big_t, opts.horizon, rng);
  };
  const json meta = metadata_json(mech, opts.common.seed, cmdline);
  if (opts.has_marginal) {
    const int workers = std::max(opts.common.threads, 1);
    std::vector<EmpiricalDistribution> parts(static_cast<std::size_t>(workers));
    const std::int64_t chunk = std::max<std::int64_t>(
        (opts.common.replicas + workers - 1) / workers, 1);
    run_replicas(opts.common.replicas, workers, [&](std::int64_t first, std::int64_t last) {
      Simulator sim(mech, sim_opts);
      EmpiricalDistribution& local = parts[static_cast<std::size_t>(first / chunk)];
      for (std::int64_t i = first; i < last; ++i) {
        Rng rng(opts.common.seed, static_cast<std::uint64_t>(i));
        local.add(make_path(sim, rng).state_at(opts.marginal_time));
      }
    });
    EmpiricalDistribution merged;
    for (const auto& part : parts) {
      merged.merge(part);
    }
    if (opts.common.format == "csv") {
      std::string out = metadata_csv_header(mech, opts.common.seed, cmdline);
      out += "state,count\n";
      for (const auto& [state, count] : merged.counts) {
        out += std::to_string(state) + "," + std::to_string(count) + "\n";
      }
      write_text(opts.common.output, out);
    } else {
      json body{{"meta", meta},
                {"marginalTime", opts.marginal_time},
                {"marginal", empirical_to_json(merged)}};
      write_text(opts.common.output, body.dump(2) + "\n");
    }
    return kExitOk;
  }
  std::vector<JumpPath> paths(static_cast<std::size_t>(opts.common.replicas));
  run_replicas(opts.common.replicas, opts.common.threads,
               [&](std::int64_t first, std::int64_t last) {
                 Simulator sim(mech, sim_opts);
                 for (std::int64_t i = first; i < last; ++i) {
                   Rng rng(opts.common.seed, static_cast<std::uint64_t>(i));
                   paths[static_cast<std::size_t>(i)] = make_path(sim, rng);
                 }
               });
  if (opts.common.format == "csv") {
    std::string out = metadata_csv_header(mech, opts.common.seed, cmdline);
    out += "replica,time,state\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t j = 0; j < paths[i].times.size(); ++j) {
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%zu,%.17g,%lld\n", i, paths[i].times[j],
                      static_cast<long long>(paths[i].states[j]));
        out += buffer;
      }
    }
    write_text(opts.common.output, out);
  } else {
    std::vector<json> records;
    records.reserve(paths.size());
    for (const JumpPath& path : paths) {
      records.push_back(path_to_json(path));
    }
    write_text(opts.common.output, json_lines(meta, records));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rates

struct RatesOpts {
  CommonOpts common;
  bool birth = false;
  bool death = false;
  bool bs_limit = false;
  bool critical_birth = false;
  std::int64_t n = 0;
  std::int64_t m = 1;
  double t = 1.0;
  bool table = false;
  std::int64_t n_max = 6;
  std::string times = "0.5,1,2";
};

int run_rates(const RatesOpts& opts, const std::string& cmdline) {
  const StableMechanism mech = opts.common.mechanism();
  if (opts.table) {
    const std::vector<double> times = parse_grid(opts.times);
    std::string out = metadata_csv_header(mech, opts.common.seed, cmdline);
    out += "n,m,t,q_birth,q_death\n";
    for (std::int64_t n = 0; n <= opts.n_max; ++n) {
      for (std::int64_t m = 0; m <= opts.n_max; ++m) {
        if (m == n) {
          continue;
        }
        for (double t : times) {
          char buffer[64];
          std::string birth_s, death_s;
          if (m > n) {
            const double q = mech.sub_critical_regime()
                                 ? birth_rate(mech, RateQuery{n, m, t})
                                 : critical_birth_rate(mech, RateQuery{n, m, t});
            std::snprintf(buffer, sizeof(buffer), "%.12g", q);
            birth_s = buffer;
          } else if (mech.sub_critical_regime()) {
            std::snprintf(buffer, sizeof(buffer), "%.12g",
                          death_rate(mech, RateQuery{n, m, t}));
            death_s = buffer;
          }
          char row[160];
          std::snprintf(row, sizeof(row), "%lld,%lld,%.12g,%s,%s\n", static_cast<long long>(n),
                        static_cast<long long>(m), t, birth_s.c_str(), death_s.c_str());
          out += row;
        }
      }
    }
    write_text(opts.common.output, out);
    return kExitOk;
  }
  double value = 0.0;
  std::string what;
  const RateQuery query{opts.n, opts.m, opts.t};
  if (opts.death) {
    value = death_rate(mech, query);
    what = "death";
  } else if (opts.bs_limit) {
    value = bs_limit_rate(opts.n, opts.m, opts.t, opts.common.gamma);
    what = "bs-limit";
  } else if (opts.critical_birth) {
    value = critical_birth_rate(mech, query);
    what = "critical-birth";
  } else if (opts.birth) {
    value = mech.sub_critical_regime() ? birth_rate(mech, query)
                                       : critical_birth_rate(mech, query);
    what = "birth";
  } else {
    throw std::invalid_argument(
        "rates: pick one of --birth/--death/--bs-limit/--critical-birth or --table");
  }
  if (opts.common.output.empty() && opts.common.format == "csv") {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g\n", value);
    write_text("", buffer);
  } else {
    json body{{"meta", metadata_json(mech, opts.common.seed, cmdline)},
              {"rate", what},
              {"n", opts.n},
              {"m", opts.m},
              {"t", opts.t},
              {"value", value}};
    write_text(opts.common.output, body.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// moments / density / families / coalescent / verify

int run_moments(CommonOpts& common, double eta, int n_max, const std::string& cmdline) {
  std::vector<double> moments;
  StableMechanism mech = common.mechanism();
  if (eta > 0.0) {
    moments = size_biased_moments(eta, n_max);
    mech = StableMechanism::sub_critical(common.alpha, common.gamma, 1.0 + eta);
  } else {
    moments = moment_table_V(mech, n_max);
    eta = mech.eta();
  }
  json body{{"meta", metadata_json(mech, common.seed, cmdline)},
            {"eta", eta},
            {"moments", moments}};
  write_text(common.output, body.dump(2) + "\n");
  return kExitOk;
}

int run_density(CommonOpts& common, const std::string& which, const std::string& grid,
                int samples, double quad_tol, const std::string& cmdline) {
  const StableMechanism mech = common.mechanism();
  const std::vector<double> xs = parse_grid(grid);
  QuadratureConfig cfg;
  cfg.abs_tol = quad_tol;
  cfg.rel_tol = quad_tol;
  std::string out = metadata_csv_header(mech, common.seed, cmdline);
  out += "x,value,errorBound\n";
  Rng rng(common.seed, 0);
  for (double x : xs) {
    double value = 0.0, bound = 0.0;
    if (which == "linnik") {
      const IntegralEstimate est = linnik_density_estimate(mech.eta(), mech.b, x, cfg);
      value = est.value;
      bound = est.error_bound;
    } else if (which == "linnik-alt") {
      const IntegralEstimate est = linnik_density_alt_estimate(mech.eta(), x, cfg);
      value = est.value;
      bound = est.error_bound;
    } else {  // g
      const McEstimate est = intensity_g(mech, x, samples, rng);
      value = est.estimate;
      bound = est.std_error;  // one Monte Carlo standard error
    }
    char row[128];
    std::snprintf(row, sizeof(row), "%.12g,%.12g,%.3g\n", x, value, bound);
    out += row;
  }
  write_text(common.output, out);
  return kExitOk;
}

int run_families(CommonOpts& common, int count, double big_t, const std::string& cmdline) {
  const StableMechanism mech = common.mechanism();
  std::vector<json> records(static_cast<std::size_t>(common.replicas));
  run_replicas(common.replicas, common.threads, [&](std::int64_t first, std::int64_t last) {
    for (std::int64_t i = first; i < last; ++i) {
      Rng rng(common.seed, static_cast<std::uint64_t>(i));
      const FamilyDecomposition families =
          mech.sub_critical_regime()
              ? sample_family_decomposition(mech, count, rng)
              : sample_family_decomposition_critical(mech, big_t, count, rng);
      records[static_cast<std::size_t>(i)] = families_to_json(families);
    }
  });
  write_text(common.output, json_lines(metadata_json(mech, common.seed, cmdline), records));
  return kExitOk;
}

struct CoalescentOpts {
  CommonOpts common;
  int n = 5;
  double big_t = 1.0;
  bool bs_report = false;
  std::string bs_list = "1.1,1.01,1.001";
  std::string t_grid = "0,1,2,3";
  bool pd = false;
};

int run_coalescent(const CoalescentOpts& opts, const std::string& cmdline) {
  const StableMechanism mech = opts.common.mechanism();
  const json meta = metadata_json(mech, opts.common.seed, cmdline);
  if (opts.bs_report) {
    const BsConvergenceReport report =
        bs_convergence_report(parse_grid(opts.bs_list), opts.common.alpha, opts.common.gamma,
                              opts.n, opts.big_t, parse_grid(opts.t_grid));
    json rows = json::array();
    for (const BsReportRow& row : report.rows) {
      rows.push_back({{"b", row.b},
                      {"k", row.k},
                      {"m", row.m},
                      {"t", row.t},
                      {"scaledRate", row.scaled_rate},
                      {"limitRate", row.limit_rate},
                      {"relError", row.rel_error}});
    }
    json body{{"meta", meta}, {"maxRelError", report.max_rel_error}, {"rows", rows}};
    write_text(opts.common.output, body.dump(2) + "\n");
    return kExitOk;
  }
  if (opts.pd) {
    Rng rng(opts.common.seed, 0);
    const PdTestReport report = pd_tests(mech, static_cast<int>(opts.common.replicas), rng, 0.01);
    json entries = json::array();
    for (const PdTestEntry& entry : report.entries) {
      entries.push_back({{"test", entry.name},
                         {"statistic", entry.statistic},
                         {"pValue", entry.p_value},
                         {"pass", entry.pass},
                         {"informational", entry.informational}});
    }
    json body{{"meta", meta},
              {"replicas", report.replicas},
              {"allPass", report.all_pass},
              {"entries", entries}};
    write_text(opts.common.output, body.dump(2) + "\n");
    return report.all_pass ? kExitOk : kExitVerification;
  }
  std::vector<json> records(static_cast<std::size_t>(opts.common.replicas));
  run_replicas(opts.common.replicas, opts.common.threads,
               [&](std::int64_t first, std::int64_t last) {
                 for (std::int64_t i = first; i < last; ++i) {
                   Rng rng(opts.common.seed, static_cast<std::uint64_t>(i));
                   records[static_cast<std::size_t>(i)] =
                       coalescent_to_json(simulate_coalescent(mech, opts.n, opts.big_t, rng));
                 }
               });
  write_text(opts.common.output, json_lines(meta, records));
  return kExitOk;
}

int run_verify(const std::string& suite, bool strict, int threads, const std::string& output,
               const std::string& cmdline) {
  AcceptanceOptions opts;
  opts.fast = suite == "fast";
  opts.fresh_seeds = strict;
  opts.threads = threads;
  const std::vector<CriterionResult> results = run_acceptance(opts);
  bool all_pass = true;
  json entries = json::array();
  for (const CriterionResult& result : results) {
    all_pass = all_pass && result.passed;
    std::printf("[%s] %-4s %-58s (%6.1fs) %s\n", result.passed ? "PASS" : "FAIL",
                result.id.c_str(), result.name.c_str(), result.seconds, result.detail.c_str());
    std::fflush(stdout);
    entries.push_back({{"id", result.id},
                       {"name", result.name},
                       {"pass", result.passed},
                       {"detail", result.detail},
                       {"seconds", result.seconds}});
  }
  std::printf("suite %s: %zu criteria, %s\n", suite.c_str(), results.size(),
              all_pass ? "all passed" : "FAILURES present");
  if (!output.empty()) {
    json body{{"toolVersion", kVersion},
              {"suite", suite},
              {"commandLine", cmdline},
              {"allPass", all_pass},
              {"criteria", entries}};
    write_text(output, body.dump(2) + "\n");
  }
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genealogy toolkit for stationary stable branching processes with immigration"};
  app.set_version_flag("--version", kVersion);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; explicit flags win");
  app.require_subcommand(1);
  app.fallthrough(true);  // lets --config appear after the subcommand

  const std::string cmdline = command_line(argc, argv);

  // simulate
  SimulateOpts sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "draw jump paths or marginals");
  simulate_cmd->require_subcommand(1);
  simulate_cmd->fallthrough(true);
  std::string sim_kind;
  for (const char* kind : {"gwi", "ancestral", "ancestral-direct", "critical"}) {
    auto* sub =
        simulate_cmd->add_subcommand(kind, std::string("simulate the ") + kind + " process");
    add_mechanism_options(sub, sim.common);
    add_run_options(sub, sim.common);
    sub->add_option("--max-jumps", sim.max_jumps, "per-path jump budget")->capture_default_str();
    auto* marginal = sub->add_option(
        "--marginal", sim.marginal_time,
        "emit only the state at this time, as counts across replicas");
    const bool is_critical_kind = std::string(kind) == "critical";
    sub->callback([&sim_kind, kind, marginal, &sim, is_critical_kind] {
      sim_kind = kind;
      sim.has_marginal = marginal->count() > 0;
      if (is_critical_kind) {
        sim.common.critical = true;
      }
    });
    if (std::string(kind) == "gwi") {
      sub->add_option("--horizon", sim.horizon, "GWI time horizon")->capture_default_str();
    } else if (std::string(kind) == "ancestral") {
      sub->add_option("--tmin", sim.t_min, "calendar horizon (negative)")->capture_default_str();
    } else if (std::string(kind) == "ancestral-direct") {
      sub->add_option("--tstart", sim.t_start, "conditioning time (state 0 here)")
          ->capture_default_str();
      sub->add_option("--tend", sim.t_end, "calendar end time (negative)")->capture_default_str();
    } else {
      sub->add_option("--T", sim.big_t, "only families arriving after -T")->capture_default_str();
      sub->add_option("--horizon", sim.horizon, "GWI time horizon")->capture_default_str();
    }
  }

  // rates
  RatesOpts rates;
  auto* rates_cmd = app.add_subcommand("rates", "evaluate ancestral transition rates");
  add_mechanism_options(rates_cmd, rates.common);
  rates_cmd->add_option("--seed", rates.common.seed)->capture_default_str();
  rates_cmd->add_option("--format", rates.common.format)->check(CLI::IsMember({"json", "csv"}));
  rates_cmd->add_option("--output,-o", rates.common.output);
  rates_cmd->add_flag("--birth", rates.birth, "forward birth rate");
  rates_cmd->add_flag("--death", rates.death, "backward death rate");
  rates_cmd->add_flag("--bs-limit", rates.bs_limit, "Bolthausen-Sznitman limit rate");
  rates_cmd->add_flag("--critical-birth", rates.critical_birth, "critical-case birth rate");
  rates_cmd->add_option("--n", rates.n, "current state")->capture_default_str();
  rates_cmd->add_option("--m", rates.m, "target state")->capture_default_str();
  rates_cmd->add_option("--t", rates.t, "time distance from level 0")->capture_default_str();
  rates_cmd->add_flag("--table", rates.table, "emit a CSV table over states and times");
  rates_cmd->add_option("--n-max", rates.n_max, "largest state in --table mode")
      ->capture_default_str();
  rates_cmd->add_option("--times", rates.times, "time grid for --table")->capture_default_str();

  // moments
  CommonOpts moments_common;
  double moments_eta = 0.0;
  int moments_nmax = 3;
  auto* moments_cmd = app.add_subcommand("moments", "size-biased moment recursion E[V^n]");
  add_mechanism_options(moments_cmd, moments_common);
  moments_cmd->add_option("--eta", moments_eta, "set eta = b-1 directly (overrides --b)");
  moments_cmd->add_option("--nmax", moments_nmax, "highest moment")->capture_default_str();
  moments_cmd->add_option("--output,-o", moments_common.output);
  moments_cmd->add_option("--seed", moments_common.seed)->capture_default_str();

  // density
  CommonOpts density_common;
  std::string density_which = "linnik";
  std::string density_grid = "0.1:5:0.1";
  int density_samples = 100000;
  double density_tol = 1e-8;
  auto* density_cmd = app.add_subcommand("density", "evaluate densities on a grid (CSV)");
  add_mechanism_options(density_cmd, density_common);
  density_cmd->add_option("--which", density_which, "linnik | linnik-alt | g")
      ->check(CLI::IsMember({"linnik", "linnik-alt", "g"}));
  density_cmd->add_option("--grid", density_grid, "start:stop:step or comma list")
      ->capture_default_str();
  density_cmd->add_option("--samples", density_samples, "Monte Carlo draws for --which g")
      ->capture_default_str();
  density_cmd->add_option("--quad-tol", density_tol, "quadrature tolerance")
      ->capture_default_str();
  density_cmd->add_option("--seed", density_common.seed)->capture_default_str();
  density_cmd->add_option("--output,-o", density_common.output);

  // families
  CommonOpts families_common;
  int families_count = 128;
  double families_T = 1.0;
  auto* families_cmd =
      app.add_subcommand("families", "sample family decompositions (JSON lines)");
  add_mechanism_options(families_cmd, families_common);
  add_run_options(families_cmd, families_common);
  families_cmd->add_option("--count", families_count, "family truncation count")
      ->capture_default_str();
  families_cmd->add_option("--T", families_T, "window for the critical regime")
      ->capture_default_str();

  // coalescent
  CoalescentOpts coalescent;
  auto* coalescent_cmd = app.add_subcommand("coalescent", "partition-valued genealogy");
  add_mechanism_options(coalescent_cmd, coalescent.common);
  add_run_options(coalescent_cmd, coalescent.common);
  coalescent_cmd->add_option("--n", coalescent.n, "number of sampled lineages")
      ->capture_default_str();
  coalescent_cmd->add_option("--T", coalescent.big_t, "sampling level -T")->capture_default_str();
  coalescent_cmd->add_flag("--bs-report", coalescent.bs_report,
                           "emit the b->1 rate-convergence report");
  coalescent_cmd->add_option("--bs", coalescent.bs_list, "stable indices for --bs-report")
      ->capture_default_str();
  coalescent_cmd->add_option("--t-grid", coalescent.t_grid, "rescaled time grid for --bs-report")
      ->capture_default_str();
  coalescent_cmd->add_flag("--pd-tests", coalescent.pd,
                           "run the Poisson-Dirichlet / moment structure tests");

  // verify
  std::string verify_suite = "all";
  bool verify_strict = false;
  int verify_threads = default_threads();
  std::string verify_output;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks with pinned seeds");
  verify_cmd->add_option("--suite", verify_suite, "all | fast")
      ->check(CLI::IsMember({"all", "fast"}))
      ->capture_default_str();
  verify_cmd->add_flag("--strict", verify_strict, "rerun with fresh seeds");
  verify_cmd->add_option("--threads", verify_threads)->capture_default_str();
  verify_cmd->add_option("--output,-o", verify_output, "also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) {
      return run_simulate(sim_kind, sim, cmdline);
    }
    if (rates_cmd->parsed()) {
      return run_rates(rates, cmdline);
    }
    if (moments_cmd->parsed()) {
      return run_moments(moments_common, moments_eta, moments_nmax, cmdline);
    }
    if (density_cmd->parsed()) {
      return run_density(density_common, density_which, density_grid, density_samples,
                         density_tol, cmdline);
    }
    if (families_cmd->parsed()) {
      return run_families(families_common, families_count, families_T, cmdline);
    }
    if (coalescent_cmd->parsed()) {
      return run_coalescent(coalescent, cmdline);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_suite, verify_strict, verify_threads, verify_output, cmdline);
    }
  } catch (const QuadratureError& e) {
    std::fprintf(stderr, "numeric failure: %s (estimate %.12g, bound %.3g)\n", e.what(),
                 e.estimate, e.error_bound);
    return kExitNumeric;
  } catch (const EvaluationError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}

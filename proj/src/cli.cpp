#include "tether_dobc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>

#include "tether_dobc/config.hpp"
#include "tether_dobc/errors.hpp"
#include "tether_dobc/metrics.hpp"
#include "tether_dobc/simengine.hpp"

namespace tether_dobc {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string estimators = "rdo,dob,eso";
  int runs = 9;
  bool force = false;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<EstimatorKind> parse_estimator_list(const std::string& list) {
  std::vector<std::string> names;
  boost::algorithm::split(names, list, boost::is_any_of(","));
  std::vector<EstimatorKind> kinds;
  for (std::string& n : names) {
    boost::algorithm::trim(n);
    if (!n.empty()) kinds.push_back(parse_estimator_kind(n));
  }
  if (kinds.empty()) throw ConfigError("--estimators: empty estimator list");
  return kinds;
}

ScenarioConfig load(const Options& opt) {
  ScenarioConfig cfg = load_config(opt.config, opt.overrides);
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

/// Creates the output directory and refuses to clobber existing files unless
/// forced.
void prepare_outputs(const Options& opt, const std::vector<std::string>& files) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  if (opt.force) return;
  for (const std::string& f : files) {
    if (fs::exists(dir / f))
      throw OutputError((dir / f).string() + " exists; pass --force to overwrite");
  }
}

std::ofstream open_out(const Options& opt, const std::string& name) {
  std::ofstream os(fs::path(opt.out) / name);
  if (!os) throw OutputError("cannot write " + (fs::path(opt.out) / name).string());
  return os;
}

void write_metrics_text(const std::string& name, const RunMetrics& m, const RunLog& log,
                        std::ostream& os) {
  const NamedRun row{name, m};
  write_comparison_table(std::span<const NamedRun>(&row, 1), os);
  if (log.release_time) os << "mechanism released at t = " << *log.release_time << " s\n";
}

int cmd_run(const Options& opt, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  prepare_outputs(opt, {"run.csv", "metrics.txt"});
  const RunLog log = run(cfg);
  const RunMetrics m = compute_metrics(log);
  {
    std::ofstream csv = open_out(opt, "run.csv");
    write_csv(log, csv);
  }
  std::ofstream txt = open_out(opt, "metrics.txt");
  const std::string name(to_string(cfg.estimator.kind));
  write_metrics_text(name, m, log, txt);
  write_metrics_text(name, m, log, out);
  return kExitOk;
}

int cmd_compare(const Options& opt, std::ostream& out) {
  const ScenarioConfig base = load(opt);
  const std::vector<EstimatorKind> kinds = parse_estimator_list(opt.estimators);
  std::vector<std::string> files = {"compare.txt", "compare.csv"};
  for (EstimatorKind k : kinds) files.push_back(std::string(to_string(k)) + ".csv");
  prepare_outputs(opt, files);

  std::vector<std::future<RunLog>> jobs;
  for (EstimatorKind k : kinds) {
    ScenarioConfig cfg = base;
    cfg.estimator.kind = k;
    jobs.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
  }
  std::vector<NamedRun> rows;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const RunLog log = jobs[i].get();
    const std::string name(to_string(kinds[i]));
    std::ofstream csv = open_out(opt, name + ".csv");
    write_csv(log, csv);
    rows.push_back({name, compute_metrics(log)});
  }
  {
    std::ofstream txt = open_out(opt, "compare.txt");
    write_comparison_table(rows, txt);
  }
  std::ofstream csv = open_out(opt, "compare.csv");
  write_comparison_csv(rows, csv);
  write_comparison_table(rows, out);
  return kExitOk;
}

int cmd_batch(const Options& opt, std::ostream& out) {
  if (opt.runs < 2) throw ConfigError("--runs must be >= 2, got " + std::to_string(opt.runs));
  ScenarioConfig base = load(opt);
  base.noise.enabled = true;
  const std::vector<EstimatorKind> kinds = parse_estimator_list(opt.estimators);

  std::vector<std::string> files = {"batch.txt", "batch.csv"};
  for (EstimatorKind k : kinds)
    for (int i = 0; i < opt.runs; ++i)
      files.push_back(std::string(to_string(k)) + "_run" + std::to_string(i) + ".csv");
  prepare_outputs(opt, files);

  std::vector<NamedBatch> rows;
  for (EstimatorKind k : kinds) {
    std::vector<std::future<RunLog>> jobs;
    for (int i = 0; i < opt.runs; ++i) {
      ScenarioConfig cfg = base;
      cfg.estimator.kind = k;
      cfg.seed = base.seed + static_cast<std::uint64_t>(i);
      jobs.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
    }
    std::vector<RunLog> logs;
    for (auto& j : jobs) logs.push_back(j.get());
    const std::string name(to_string(k));
    for (int i = 0; i < opt.runs; ++i) {
      std::ofstream csv = open_out(opt, name + "_run" + std::to_string(i) + ".csv");
      write_csv(logs[static_cast<std::size_t>(i)], csv);
    }
    rows.push_back({name, batch_stats(std::span<const RunLog>(logs))});
  }
  {
    std::ofstream txt = open_out(opt, "batch.txt");
    write_batch_table(rows, txt);
  }
  std::ofstream csv = open_out(opt, "batch.csv");
  write_batch_csv(rows, csv);
  write_batch_table(rows, out);
  return kExitOk;
}

int cmd_check(const Options& opt, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  dump_config(cfg, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tethered quadrotor disturbance-observer simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario config file")->required();
    sub->add_option("--seed", opt.seed, "RNG seed (overrides scenario.seed)");
    sub->add_option("--set", opt.overrides, "Override a field: section.key=value")
        ->allow_extra_args(false);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_flag("--force", opt.force, "Overwrite existing output files");
  };

  CLI::App* run_app = app.add_subcommand("run", "Run one simulation");
  add_common(run_app);
  add_output(run_app);

  CLI::App* compare_app = app.add_subcommand("compare", "Run several estimators on one scenario");
  add_common(compare_app);
  add_output(compare_app);
  compare_app->add_option("--estimators", opt.estimators, "Comma-separated estimator list")
      ->capture_default_str();

  CLI::App* batch_app = app.add_subcommand("batch", "Repeat a noisy scenario N times per estimator");
  add_common(batch_app);
  add_output(batch_app);
  batch_app->add_option("--estimators", opt.estimators, "Comma-separated estimator list")
      ->capture_default_str();
  batch_app->add_option("--runs", opt.runs, "Runs per estimator")->capture_default_str();

  CLI::App* check_app = app.add_subcommand("check", "Validate a config and print it resolved");
  add_common(check_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run_app->parsed()) return cmd_run(opt, out);
    if (compare_app->parsed()) return cmd_compare(opt, out);
    if (batch_app->parsed()) return cmd_batch(opt, out);
    if (check_app->parsed()) return cmd_check(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const AllocationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace tether_dobc

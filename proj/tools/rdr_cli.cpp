// Command-line front end: tune, run, bench and hull subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rdr/errors.hpp"
#include "rdr/harness.hpp"
#include "rdr/tuning.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> tuning_samples;
  std::optional<std::size_t> var_f_samples;
  std::optional<double> budget_multiplier;
  std::optional<std::size_t> period;
  std::optional<int> threads;
  std::string out;
  std::string format;
  std::string model;
  std::string algorithm;
  std::vector<std::string> params;
  bool include_tuning_cost = false;
};

void add_run_options(CLI::App& app, Overrides& o, bool with_model) {
  app.add_option("--config", o.config_path, "JSON configuration file");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--reps", o.reps, "Replications");
  app.add_option("--threads", o.threads, "Worker threads (0: OpenMP default)");
  app.add_option("--out", o.out, "Output path ('-' for stdout)");
  app.add_option("--tuning-samples", o.tuning_samples, "Samples per C(i) estimate");
  app.add_option("--var-f-samples", o.var_f_samples, "Samples for var f(U)");
  app.add_option("--budget-multiplier", o.budget_multiplier, "Budget beyond the first full draw, in units of d");
  if (with_model) {
    app.add_option("--model", o.model, "Model name");
    app.add_option("--algorithm", o.algorithm, "rdr, ddr, mlmc, mc or longrun");
    app.add_option("--param", o.params, "Model parameter key=value (repeatable)");
    app.add_option("--period", o.period, "Long-run average period");
  }
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--include-tuning-cost", o.include_tuning_cost, "Add tuning cost to the Cost column");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw rdr::ConfigError("--config", "cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw rdr::ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
}

json parse_param_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

json override_json(const Overrides& o) {
  json j = json::object();
  if (o.seed) j["master_seed"] = *o.seed;
  if (o.reps) j["replications"] = *o.reps;
  if (o.threads) j["threads"] = *o.threads;
  if (o.tuning_samples) j["tuning_samples"] = *o.tuning_samples;
  if (o.var_f_samples) j["var_f_samples"] = *o.var_f_samples;
  if (o.budget_multiplier) j["budget_multiplier"] = *o.budget_multiplier;
  if (o.period) j["period"] = *o.period;
  if (!o.out.empty()) j["output"] = o.out;
  if (!o.format.empty()) j["format"] = o.format;
  if (!o.model.empty()) j["model"] = o.model;
  if (!o.algorithm.empty()) j["algorithm"] = o.algorithm;
  if (o.include_tuning_cost) j["include_tuning_cost"] = true;
  return j;
}

rdr::ExperimentConfig build_config(const json& file, const Overrides& o) {
  rdr::ExperimentConfig c = rdr::parse_config(file);
  c = rdr::parse_config(override_json(o), c);
  for (const std::string& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw rdr::ConfigError("--param", "expected key=value, got '" + kv + "'");
    }
    c.params[kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
  }
  return c;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) {
    throw rdr::ConfigError("output", "cannot write '" + path + "'");
  }
}

int cmd_tune(const Overrides& o) {
  const json file = o.config_path.empty() ? json::object() : read_json_file(o.config_path);
  const rdr::ExperimentConfig c = build_config(file, o);
  write_text(rdr::plan_to_json(rdr::tune_experiment(c)).dump(2) + "\n", c.output);
  return 0;
}

int cmd_run(const Overrides& o) {
  const json file = o.config_path.empty() ? json::object() : read_json_file(o.config_path);
  const rdr::ExperimentConfig c = build_config(file, o);
  rdr::emit_report({rdr::run_experiment(c)}, c.format, c.output);
  return 0;
}

// A bench file is {"defaults": {...}, "experiments": [{...}, ...]}; each
// experiment is applied on top of the defaults, then the command-line flags.
int cmd_bench(const Overrides& o) {
  if (o.config_path.empty()) {
    throw rdr::ConfigError("--config", "bench requires a configuration file");
  }
  const json file = read_json_file(o.config_path);
  if (!file.is_object() || !file.contains("experiments") || !file["experiments"].is_array()) {
    throw rdr::ConfigError("experiments", "bench configuration needs an 'experiments' array");
  }
  for (const auto& [key, value] : file.items()) {
    if (key != "defaults" && key != "experiments") {
      throw rdr::ConfigError(key, "unknown bench key");
    }
  }
  const rdr::ExperimentConfig defaults = rdr::parse_config(file.value("defaults", json::object()));
  std::vector<rdr::RunReport> reports;
  rdr::ExperimentConfig last = defaults;
  for (const json& e : file["experiments"]) {
    rdr::ExperimentConfig c = rdr::parse_config(e, defaults);
    c = rdr::parse_config(override_json(o), c);
    std::cerr << "bench: " << c.model << " " << rdr::to_string(c.algorithm) << "\n";
    reports.push_back(rdr::run_experiment(c));
    last = c;
  }
  if (reports.empty()) {
    throw rdr::ConfigError("experiments", "no experiments listed");
  }
  rdr::emit_report(reports, last.format, last.output);
  return 0;
}

// Reads "t,nu" lines from stdin (t_0 = 0 first) and prints the hull and the
// optimal q.
int cmd_hull() {
  std::vector<double> t;
  std::vector<double> nu;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
      continue;
    }
    std::istringstream in(line);
    double a = 0.0;
    double b = 0.0;
    char comma = 0;
    if (!(in >> a >> comma >> b) || comma != ',') {
      throw rdr::ConfigError("stdin:" + std::to_string(line_no), "expected 't,nu'");
    }
    t.push_back(a);
    nu.push_back(b);
  }
  if (t.size() < 2) {
    throw rdr::ConfigError("stdin", "need at least two points");
  }
  const rdr::CostProfile cost(t);
  const rdr::VarianceProfile variance = rdr::VarianceProfile::relaxed(nu);
  const rdr::HullResult hull = rdr::lower_hull(cost, variance);
  const rdr::OptimalQ best = rdr::optimal_q(cost, variance);
  const auto vec = [](auto span) { return std::vector<double>(span.begin(), span.end()); };
  const json out = {{"nu_prime", vec(hull.nu_prime.values())},
                    {"support", hull.support},
                    {"theta", hull.theta},
                    {"q", vec(best.q.values())},
                    {"r", best.r}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized dimension reduction toolkit"};
  app.require_subcommand(1);

  Overrides tune_opts;
  Overrides run_opts;
  Overrides bench_opts;
  CLI::App* tune = app.add_subcommand("tune", "Tune q for a model and print the plan as JSON");
  add_run_options(*tune, tune_opts, true);
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  add_run_options(*run, run_opts, true);
  CLI::App* bench = app.add_subcommand("bench", "Run a list of experiments from a configuration file");
  add_run_options(*bench, bench_opts, false);
  CLI::App* hull = app.add_subcommand("hull", "Lower hull and optimal q for 't,nu' lines on stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (tune->parsed()) return cmd_tune(tune_opts);
    if (run->parsed()) return cmd_run(run_opts);
    if (bench->parsed()) return cmd_bench(bench_opts);
    if (hull->parsed()) return cmd_hull();
  } catch (const rdr::ConfigError& e) {
    std::cerr << "rdr_cli: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rdr::InvalidParameter& e) {
    std::cerr << "rdr_cli: invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rdr::NumericError& e) {
    std::cerr << "rdr_cli: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "rdr_cli: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

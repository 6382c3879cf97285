#include "rdr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <tuple>

#include "rdr/ddr.hpp"
#include "rdr/errors.hpp"
#include "rdr/mlmc.hpp"
#include "rdr/parallel.hpp"
#include "rdr/zoo.hpp"

namespace rdr {

using nlohmann::json;

namespace {

constexpr double kZ90 = 1.645;

template <class T>
T read_key(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

std::size_t read_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(key, "must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

// One replication: estimate and realized cost.
struct Replicate {
  double estimate;
  double cost;
};

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rdr:
      return "rdr";
    case Algorithm::ddr:
      return "ddr";
    case Algorithm::mlmc:
      return "mlmc";
    case Algorithm::mc:
      return "mc";
    case Algorithm::longrun:
      return "longrun";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::rdr, Algorithm::ddr, Algorithm::mlmc, Algorithm::mc, Algorithm::longrun}) {
    if (to_string(a) == name) {
      return a;
    }
  }
  throw ConfigError("algorithm", "unknown algorithm '" + name + "' (expected rdr, ddr, mlmc, mc or longrun)");
}

ExperimentConfig parse_config(const json& j, ExperimentConfig base) {
  if (!j.is_object()) {
    throw ConfigError("<root>", "configuration must be a JSON object");
  }
  ExperimentConfig c = std::move(base);
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      c.model = read_key<std::string>(j, "model");
    } else if (key == "params") {
      if (!value.is_object()) {
        throw ConfigError("params", "must be an object");
      }
      c.params = value;
    } else if (key == "algorithm") {
      c.algorithm = parse_algorithm(read_key<std::string>(j, "algorithm"));
    } else if (key == "replications") {
      c.replications = read_count(j, "replications");
    } else if (key == "budget_multiplier") {
      c.budget_multiplier = read_key<double>(j, "budget_multiplier");
    } else if (key == "tuning_samples") {
      c.tuning_samples = read_count(j, "tuning_samples");
    } else if (key == "master_seed") {
      c.master_seed = read_count(j, "master_seed");
    } else if (key == "output") {
      c.output = read_key<std::string>(j, "output");
    } else if (key == "var_f_samples") {
      c.var_f_samples = read_count(j, "var_f_samples");
    } else if (key == "format") {
      const auto f = read_key<std::string>(j, "format");
      if (f == "csv") {
        c.format = OutputFormat::csv;
      } else if (f == "json") {
        c.format = OutputFormat::json;
      } else {
        throw ConfigError("format", "expected csv or json, got '" + f + "'");
      }
    } else if (key == "include_tuning_cost") {
      c.include_tuning_cost = read_key<bool>(j, "include_tuning_cost");
    } else if (key == "threads") {
      c.threads = static_cast<int>(read_count(j, "threads"));
    } else if (key == "period") {
      c.period = read_count(j, "period");
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.model.empty()) {
    throw ConfigError("model", "a model name is required");
  }
  const auto& names = model_names();
  if (std::find(names.begin(), names.end(), c.model) == names.end()) {
    throw ConfigError("model", "unknown model '" + c.model + "'");
  }
  if (c.replications < 2) {
    throw ConfigError("replications", "must be at least 2");
  }
  if (!(c.budget_multiplier > 0.0) || !std::isfinite(c.budget_multiplier)) {
    throw ConfigError("budget_multiplier", "must be positive");
  }
  if (c.tuning_samples < 2) {
    throw ConfigError("tuning_samples", "must be at least 2");
  }
  if (c.var_f_samples < 2) {
    throw ConfigError("var_f_samples", "must be at least 2");
  }
}

EstimateResult baseline_mc(PrefixModel& model, double budget, Stream& rng) {
  const double td = static_cast<double>(model.dimension());
  if (!(budget >= td)) {
    throw InvalidParameter("baseline_mc: budget is below the cost of one sample");
  }
  const auto n = static_cast<std::size_t>(std::floor(budget / td));
  EstimateResult result;
  result.iterations = n;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Evaluation e = model.fresh_eval(rng);
    sum += e.value;
    result.total_cost += e.cost;
  }
  result.estimate = sum / static_cast<double>(n);
  return result;
}

ExperimentIds experiment_ids(const ExperimentConfig& c) {
  const std::uint64_t base = hash_string(c.model + "|" + c.params.dump());
  return {hash_combine(base, hash_string("tune")), hash_combine(base, hash_string("varf")),
          hash_combine(base, hash_string("levels")),
          hash_combine(hash_combine(base, hash_string(to_string(c.algorithm))), hash_string("run"))};
}

TunedPlan tune_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::unique_ptr<PrefixModel> model = make_model(config.model, config.params);
  const std::size_t d = model->dimension();
  Stream rng = Stream::derive(config.master_seed, experiment_ids(config).tune, 0);
  return auto_tune(*model, CostProfile::linear(d), rng, config.tuning_samples, config.threads);
}

RunReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const std::unique_ptr<PrefixModel> model = make_model(config.model, config.params);
  const std::size_t d = model->dimension();
  const CostProfile t = CostProfile::linear(d);
  const ExperimentIds ids = experiment_ids(config);
  const double budget = t.total() + config.budget_multiplier * static_cast<double>(d);

  RunReport report;
  report.model = config.model;
  report.d = d;
  report.algorithm = config.algorithm;
  report.replications = config.replications;
  report.seed = config.master_seed;

  const Moments f_moments =
      sample_moments_parallel(*model, config.var_f_samples, Stream::derive(config.master_seed, ids.var_f, 0),
                              config.threads);
  report.var_f = f_moments.variance();

  auto stream_for = [&](std::size_t r) { return Stream::derive(config.master_seed, ids.run, r); };
  auto run = [&](auto&& body) {
    return replicate_parallel(
        *model, config.replications,
        [&](PrefixModel& m, std::size_t r) {
          Stream rng = stream_for(r);
          return body(m, rng);
        },
        config.threads);
  };

  std::vector<Replicate> reps;
  switch (config.algorithm) {
    case Algorithm::rdr:
    case Algorithm::ddr: {
      Stream tune_rng = Stream::derive(config.master_seed, ids.tune, 0);
      const TunedPlan plan = auto_tune(*model, t, tune_rng, config.tuning_samples, config.threads);
      report.tuning_cost = plan.tuning_cost;
      if (config.algorithm == Algorithm::rdr) {
        report.n = choose_n(d, plan.expected_cost, config.budget_multiplier);
        reps = run([&](PrefixModel& m, Stream& rng) {
          const EstimateResult e = rdr_estimate(m, plan.q, report.n, rng);
          return Replicate{e.estimate, e.total_cost};
        });
      } else {
        const MuSequence mu = mu_sequence(plan.q);
        double cost = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          cost += mu.q_bar[i] * t.increment(i);
        }
        report.n = choose_n(d, cost, config.budget_multiplier);
        reps = run([&](PrefixModel& m, Stream& rng) {
          const EstimateResult e = ddr_estimate(m, mu, report.n, rng);
          return Replicate{e.estimate, e.total_cost};
        });
      }
      break;
    }
    case Algorithm::mlmc: {
      Stream level_rng = Stream::derive(config.master_seed, ids.levels, 0);
      const MlmcPlan plan = plan_mlmc(*model, budget, level_rng, config.tuning_samples);
      for (std::size_t l = 0; l < plan.levels(); ++l) {
        report.tuning_cost += static_cast<double>(config.tuning_samples) * plan.cost()[l];
        report.n += plan.n()[l];
      }
      report.level_n = plan.n();
      reps = run([&](PrefixModel& m, Stream& rng) {
        const EstimateResult e = mlmc_estimate(m, plan, rng);
        return Replicate{e.estimate, e.total_cost};
      });
      break;
    }
    case Algorithm::mc: {
      report.n = static_cast<std::size_t>(std::floor(budget / t.total()));
      reps = run([&](PrefixModel& m, Stream& rng) {
        const EstimateResult e = baseline_mc(m, budget, rng);
        return Replicate{e.estimate, e.total_cost};
      });
      break;
    }
    case Algorithm::longrun: {
      const auto* capable = dynamic_cast<const LongRunCapable*>(model.get());
      if (capable == nullptr) {
        throw ConfigError("algorithm", "longrun requires a Markov chain model, not '" + config.model + "'");
      }
      const std::size_t period = config.period != 0 ? config.period : capable->default_period();
      if (period >= d) {
        throw ConfigError("period", "must be below d = " + std::to_string(d));
      }
      report.n = 1;
      reps = run([&](PrefixModel& m, Stream& rng) {
        const Evaluation e = dynamic_cast<LongRunCapable&>(m).long_run_average(period, rng);
        return Replicate{e.value, e.cost};
      });
      break;
    }
  }

  Moments estimate;
  Moments cost;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!std::isfinite(reps[r].estimate) || !std::isfinite(reps[r].cost)) {
      throw NumericError("replication " + std::to_string(r) + " (master seed " + std::to_string(config.master_seed) +
                         ") produced a non-finite result");
    }
    estimate.add(reps[r].estimate);
    cost.add(reps[r].cost);
  }
  const double root_r = std::sqrt(static_cast<double>(reps.size()));
  report.estimate = estimate.mean;
  report.std = std::sqrt(estimate.variance());
  report.ci90 = kZ90 * report.std / root_r;
  report.cost_mean = cost.mean + (config.include_tuning_cost ? report.tuning_cost : 0.0);
  report.cost_ci90 = kZ90 * std::sqrt(cost.variance()) / root_r;
  report.cost_times_var = report.cost_mean * estimate.variance();
  report.vrf = report.cost_times_var > 0.0 ? static_cast<double>(d) * report.var_f / report.cost_times_var
                                           : std::numeric_limits<double>::infinity();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

json plan_to_json(const TunedPlan& plan) {
  json c = json::array();
  for (const auto& [i, e] : plan.c_estimates) {
    c.push_back({{"i", i}, {"estimate", e.estimate}, {"standard_error", e.standard_error}});
  }
  const auto vec = [](auto span) { return std::vector<double>(span.begin(), span.end()); };
  return {{"q", vec(plan.q.values())},
          {"expected_cost", plan.expected_cost},
          {"predicted_r", plan.predicted_r},
          {"nu_proxy", vec(plan.nu_proxy.values())},
          {"nu_hull", vec(plan.nu_hull.values())},
          {"c_estimates", c},
          {"tuning_cost", plan.tuning_cost}};
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

namespace {

void sort_reports(std::vector<RunReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
    return std::forward_as_tuple(a.model, a.d, to_string(a.algorithm)) <
           std::forward_as_tuple(b.model, b.d, to_string(b.algorithm));
  });
}

double rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

}  // namespace

std::string format_csv(std::vector<RunReport> reports) {
  sort_reports(reports);
  std::ostringstream out;
  out << "model,d,algorithm,n,estimate,ci90,std,cost_mean,cost_ci90,cost_times_var,vrf,tuning_cost,seed\n";
  for (const RunReport& r : reports) {
    out << r.model << ',' << r.d << ',' << to_string(r.algorithm) << ',' << r.n << ',' << format_number(r.estimate)
        << ',' << format_number(r.ci90) << ',' << format_number(r.std) << ',' << format_number(r.cost_mean) << ','
        << format_number(r.cost_ci90) << ',' << format_number(r.cost_times_var) << ',' << format_number(r.vrf)
        << ',' << format_number(r.tuning_cost) << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string format_json(std::vector<RunReport> reports) {
  sort_reports(reports);
  json rows = json::array();
  for (const RunReport& r : reports) {
    json row = {{"model", r.model},
                {"d", r.d},
                {"algorithm", to_string(r.algorithm)},
                {"n", r.n},
                {"estimate", rounded(r.estimate)},
                {"ci90", rounded(r.ci90)},
                {"std", rounded(r.std)},
                {"cost_mean", rounded(r.cost_mean)},
                {"cost_ci90", rounded(r.cost_ci90)},
                {"cost_times_var", rounded(r.cost_times_var)},
                {"vrf", rounded(r.vrf)},
                {"tuning_cost", rounded(r.tuning_cost)},
                {"seed", r.seed},
                {"replications", r.replications},
                {"var_f", rounded(r.var_f)},
                {"wall_seconds", rounded(r.wall_seconds)}};
    if (!r.level_n.empty()) {
      row["level_n"] = r.level_n;
    }
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

void emit_report(const std::vector<RunReport>& reports, OutputFormat format, const std::string& path) {
  if (reports.empty()) {
    throw InvalidParameter("emit_report: no reports");
  }
  const std::string text = format == OutputFormat::csv ? format_csv(reports) : format_json(reports);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !(out.flush())) {
    throw ConfigError("output", "cannot write '" + path + "'");
  }
}

}  // namespace rdr

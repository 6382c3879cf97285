#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rdr/errors.hpp"
#include "rdr/harness.hpp"
#include "rdr/models/sum.hpp"

using namespace rdr;
using nlohmann::json;

namespace {

ExperimentConfig small(const std::string& model, Algorithm a, json params = json::object()) {
  ExperimentConfig c;
  c.model = model;
  c.params = std::move(params);
  c.algorithm = a;
  c.replications = 200;
  c.tuning_samples = 300;
  c.var_f_samples = 2000;
  c.master_seed = 11;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RDR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture_cli(const std::string& args) {
  const std::string cmd = std::string(RDR_CLI_PATH) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = parse_config(json::parse(R"({"model": "garch", "params": {"d": 100},
      "algorithm": "mlmc", "replications": 50, "budget_multiplier": 5, "master_seed": 3, "format": "json"})"));
  CHECK(c.model == "garch");
  CHECK(c.params["d"] == 100);
  CHECK(c.algorithm == Algorithm::mlmc);
  CHECK(c.replications == 50);
  CHECK(c.budget_multiplier == 5.0);
  CHECK(c.tuning_samples == 1000);
  CHECK(c.var_f_samples == 10000);
  CHECK(c.format == OutputFormat::json);

  auto key_of = [](const json& j) {
    try {
      validate(parse_config(j));
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  CHECK(key_of(json::parse(R"({"model": "sum", "color": 1})")) == "color");
  CHECK(key_of(json::parse(R"({"model": "sum", "algorithm": "qmc"})")) == "algorithm");
  CHECK(key_of(json::parse(R"({"model": "sum", "replications": 1})")) == "replications");
  CHECK(key_of(json::parse(R"({"model": "sum", "replications": -4})")) == "replications");
  CHECK(key_of(json::parse(R"({"model": "cube"})")) == "model");
  CHECK(key_of(json::parse(R"({"model": "sum", "budget_multiplier": 0})")) == "budget_multiplier");
  CHECK(key_of(json::parse(R"({"model": "sum", "format": "xml"})")) == "format");
  CHECK(key_of(json::parse(R"({"model": "sum"})")).empty());
}

TEST_CASE("baseline Monte Carlo") {
  SumModel model = sum_model(4);
  Stream a(2);
  Stream b(2);
  const EstimateResult one = baseline_mc(model, 4.0, a);
  CHECK(one.iterations == 1);
  CHECK(one.estimate == model.fresh_eval(b).value);
  CHECK_THROWS_AS(baseline_mc(model, 3.0, a), InvalidParameter);
  std::vector<double> est(2000);
  for (std::size_t r = 0; r < est.size(); ++r) {
    Stream rng(r);
    est[r] = baseline_mc(model, 40.0, rng).estimate;
  }
  const auto s = oracle::summarize(est);
  CHECK(std::abs(s.mean) < 4 * s.se);
  CHECK(s.variance == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("report statistics follow their definitions") {
  ExperimentConfig c = small("sum", Algorithm::rdr, {{"d", 8}});
  const RunReport r = run_experiment(c);
  CHECK(r.d == 8);
  CHECK(r.ci90 == doctest::Approx(1.645 * r.std / std::sqrt(200.0)));
  CHECK(r.cost_times_var == doctest::Approx(r.cost_mean * r.std * r.std));
  CHECK(r.vrf == doctest::Approx(8 * r.var_f / r.cost_times_var));
  CHECK(r.tuning_cost == doctest::Approx(4 * 300 * 24.0));
  c.include_tuning_cost = true;
  const RunReport folded = run_experiment(c);
  CHECK(folded.cost_mean == doctest::Approx(r.cost_mean + r.tuning_cost));
  CHECK(folded.estimate == r.estimate);
}

TEST_CASE("plain Monte Carlo has VRF near one") {
  ExperimentConfig c = small("sum", Algorithm::mc, {{"d", 8}});
  c.replications = 4000;
  c.var_f_samples = 20000;
  const RunReport r = run_experiment(c);
  CHECK(r.n == 11);
  CHECK(r.cost_mean == doctest::Approx(88.0));
  CHECK(r.vrf == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("every algorithm runs on a Markov model") {
  for (Algorithm a : {Algorithm::rdr, Algorithm::ddr, Algorithm::mlmc, Algorithm::mc, Algorithm::longrun}) {
    ExperimentConfig c = small("gtd1", a, {{"d", 64}});
    c.period = 8;
    const RunReport r = run_experiment(c);
    CHECK(std::isfinite(r.estimate));
    CHECK(r.n >= 1);
    if (a == Algorithm::mlmc) CHECK(r.level_n.size() == 7);
  }
  CHECK_THROWS_AS(run_experiment(small("sum", Algorithm::longrun)), ConfigError);
}

TEST_CASE("output is independent of the thread count") {
  for (Algorithm a : {Algorithm::rdr, Algorithm::mlmc, Algorithm::ddr}) {
    ExperimentConfig c = small("garch", a, {{"d", 64}});
    c.threads = 1;
    const std::string one = format_csv({run_experiment(c)});
    c.threads = 8;
    const std::string eight = format_csv({run_experiment(c)});
    CHECK(one == eight);
  }
}

TEST_CASE("seeds separate experiments") {
  ExperimentConfig c = small("sum", Algorithm::rdr, {{"d", 8}});
  const RunReport a = run_experiment(c);
  c.master_seed = 12;
  const RunReport b = run_experiment(c);
  CHECK(a.estimate != b.estimate);
  ExperimentConfig d = small("sum", Algorithm::ddr, {{"d", 8}});
  const auto ia = experiment_ids(c);
  const auto id = experiment_ids(d);
  CHECK(ia.tune == id.tune);
  CHECK(ia.run != id.run);
  CHECK(ia.run != ia.tune);
  CHECK(ia.var_f != ia.tune);
}

TEST_CASE("csv and json formatting") {
  RunReport a;
  a.model = "sum";
  a.d = 8;
  a.algorithm = Algorithm::rdr;
  a.n = 12;
  a.estimate = 0.123456789;
  a.ci90 = 1.5e-7;
  a.seed = 5;
  RunReport b = a;
  b.algorithm = Algorithm::mc;
  RunReport g = a;
  g.model = "garch";
  g.d = 1250;
  RunReport s4 = a;
  s4.d = 4;
  const std::string csv = format_csv({a, b, g, s4});
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "model,d,algorithm,n,estimate,ci90,std,cost_mean,cost_ci90,cost_times_var,vrf,tuning_cost,seed");
  CHECK(rows[1].rfind("garch,1250,rdr,", 0) == 0);
  CHECK(rows[2].rfind("sum,4,rdr,", 0) == 0);
  CHECK(rows[3].rfind("sum,8,mc,", 0) == 0);
  CHECK(rows[4] == "sum,8,rdr,12,0.123457,1.5e-07,0,0,0,0,0,0,5");
  CHECK(format_number(13671.234) == "13671.2");

  a.level_n = {3, 2};
  const json parsed = json::parse(format_json({a}));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0]["estimate"].get<double>() == 0.123457);
  CHECK(parsed[0]["ci90"].get<double>() == 1.5e-7);
  CHECK(parsed[0]["algorithm"] == "rdr");
  CHECK(parsed[0]["seed"] == 5);
  CHECK(parsed[0]["level_n"] == json::array({3, 2}));
  CHECK(format_number(parsed[0]["estimate"].get<double>()) == format_number(a.estimate));
}

TEST_CASE("90% intervals cover the true mean") {
  std::size_t covered = 0;
  const std::size_t trials = 1000;
  for (std::size_t k = 0; k < trials; ++k) {
    ExperimentConfig c = small("sum", Algorithm::rdr, {{"d", 8}});
    c.replications = 100;
    c.tuning_samples = 100;
    c.var_f_samples = 100;
    c.master_seed = 1000 + k;
    c.threads = 1;
    const RunReport r = run_experiment(c);
    covered += std::abs(r.estimate) <= r.ci90;
  }
  const double rate = static_cast<double>(covered) / trials;
  CHECK(rate >= 0.87);
  CHECK(rate <= 0.93);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("run --model sum --param d=4 --reps 10 --tuning-samples 50 --var-f-samples 50") == 0);
  CHECK(run_cli("run --model cube") == 2);
  CHECK(run_cli("run --model sum --algorithm qmc") == 2);
  CHECK(run_cli("run --model sum --reps 1") == 2);
  CHECK(run_cli("run --model sum --bogus-flag") == 2);
  CHECK(run_cli("run --model garch --param alpha=0.5 --param beta=0.6") == 2);
  CHECK(run_cli("run --config /nonexistent/config.json") == 2);
  CHECK(run_cli("tune --model gtd1 --param d=16 --param output=indicator --param threshold=1e9") == 3);
  CHECK(run_cli("bench") == 2);
}

TEST_CASE("cli hull and tune output") {
  const std::string path = "cli_hull_input.txt";
  {
    std::ofstream f(path);
    f << "0,20\n1,21\n2,13\n3,8\n4,7\n5,2\n6,0\n";
  }
  const json h = json::parse(capture_cli("hull < " + path));
  CHECK(h["nu_prime"] == json::array({20.0, 16.0, 12.0, 8.0, 5.0, 2.0, 0.0}));
  CHECK(std::abs(h["r"].get<double>() - 118.34) < 0.01);
  std::remove(path.c_str());

  const json plan = json::parse(capture_cli("tune --model sum --param d=8 --tuning-samples 200"));
  CHECK(plan["q"].size() == 8);
  CHECK(plan["c_estimates"].size() == 4);

  const std::string csv = capture_cli("run --model sum --param d=4 --reps 10 --tuning-samples 50 --var-f-samples 50");
  CHECK(csv.rfind("model,d,algorithm,", 0) == 0);
}

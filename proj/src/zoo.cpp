#include "rdr/zoo.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>

#include "rdr/errors.hpp"
#include "rdr/models/garch.hpp"
#include "rdr/models/gtd1.hpp"
#include "rdr/models/markov.hpp"
#include "rdr/models/mtgi1.hpp"
#include "rdr/models/sum.hpp"

namespace rdr {

namespace {

using nlohmann::json;

// Typed access to a flat parameter object that remembers which keys were read.
class Params {
 public:
  Params(json j, std::string model) : j_(std::move(j)), model_(std::move(model)) {
    if (!j_.is_object()) {
      throw ConfigError("params", "must be an object");
    }
  }

  double real(const std::string& key, double fallback) { return get<double>(key, fallback, "a number"); }

  std::size_t count(const std::string& key, std::size_t fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      return fallback;
    }
    const json& v = j_.at(key);
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return v.get<std::size_t>();
    }
    if (v.is_number_float() && v.get<double>() >= 0.0 && std::floor(v.get<double>()) == v.get<double>()) {
      return static_cast<std::size_t>(v.get<double>());
    }
    throw ConfigError("params." + key, "must be a nonnegative integer");
  }

  std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) {
    std::string v = get<std::string>(key, fallback, "a string");
    for (const char* a : allowed) {
      if (v == a) {
        return v;
      }
    }
    std::string list;
    for (const char* a : allowed) {
      list += list.empty() ? a : std::string(", ") + a;
    }
    throw ConfigError("params." + key, "'" + v + "' is not one of: " + list);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw ConfigError("params." + key, "unknown parameter for model '" + model_ + "'");
      }
    }
  }

 private:
  template <class T>
  T get(const std::string& key, T fallback, const char* kind) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      return fallback;
    }
    const json& v = j_.at(key);
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) {
        throw ConfigError("params." + key, std::string("must be ") + kind);
      }
    } else {
      if (!v.is_string()) {
        throw ConfigError("params." + key, std::string("must be ") + kind);
      }
    }
    return v.get<T>();
  }

  json j_;
  std::string model_;
  std::set<std::string> seen_;
};

std::unique_ptr<PrefixModel> make_sum(Params& p) {
  const std::size_t d = p.count("d", 8);
  const std::string sampler = p.choice("sampler", "normal", {"normal", "uniform"});
  p.finish();
  SumModel::Sampler s = standard_normal_sampler();
  if (sampler == "uniform") {
    s = [](Stream& rng) { return std::sqrt(12.0) * (rng.uniform() - 0.5); };
  }
  return std::make_unique<SumModel>(sum_model(d, std::move(s)));
}

std::unique_ptr<PrefixModel> make_lipschitz_sum(Params& p) {
  const std::size_t d = p.count("d", 16);
  const double decay = p.real("decay", 1.5);
  const double strike = p.real("strike", 0.0);
  const std::string payoff = p.choice("payoff", "call", {"call", "identity"});
  p.finish();
  std::vector<double> sigma(d);
  for (std::size_t j = 0; j < d; ++j) {
    sigma[j] = std::pow(static_cast<double>(j + 1), -decay);
  }
  SumModel::Transform g = payoff == "call" ? call_payoff(strike) : SumModel::Transform([](double s) { return s; });
  return std::make_unique<SumModel>(lipschitz_sum_model(std::move(sigma), std::move(g)));
}

std::unique_ptr<PrefixModel> make_garch(Params& p) {
  GarchParams g;
  g.d = p.count("d", g.d);
  g.w = p.real("w", g.w);
  g.alpha = p.real("alpha", g.alpha);
  g.beta = p.real("beta", g.beta);
  g.x0 = p.real("x0", g.x0);
  g.z = p.real("z", g.z);
  g.threshold_output = p.choice("output", "indicator", {"indicator", "state"}) == "indicator";
  p.finish();
  return std::make_unique<ReversedChainModel<GarchChain>>(GarchChain(g));
}

std::unique_ptr<PrefixModel> make_gtd1(Params& p) {
  Gtd1Params g;
  SinusoidalRate rate;
  g.d = p.count("d", g.d);
  rate.base = p.real("base", rate.base);
  rate.amplitude = p.real("amplitude", rate.amplitude);
  rate.period = p.real("rate_period", rate.period);
  g.rate = rate;
  g.threshold_output = p.choice("output", "mean", {"mean", "indicator"}) == "indicator";
  g.threshold = p.real("threshold", g.threshold);
  g.period = p.count("period", g.period);
  p.finish();
  return std::make_unique<ReversedChainModel<Gtd1Chain>>(Gtd1Chain(g));
}

std::unique_ptr<PrefixModel> make_mtgi1(Params& p) {
  MtGi1Params m;
  SinusoidalRate rate;
  m.theta = p.real("theta", m.theta);
  m.d = p.count("d", m.d);
  m.lambda_star = p.real("lambda_star", m.lambda_star);
  rate.base = p.real("base", rate.base);
  rate.amplitude = p.real("amplitude", rate.amplitude);
  rate.period = p.real("rate_period", rate.period);
  m.rate = rate;
  m.pareto_alpha = p.real("pareto_alpha", m.pareto_alpha);
  m.threshold_output = p.choice("output", "indicator", {"indicator", "workload"}) == "indicator";
  m.threshold = p.real("threshold", m.threshold);
  m.period = p.count("period", m.period);
  p.finish();
  return std::make_unique<ReversedChainModel<MtGi1Chain>>(MtGi1Chain(std::move(m)));
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"sum", "lipschitz_sum", "garch", "gtd1", "mtgi1"};
  return names;
}

std::unique_ptr<PrefixModel> make_model(const std::string& name, const nlohmann::json& params) {
  Params p(params.is_null() ? json::object() : params, name);
  if (name == "sum") {
    return make_sum(p);
  }
  if (name == "lipschitz_sum") {
    return make_lipschitz_sum(p);
  }
  if (name == "garch") {
    return make_garch(p);
  }
  if (name == "gtd1") {
    return make_gtd1(p);
  }
  if (name == "mtgi1") {
    return make_mtgi1(p);
  }
  throw ConfigError("model", "unknown model '" + name + "'");
}

}  // namespace rdr

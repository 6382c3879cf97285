#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdr/model.hpp"

namespace rdr {

/// Names accepted by make_model.
const std::vector<std::string>& model_names();

/// Builds a zoo model from its name and a flat parameter object. Unknown names
/// and keys raise ConfigError; out-of-range values raise InvalidParameter.
///
///   sum            d, sampler ("normal" | "uniform")
///   lipschitz_sum  d, decay (sigma_j = j^-decay), strike, payoff ("call" | "identity")
///   garch          d, w, alpha, beta, x0, z, output ("indicator" | "state")
///   gtd1           d, base, amplitude, rate_period, output ("mean" | "indicator"), threshold, period
///   mtgi1          theta, d, lambda_star, base, amplitude, rate_period, pareto_alpha,
///                  output ("indicator" | "workload"), threshold, period
std::unique_ptr<PrefixModel> make_model(const std::string& name, const nlohmann::json& params);

}  // namespace rdr

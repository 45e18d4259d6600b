#pragma once

#include "ocl/knowledge.hpp"
#include "ocl/params.hpp"

#include <span>
#include <utility>
#include <vector>

namespace ocl {

// Naive Gossip averaging: a newcomer starts from its own value, and an
// interacting pair both move to the midpoint of their estimates.

inline double gossip_init(double own_value) { return own_value; }

inline std::pair<double, double> gossip_update(double yi, double yj) {
    const double mid = (yi + yj) / 2.0;
    return {mid, mid};
}

/// E[xbar(t) | latest-info table of the owner].
///
/// Each known peer contributes its recorded value weighted by the probability
/// exp(-lambda_r * age) that it has not been replaced since; unknown peers
/// contribute the prior mean 0.
double optimal_estimate(const LatestInfoTable& table, const SystemParams& params, double t);

/// optimal_estimate for every agent of the state.
std::vector<double> optimal_estimates(const AgentState& state, const SystemParams& params,
                                      double t);

/// Best estimate of X given Z when X equals Z with probability p and an
/// independent copy otherwise.
double mixed_rv_estimate(double p, double z);
/// Its expected squared error (1 - p^2) sigma^2.
double mixed_rv_mse(double p, double sigma2);

/// C = (1/N) sum_i (xbar - y_i)^2.
double mean_squared_error(std::span<const double> values, std::span<const double> estimates);

double average(std::span<const double> values);

}  // namespace ocl

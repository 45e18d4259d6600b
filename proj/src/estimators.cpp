#include "ocl/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace ocl {

double optimal_estimate(const LatestInfoTable& table, const SystemParams& params, double t) {
    double sum = table.own_value;
    for (std::size_t j = 0; j < table.peers.size(); ++j) {
        if (j == table.owner) continue;
        const auto& rec = table.peers[j];
        if (!rec) continue;
        sum += std::exp(-params.lambda_r * (t - rec->timestamp)) * rec->value;
    }
    return sum / static_cast<double>(params.n_agents);
}

std::vector<double> optimal_estimates(const AgentState& state, const SystemParams& params,
                                      double t) {
    std::vector<double> y(state.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = optimal_estimate(state.tables[i], params, t);
    return y;
}

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

}  // namespace

double mixed_rv_estimate(double p, double z) {
    check_probability(p);
    return p * z;
}

double mixed_rv_mse(double p, double sigma2) {
    check_probability(p);
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    return (1.0 - p * p) * sigma2;
}

double average(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double mean_squared_error(std::span<const double> values, std::span<const double> estimates) {
    const double xbar = average(values);
    double s = 0.0;
    for (double y : estimates) s += (xbar - y) * (xbar - y);
    return s / static_cast<double>(estimates.size());
}

}  // namespace ocl

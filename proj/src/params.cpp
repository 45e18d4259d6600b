#include "ocl/params.hpp"

#include <cmath>
#include <stdexcept>

namespace ocl {

std::string_view to_string(ValueDist d) {
    return d == ValueDist::gaussian ? "gaussian" : "rademacher";
}

std::string_view to_string(Model m) {
    return m == Model::ping ? "ping" : "gossip";
}

ValueDist parse_value_dist(std::string_view s) {
    if (s == "gaussian") return ValueDist::gaussian;
    if (s == "rademacher") return ValueDist::rademacher;
    throw std::invalid_argument("unknown value distribution: " + std::string(s));
}

Model parse_model(std::string_view s) {
    if (s == "ping") return Model::ping;
    if (s == "gossip") return Model::gossip;
    throw std::invalid_argument("unknown interaction model: " + std::string(s));
}

double SystemParams::initial_mse() const {
    const auto n = static_cast<double>(n_agents);
    return (n - 1.0) / (n * n) * sigma2;
}

SystemParams SystemParams::from_ratio(std::size_t n, double rho, double sigma2,
                                      double lambda_r, ValueDist dist) {
    return SystemParams{n, lambda_r, rho * lambda_r, sigma2, dist};
}

std::vector<std::string> validate_params(const SystemParams& p) {
    std::vector<std::string> errors;
    if (p.n_agents < 2) errors.emplace_back("n_agents < 2");
    if (!(p.lambda_r > 0.0) || !std::isfinite(p.lambda_r))
        errors.emplace_back("lambda_r must be positive");
    if (!(p.comm_rate >= 0.0) || !std::isfinite(p.comm_rate))
        errors.emplace_back("comm_rate must be non-negative");
    if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2))
        errors.emplace_back("sigma2 must be positive");
    return errors;
}

void require_valid(const SystemParams& p) {
    const auto errors = validate_params(p);
    if (errors.empty()) return;
    std::string msg = "invalid parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
}

}  // namespace ocl

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ocl {

enum class ValueDist { gaussian, rademacher };

/// Interaction model driving information exchanges.
enum class Model { ping, gossip };

std::string_view to_string(ValueDist d);
std::string_view to_string(Model m);
ValueDist parse_value_dist(std::string_view s);
Model parse_model(std::string_view s);

/// Parameters of a fixed-size open system.
///
/// `comm_rate` is the per-agent communication rate: lambda_c under the
/// Gossip model, lambda_p under the Ping model.
struct SystemParams {
    std::size_t n_agents = 10;
    double lambda_r = 1.0;
    double comm_rate = 0.0;
    double sigma2 = 1.0;
    ValueDist value_dist = ValueDist::gaussian;

    /// rho = comm_rate / lambda_r.
    double rate_ratio() const { return comm_rate / lambda_r; }
    /// rho / (N - 1), the scaled ratio of the large-rho expansion.
    double scaled_ratio() const { return rate_ratio() / static_cast<double>(n_agents - 1); }
    /// (N-1)/N^2 * sigma^2: the expected MSE when agents only know themselves.
    double initial_mse() const;

    /// Convenience constructor from a rate ratio with lambda_r fixed.
    static SystemParams from_ratio(std::size_t n, double rho, double sigma2 = 1.0,
                                   double lambda_r = 1.0,
                                   ValueDist dist = ValueDist::gaussian);
};

/// Every violated invariant, empty when the parameters are usable.
std::vector<std::string> validate_params(const SystemParams& p);

/// Throws std::invalid_argument listing every violation.
void require_valid(const SystemParams& p);

}  // namespace ocl

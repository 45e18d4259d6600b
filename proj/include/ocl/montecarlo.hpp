#pragma once

#include "ocl/events.hpp"
#include "ocl/knowledge.hpp"
#include "ocl/params.hpp"
#include "ocl/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ocl {

enum class Algorithm { gossip, optimal };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct ExperimentSpec {
    SystemParams params;
    Model model = Model::gossip;
    Algorithm algorithm = Algorithm::optimal;
    StopCriterion stop = Horizon{1.0};
    /// nullopt reads C once when the stream stops: at the horizon, or right
    /// after the last event for an event-count stop.
    std::optional<std::vector<double>> sample_times;
    std::size_t realizations = 1;
    std::uint64_t seed = 0;
};

std::vector<std::string> validate_spec(const ExperimentSpec& spec);
void require_valid(const ExperimentSpec& spec);

/// Horizon long enough to forget the initialization:
/// max(events / total_rate, lifetimes / lambda_r).
double steady_state_horizon(const SystemParams& params, Model model, double events = 200.0,
                            double lifetimes = 20.0);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Mean and standard error (n-1 denominator) accumulated in index order.
McEstimate summarize(std::span<const double> samples);

/// Replays events through the agents' state and the chosen algorithm.
class Realization {
public:
    Realization(const SystemParams& params, Model model, Algorithm algorithm, Rng value_rng);

    void apply(const Event& ev);
    /// C(t) for a time t at or after the last applied event.
    double mse(double t) const;
    /// Estimates y_i(t) of every agent.
    std::vector<double> estimates(double t) const;

    const AgentState& state() const { return state_; }
    double time() const { return state_.time; }

private:
    SystemParams params_;
    Model model_;
    Algorithm algorithm_;
    Rng value_rng_;
    AgentState state_;
    std::vector<double> gossip_;
};

struct MseSample {
    double t = 0.0;
    double value = 0.0;
};

/// C(t) samples of one realization, deterministic in (spec.seed, stream_index).
std::vector<MseSample> run_realization(const ExperimentSpec& spec, std::uint64_t stream_index);

/// C(t) at the given times along a caller-supplied event stream (times
/// non-decreasing). nullopt samples once after the last event.
std::vector<MseSample> simulate_events(const SystemParams& params, Model model,
                                       Algorithm algorithm, std::span<const Event> events,
                                       const std::optional<std::vector<double>>& sample_times,
                                       RngHandle value_handle);

struct MsePoint {
    /// Sample time; for event-count stops the mean time of the last event.
    double t = 0.0;
    bool final_event = false;
    McEstimate estimate;
};

/// Expected MSE over spec.realizations independent realizations, parallel
/// across realizations. threads <= 0 uses the OpenMP default. The result does
/// not depend on the thread count.
std::vector<MsePoint> estimate_mse(const ExperimentSpec& spec, int threads = 0);
/// Serial reference of estimate_mse.
std::vector<MsePoint> estimate_mse_serial(const ExperimentSpec& spec);

struct PseudoCdfSpec {
    SystemParams params;
    Model model = Model::gossip;
    std::size_t observer = 0;
    std::size_t subject = 1;
    std::vector<double> s_grid;
    /// Measurement time; must be at least max(s_grid).
    double measure_time = 0.0;
    std::size_t realizations = 1;
    std::uint64_t seed = 0;
};

struct PseudoCdfPoint {
    double s = 0.0;
    double fraction = 0.0;
    /// Binomial standard error sqrt(f(1-f)/n).
    double std_error = 0.0;
};

/// Fraction of realizations in which the observer holds information about
/// the subject no older than s at the measurement time.
std::vector<PseudoCdfPoint> empirical_pseudo_cdf(const PseudoCdfSpec& spec, int threads = 0);
std::vector<PseudoCdfPoint> empirical_pseudo_cdf_serial(const PseudoCdfSpec& spec);

/// CSV with header `model,algorithm,N,rho,t,sigma2,mean,stderr,realizations,seed`.
void write_mc_csv_header(std::ostream& os);
void write_mc_csv_rows(std::ostream& os, const ExperimentSpec& spec,
                       std::span<const MsePoint> points);

}  // namespace ocl

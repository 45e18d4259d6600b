#include "ocl/montecarlo.hpp"

#include "ocl/estimators.hpp"
#include "ocl/values.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ocl {

std::string_view to_string(Algorithm a) { return a == Algorithm::gossip ? "gossip" : "optimal"; }

Algorithm parse_algorithm(std::string_view s) {
    if (s == "gossip") return Algorithm::gossip;
    if (s == "optimal") return Algorithm::optimal;
    throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

std::vector<std::string> validate_spec(const ExperimentSpec& spec) {
    auto errors = validate_params(spec.params);
    if (spec.realizations < 1) errors.emplace_back("realizations must be >= 1");
    if (spec.algorithm == Algorithm::gossip && spec.model != Model::gossip)
        errors.emplace_back("the gossip algorithm needs the gossip interaction model");
    if (const auto* h = std::get_if<Horizon>(&spec.stop)) {
        if (!(h->time > 0.0) || !std::isfinite(h->time))
            errors.emplace_back("horizon must be positive and finite");
    }
    if (spec.sample_times) {
        const auto& ts = *spec.sample_times;
        if (ts.empty()) errors.emplace_back("sample_times is empty");
        if (std::holds_alternative<EventCount>(spec.stop))
            errors.emplace_back("event-count stops only support the final sample");
        if (!std::is_sorted(ts.begin(), ts.end()))
            errors.emplace_back("sample_times must be sorted");
        for (double t : ts) {
            if (!(t >= 0.0)) errors.emplace_back("sample_times must be >= 0");
            if (const auto* h = std::get_if<Horizon>(&spec.stop); h && t > h->time)
                errors.emplace_back("sample time beyond the horizon");
        }
    }
    return errors;
}

void require_valid(const ExperimentSpec& spec) {
    const auto errors = validate_spec(spec);
    if (errors.empty()) return;
    std::string msg = "invalid experiment:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
}

double steady_state_horizon(const SystemParams& params, Model model, double events,
                            double lifetimes) {
    return std::max(events / total_rate(params, model), lifetimes / params.lambda_r);
}

McEstimate summarize(std::span<const double> samples) {
    McEstimate est;
    est.n = samples.size();
    if (samples.empty()) return est;
    double sum = 0.0;
    for (double x : samples) sum += x;
    est.mean = sum / static_cast<double>(est.n);
    if (est.n > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - est.mean) * (x - est.mean);
        const double var = ss / static_cast<double>(est.n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(est.n));
    }
    return est;
}

// ---------------------------------------------------------------------------

Realization::Realization(const SystemParams& params, Model model, Algorithm algorithm,
                         Rng value_rng)
    : params_(params), model_(model), algorithm_(algorithm), value_rng_(std::move(value_rng)) {
    std::vector<double> values(params.n_agents);
    for (auto& x : values) x = sample_value(params_, value_rng_);
    if (algorithm_ == Algorithm::optimal) {
        state_ = AgentState(std::move(values));
    } else {
        // The Gossip algorithm never looks at knowledge tables.
        state_.values = std::move(values);
        gossip_.resize(state_.values.size());
        std::transform(state_.values.begin(), state_.values.end(), gossip_.begin(), gossip_init);
    }
}

void Realization::apply(const Event& ev) {
    if (algorithm_ == Algorithm::optimal) {
        apply_event(state_, ev, model_, params_, value_rng_);
        return;
    }
    switch (ev.kind) {
        case EventKind::replacement: {
            const double x = sample_value(params_, value_rng_);
            state_.values[ev.a] = x;
            gossip_[ev.a] = gossip_init(x);
            break;
        }
        case EventKind::pair_interaction:
            std::tie(gossip_[ev.a], gossip_[ev.b]) = gossip_update(gossip_[ev.a], gossip_[ev.b]);
            break;
        case EventKind::ping:
            throw std::logic_error("the gossip algorithm has no ping update");
    }
    state_.time = ev.time;
}

std::vector<double> Realization::estimates(double t) const {
    if (algorithm_ == Algorithm::optimal) return optimal_estimates(state_, params_, t);
    return gossip_;
}

double Realization::mse(double t) const {
    if (algorithm_ == Algorithm::optimal)
        return mean_squared_error(state_.values, optimal_estimates(state_, params_, t));
    return mean_squared_error(state_.values, gossip_);
}

namespace {

// Drives a realization along `next_event` and reads C at the requested times.
template <typename NextEvent>
std::vector<MseSample> replay(Realization& r, NextEvent&& next_event,
                              const std::optional<std::vector<double>>& sample_times,
                              std::optional<double> horizon) {
    std::vector<MseSample> out;
    if (!sample_times) {
        while (auto ev = next_event()) r.apply(*ev);
        const double t = horizon ? *horizon : r.time();
        out.push_back({t, r.mse(t)});
        return out;
    }
    const auto& ts = *sample_times;
    out.reserve(ts.size());
    std::size_t next = 0;
    while (auto ev = next_event()) {
        for (; next < ts.size() && ts[next] < ev->time; ++next)
            out.push_back({ts[next], r.mse(ts[next])});
        r.apply(*ev);
    }
    for (; next < ts.size(); ++next) out.push_back({ts[next], r.mse(ts[next])});
    return out;
}

}  // namespace

std::vector<MseSample> run_realization(const ExperimentSpec& spec, std::uint64_t stream_index) {
    const RngHandle handle{spec.seed, stream_index};
    Realization r(spec.params, spec.model, spec.algorithm, Rng(handle, Substream::values));
    EventStream stream(spec.params, StreamSpec{spec.model, spec.stop}, handle);
    std::optional<double> horizon;
    if (const auto* h = std::get_if<Horizon>(&spec.stop)) horizon = h->time;
    return replay(r, [&] { return stream.next(); }, spec.sample_times, horizon);
}

std::vector<MseSample> simulate_events(const SystemParams& params, Model model,
                                       Algorithm algorithm, std::span<const Event> events,
                                       const std::optional<std::vector<double>>& sample_times,
                                       RngHandle value_handle) {
    require_valid(params);
    Realization r(params, model, algorithm, Rng(value_handle, Substream::values));
    std::size_t pos = 0;
    auto next = [&]() -> std::optional<Event> {
        if (pos == events.size()) return std::nullopt;
        return events[pos++];
    };
    return replay(r, next, sample_times, std::nullopt);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<MsePoint> aggregate(const ExperimentSpec& spec,
                                const std::vector<std::vector<MseSample>>& runs) {
    const std::size_t per_run = runs.front().size();
    std::vector<MsePoint> points(per_run);
    std::vector<double> column(runs.size());
    for (std::size_t j = 0; j < per_run; ++j) {
        double tsum = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            column[r] = runs[r][j].value;
            tsum += runs[r][j].t;
        }
        points[j].estimate = summarize(column);
        points[j].final_event =
            !spec.sample_times && std::holds_alternative<EventCount>(spec.stop);
        points[j].t = points[j].final_event ? tsum / static_cast<double>(runs.size())
                                            : runs.front()[j].t;
    }
    return points;
}

void set_threads([[maybe_unused]] int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
}

}  // namespace

std::vector<MsePoint> estimate_mse_serial(const ExperimentSpec& spec) {
    require_valid(spec);
    std::vector<std::vector<MseSample>> runs(spec.realizations);
    for (std::size_t r = 0; r < runs.size(); ++r) runs[r] = run_realization(spec, r);
    return aggregate(spec, runs);
}

std::vector<MsePoint> estimate_mse(const ExperimentSpec& spec, int threads) {
    require_valid(spec);
    set_threads(threads);
    std::vector<std::vector<MseSample>> runs(spec.realizations);
    const auto count = static_cast<std::ptrdiff_t>(runs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t r = 0; r < count; ++r)
        runs[static_cast<std::size_t>(r)] = run_realization(spec, static_cast<std::uint64_t>(r));
    return aggregate(spec, runs);
}

// ---------------------------------------------------------------------------

namespace {

void check_pseudo_cdf_spec(const PseudoCdfSpec& spec) {
    require_valid(spec.params);
    if (spec.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (spec.observer == spec.subject || spec.observer >= spec.params.n_agents ||
        spec.subject >= spec.params.n_agents)
        throw std::invalid_argument("observer and subject must be distinct agents");
    if (spec.s_grid.empty()) throw std::invalid_argument("s grid is empty");
    for (std::size_t k = 0; k < spec.s_grid.size(); ++k) {
        if (!(spec.s_grid[k] >= 0.0)) throw std::invalid_argument("s grid must be >= 0");
        if (k > 0 && !(spec.s_grid[k] > spec.s_grid[k - 1]))
            throw std::invalid_argument("s grid must be increasing");
    }
    if (!(spec.measure_time >= spec.s_grid.back()))
        throw std::invalid_argument("measure_time must cover the s grid");
}

std::optional<double> observed_age(const PseudoCdfSpec& spec, std::uint64_t stream_index) {
    const RngHandle handle{spec.seed, stream_index};
    Rng values(handle, Substream::values);
    AgentState state = initial_state(spec.params, values);
    if (spec.measure_time > 0.0) {
        EventStream stream(spec.params, StreamSpec{spec.model, Horizon{spec.measure_time}},
                           handle);
        while (auto ev = stream.next()) apply_event(state, *ev, spec.model, spec.params, values);
    }
    return age_of(state, spec.observer, spec.subject, spec.measure_time);
}

std::vector<PseudoCdfPoint> tabulate(const PseudoCdfSpec& spec,
                                     const std::vector<std::optional<double>>& ages) {
    std::vector<PseudoCdfPoint> out;
    const auto n = static_cast<double>(ages.size());
    for (double s : spec.s_grid) {
        std::size_t hits = 0;
        for (const auto& a : ages)
            if (a && *a <= s) ++hits;
        const double f = static_cast<double>(hits) / n;
        out.push_back({s, f, std::sqrt(f * (1.0 - f) / n)});
    }
    return out;
}

}  // namespace

std::vector<PseudoCdfPoint> empirical_pseudo_cdf_serial(const PseudoCdfSpec& spec) {
    check_pseudo_cdf_spec(spec);
    std::vector<std::optional<double>> ages(spec.realizations);
    for (std::size_t r = 0; r < ages.size(); ++r) ages[r] = observed_age(spec, r);
    return tabulate(spec, ages);
}

std::vector<PseudoCdfPoint> empirical_pseudo_cdf(const PseudoCdfSpec& spec, int threads) {
    check_pseudo_cdf_spec(spec);
    set_threads(threads);
    std::vector<std::optional<double>> ages(spec.realizations);
    const auto count = static_cast<std::ptrdiff_t>(ages.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t r = 0; r < count; ++r)
        ages[static_cast<std::size_t>(r)] = observed_age(spec, static_cast<std::uint64_t>(r));
    return tabulate(spec, ages);
}

// ---------------------------------------------------------------------------

void write_mc_csv_header(std::ostream& os) {
    os << "model,algorithm,N,rho,t,sigma2,mean,stderr,realizations,seed\n";
}

void write_mc_csv_rows(std::ostream& os, const ExperimentSpec& spec,
                       std::span<const MsePoint> points) {
    for (const auto& p : points) {
        const std::string t = p.final_event ? std::string("final") : fmt::format("{:.17g}", p.t);
        os << fmt::format("{},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{},{}\n",
                          to_string(spec.model), to_string(spec.algorithm), spec.params.n_agents,
                          spec.params.rate_ratio(), t, spec.params.sigma2, p.estimate.mean,
                          p.estimate.std_error, p.estimate.n, spec.seed);
    }
}

}  // namespace ocl

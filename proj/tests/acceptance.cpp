// Acceptance suite: one PASS/FAIL line per primary criterion, each with its
// runtime budget. Seeds are fixed; tolerances are the criteria's own.
#include "ocl/bounds.hpp"
#include "ocl/estimators.hpp"
#include "ocl/full_knowledge.hpp"
#include "ocl/montecarlo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace ocl;

namespace {

struct Verdict {
    bool passed = true;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Verdict()> run;
};

ExperimentSpec optimal_spec(std::size_t n, double rho, Model model, double horizon,
                            std::size_t realizations, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.params = SystemParams::from_ratio(n, rho);
    spec.model = model;
    spec.algorithm = Algorithm::optimal;
    spec.stop = Horizon{horizon};
    spec.realizations = realizations;
    spec.seed = seed;
    return spec;
}

double bound_for(Model model, const SystemParams& p, double t) {
    return model == Model::ping ? ping_bound(p, t) : sis_bound(p, t);
}

// ---------------------------------------------------------------------------

Verdict initialization_mse() {
    Verdict v;
    const std::vector<double> rhos = {0.0, 0.5, 1.0, 2.0, 10.0, 50.0, 100.0, 1000.0};
    int inexact = 0;
    for (double rho : rhos) {
        const auto p = SystemParams::from_ratio(10, rho);
        inexact += ping_bound(p, 0.0) != 0.09;
        inexact += sis_bound(p, 0.0) != 0.09;
    }
    if (inexact > 0) v.passed = false;
    v.detail = fmt::format("t=0 bounds == 0.09 at {}/{} points", 2 * rhos.size() - inexact,
                           2 * rhos.size());
    for (auto model : {Model::ping, Model::gossip}) {
        auto spec = optimal_spec(10, 10.0, model, 1.0, 10000, model == Model::ping ? 101 : 102);
        spec.sample_times = std::vector<double>{0.0};
        const auto e = estimate_mse(spec)[0].estimate;
        const double z = (e.mean - 0.09) / e.std_error;
        if (!(std::abs(z) <= 3.0)) v.passed = false;
        v.detail += fmt::format("; MC C(0) {} = {:.5f} +- {:.5f} (z={:+.2f})", to_string(model),
                                e.mean, e.std_error, z);
    }
    return v;
}

Verdict closed_form_vs_quadrature() {
    double worst = 0.0;
    std::string where;
    for (std::size_t n : {2, 5, 10, 20}) {
        for (double rho : {0.5, 1.0, 10.0, 100.0}) {
            const auto p = SystemParams::from_ratio(n, rho);
            const auto gen = build_generator(p);
            for (double t : {0.1, 1.0, 10.0, infinite_time}) {
                const double dp = std::abs(
                    ping_bound(p, t) -
                    generic_bound([&](double s) { return ping_pdf(s, p.comm_rate); }, p, t));
                const double ds = std::abs(
                    sis_bound(p, t) - generic_bound([&](double s) { return sis_pdf(gen, s); }, p, t));
                for (auto [d, m] : {std::pair{dp, "ping"}, std::pair{ds, "sis"}}) {
                    if (d > worst || where.empty()) {
                        worst = std::max(worst, d);
                        where = fmt::format("{} N={} rho={} t={}", m, n, rho, t);
                    }
                }
            }
        }
    }
    return {worst <= 1e-8,
            fmt::format("128 comparisons, max |closed - quadrature| = {:.2e} ({})", worst, where)};
}

Verdict bound_equality() {
    Verdict v;
    std::string worst;
    double worst_z = 0.0;
    int points = 0;
    for (auto model : {Model::ping, Model::gossip}) {
        for (std::size_t n : {5, 10}) {
            for (double rho : {1.0, 10.0, 50.0}) {
                const auto params = SystemParams::from_ratio(n, rho);
                const double horizon = steady_state_horizon(params, model);
                const auto spec = optimal_spec(n, rho, model, horizon, 4000, 300 + points);
                const auto e = estimate_mse(spec)[0].estimate;
                const double bound = bound_for(model, params, horizon);
                const double z = (e.mean - bound) / e.std_error;
                if (!(std::abs(z) <= 3.0)) v.passed = false;
                if (std::abs(z) >= std::abs(worst_z)) {
                    worst_z = z;
                    worst = fmt::format("{} N={} rho={}: {:.5f} vs {:.5f}", to_string(model), n,
                                        rho, e.mean, bound);
                }
                ++points;
            }
        }
    }
    v.detail = fmt::format("{} points x 4000 realizations at the steady-state horizon, "
                           "worst z={:+.2f} ({})",
                           points, worst_z, worst);
    return v;
}

Verdict gossip_comparison() {
    Verdict v;
    const std::vector<std::size_t> sizes = {5, 10, 20};
    std::vector<double> rhos;
    for (int k = 0; k <= 10; ++k) rhos.push_back(std::pow(10.0, k / 5.0));
    // gossip[n][rho] for the steady-state protocol
    std::vector<std::vector<double>> gossip(sizes.size(), std::vector<double>(rhos.size()));
    std::vector<std::vector<double>> sis(sizes.size(), std::vector<double>(rhos.size()));
    int order_failures = 0;
    int checked = 0;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        for (std::size_t b = 0; b < rhos.size(); ++b) {
            ExperimentSpec spec;
            spec.params = SystemParams::from_ratio(sizes[a], rhos[b]);
            spec.model = Model::gossip;
            spec.algorithm = Algorithm::gossip;
            spec.realizations = 500;
            spec.seed = 600 + 100 * a + b;
            const double s = sis_bound_asymptotic(spec.params);
            const double p = ping_bound(spec.params, infinite_time);
            sis[a][b] = s;
            if (!(s >= p)) ++order_failures;
            // literal protocol: read after the 200th event
            spec.stop = EventCount{200};
            const auto literal = estimate_mse(spec)[0].estimate;
            // steady-state proxy
            spec.stop = Horizon{steady_state_horizon(spec.params, Model::gossip)};
            const auto steady = estimate_mse(spec)[0].estimate;
            gossip[a][b] = steady.mean;
            for (const auto& e : {literal, steady})
                if (!(e.mean + 3.0 * e.std_error >= s)) ++order_failures;
            checked += 3;
        }
    }
    if (order_failures > 0) v.passed = false;
    v.detail = fmt::format("ordering gossip >= SIS >= ping: {}/{} ok", checked - order_failures,
                           checked);

    int monotone_failures = 0;
    for (std::size_t b = 0; b < rhos.size(); ++b)
        for (std::size_t a = 1; a < sizes.size(); ++a)
            if (!(sis[a][b] < sis[a - 1][b])) ++monotone_failures;
    if (monotone_failures > 0) v.passed = false;
    v.detail += fmt::format("; SIS bound decreasing in N at {}/{} rho", rhos.size() * 2 -
                            monotone_failures, rhos.size() * 2);

    // relative spread across N, (max - min) / mean
    auto spread = [&](const std::vector<std::vector<double>>& m, std::size_t b) {
        double lo = m[0][b], hi = m[0][b], sum = 0.0;
        for (std::size_t a = 0; a < sizes.size(); ++a) {
            lo = std::min(lo, m[a][b]);
            hi = std::max(hi, m[a][b]);
            sum += m[a][b];
        }
        return (hi - lo) / (sum / static_cast<double>(sizes.size()));
    };
    std::string spreads;
    for (std::size_t b = 0; b < rhos.size(); ++b) {
        const double g = spread(gossip, b);
        const double s = spread(sis, b);
        if (rhos[b] <= 10.0 + 1e-9 && !(g < 0.5 * s)) v.passed = false;
        spreads += fmt::format("{}{:.3g}:{:.2f}/{:.2f}", b ? " " : "", rhos[b], g, s);
    }
    v.detail += "; N-spread gossip/SIS by rho (gossip < SIS/2 required for rho <= 10): " + spreads;
    return v;
}

Verdict appendix_b_accuracy() {
    Verdict v;
    double prev = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    bool monotone = true;
    for (int rho = 50; rho <= 500; rho += 5) {
        const auto p = SystemParams::from_ratio(10, rho);
        const double exact = sis_bound_asymptotic(p);
        const double gap = std::abs(sis_bound_approx(p) - exact) / exact;
        worst = std::max(worst, gap);
        if (!(gap < prev)) monotone = false;
        prev = gap;
    }
    if (!(worst < 0.10) || !monotone) v.passed = false;
    v.detail = fmt::format("N=10 rho in [50,500]: max gap {:.2f}% (rho=50), {} shrinking, {:.3f}% at 500",
                           100 * worst, monotone ? "monotone" : "NOT monotone", 100 * prev);

    // Least-squares fit of rho * E(rho) / c = B + a / rho over large rho.
    auto fit = [](std::size_t n) {
        const std::vector<double> rhos = {1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double rho : rhos) {
            const auto p = SystemParams::from_ratio(n, rho);
            const double y = rho * sis_bound_asymptotic(p) / p.initial_mse();
            const double x = 1.0 / rho;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = static_cast<double>(rhos.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        return (sy - slope * sx) / m;
    };
    for (std::size_t n : {10, 20, 50}) {
        const double b = fit(n);
        const double rel = std::abs(b - sis_approx_bracket(n)) / sis_approx_bracket(n);
        if (!(rel < 0.01)) v.passed = false;
        v.detail += fmt::format("; N={} fitted coefficient {:.4f} vs bracket {:.4f} ({:.3f}%)", n, b,
                                sis_approx_bracket(n), 100 * rel);
    }
    // Growth in log N tells the two printed log coefficients apart.
    const double slope = (fit(160) - fit(80)) / std::log(2.0);
    if (!(std::abs(slope - 2.0) < 0.25)) v.passed = false;
    v.detail += fmt::format("; d coeff / d log N between N=80 and 160: {:.3f} (2 expected)", slope);
    return v;
}

Verdict pseudo_cdf() {
    Verdict v;
    std::vector<double> grid;
    for (int k = 0; k < 20; ++k) grid.push_back(0.1 * k);
    int misses = 0;
    int points = 0;
    double worst_z = 0.0;
    for (auto model : {Model::ping, Model::gossip}) {
        for (std::size_t n : {2, 10}) {
            PseudoCdfSpec spec;
            spec.params = SystemParams::from_ratio(n, 2.0);
            spec.model = model;
            spec.s_grid = grid;
            spec.measure_time = 2.0;
            spec.realizations = 10000;
            spec.seed = 700 + n + (model == Model::ping ? 0 : 50);
            const auto gen = build_generator(spec.params);
            for (const auto& pt : empirical_pseudo_cdf(spec)) {
                const double f = model == Model::ping ? 1.0 - std::exp(-spec.params.comm_rate * pt.s)
                                                      : sis_pseudo_cdf(gen, pt.s);
                const double se = std::sqrt(f * (1.0 - f) / spec.realizations);
                const double dev = std::abs(pt.fraction - f);
                const bool ok = se > 0.0 ? dev <= 3.0 * se : dev == 0.0;
                misses += !ok;
                if (se > 0.0) worst_z = std::max(worst_z, dev / se);
                ++points;
            }
        }
    }
    if (misses > 0) v.passed = false;
    v.detail = fmt::format("{}/{} grid points within 3 binomial SE (ping, gossip x N in {{2,10}}, "
                           "1e4 realizations), worst |z|={:.2f}",
                           points - misses, points, worst_z);
    return v;
}

Verdict lemma4() {
    Verdict v;
    std::string parts;
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto r = oracle::check_mixed_rv(p, 1.0, 10'000'000, 800);
        const double expected = mixed_rv_mse(p, 1.0);
        const double rel = expected > 0.0 ? std::abs(r.mse_optimal - expected) / expected
                                          : std::abs(r.mse_optimal);
        const bool close = expected > 0.0 ? rel < 0.005 : r.mse_optimal == 0.0;
        // ties are only possible with a competitor identical to p*Z
        const bool dominates =
            std::all_of(r.mse_competitors.begin(), r.mse_competitors.end(),
                        [&](double m) { return r.mse_optimal <= m; });
        if (!close || !dominates) v.passed = false;
        parts += fmt::format("{}p={}: {:.5f} ({:.3f}%){}", parts.empty() ? "" : ", ", p,
                             r.mse_optimal, 100 * rel, dominates ? "" : " NOT dominant");
    }
    v.detail = "1e7 draws per p, MSE of p*Z: " + parts;
    return v;
}

Verdict knowledge_sufficiency() {
    const auto r = oracle::check_knowledge_sufficiency(900, 1000);
    return {r.mismatches == 0 && r.streams == 1000,
            fmt::format("{} streams, {} comparisons, {} mismatches", r.streams, r.comparisons,
                        r.mismatches)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"initialization-mse", 10, initialization_mse},
        {"closed-form-vs-quadrature", 30, closed_form_vs_quadrature},
        {"optimal-estimator-attains-bounds", 600, bound_equality},
        {"gossip-vs-bounds-fig6", 300, gossip_comparison},
        {"large-rho-approximation", 60, appendix_b_accuracy},
        {"pseudo-cdf", 120, pseudo_cdf},
        {"mixed-rv-estimator", 30, lemma4},
        {"knowledge-sufficiency", 30, knowledge_sufficiency},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_seconds;
        const bool ok = v.passed && in_time;
        failures += !ok;
        fmt::print("[{}] {} ({:.1f} s, budget {:.0f} s{}): {}\n", ok ? "PASS" : "FAIL", c.name,
                   secs, c.budget_seconds, in_time ? "" : ", OVER BUDGET", v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

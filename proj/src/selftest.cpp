#include "ocl/selftest.hpp"

#include "ocl/bounds.hpp"
#include "ocl/estimators.hpp"
#include "ocl/full_knowledge.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ocl {

namespace {

CheckResult generator_check(const SelftestOptions& opts) {
    CheckResult r{"generator-column-sums", true, ""};
    for (std::size_t n : {2, 3, 5, 10, 20}) {
        for (double rho : {0.5, 10.0, 100.0}) {
            auto gen = build_generator(SystemParams::from_ratio(n, rho));
            if (opts.corrupt_generator) gen.sub[0] = -gen.sub[0];
            const auto sums = gen.column_sums();
            const double worst = std::transform_reduce(
                sums.begin(), sums.end(), 0.0, [](double a, double b) { return std::max(a, b); },
                [](double x) { return std::abs(x); });
            const bool nonneg = std::all_of(gen.sub.begin(), gen.sub.end(),
                                            [](double x) { return x >= 0.0; }) &&
                                std::all_of(gen.super.begin(), gen.super.end(),
                                            [](double x) { return x >= 0.0; });
            if (worst > 1e-12 * (1.0 + gen.max_exit_rate()) || !nonneg) {
                r.passed = false;
                r.detail = fmt::format("N={} rho={}: max |column sum| {:.3g}, off-diagonals {}",
                                       n, rho, worst, nonneg ? "ok" : "negative");
                return r;
            }
        }
    }
    r.detail = "15 generators";
    return r;
}

CheckResult propagation_check() {
    CheckResult r{"uniformization-vs-ode", true, ""};
    double worst = 0.0;
    for (std::size_t n : {2, 5, 10}) {
        for (double rho : {1.0, 10.0}) {
            const auto gen = build_generator(SystemParams::from_ratio(n, rho));
            for (double s : {0.05, 0.5, 2.0}) {
                const auto a = propagate(gen, s);
                const auto b = propagate_ode(gen, s);
                for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
            }
        }
    }
    r.passed = worst <= 1e-9;
    r.detail = fmt::format("max deviation {:.3g}", worst);
    return r;
}

CheckResult quadrature_check(bool sis) {
    CheckResult r{sis ? "sis-closed-form-vs-quadrature" : "ping-closed-form-vs-quadrature", true,
                  ""};
    double worst = 0.0;
    for (std::size_t n : {2, 10}) {
        for (double rho : {0.5, 10.0}) {
            const auto params = SystemParams::from_ratio(n, rho);
            for (double t : {0.1, 1.0, infinite_time}) {
                double closed, quad;
                if (sis) {
                    const auto gen = build_generator(params);
                    closed = sis_bound(params, t);
                    quad = generic_bound([&](double s) { return sis_pdf(gen, s); }, params, t);
                } else {
                    closed = ping_bound(params, t);
                    quad = generic_bound([&](double s) { return ping_pdf(s, params.comm_rate); },
                                         params, t);
                }
                worst = std::max(worst, std::abs(closed - quad));
            }
        }
    }
    r.passed = worst <= 1e-8;
    r.detail = fmt::format("max deviation {:.3g}", worst);
    return r;
}

CheckResult initial_value_check() {
    CheckResult r{"initial-mse", true, ""};
    const auto params = SystemParams::from_ratio(10, 7.0);
    const double ping0 = ping_bound(params, 0.0);
    const double sis0 = sis_bound(params, 0.0);
    r.passed = std::abs(ping0 - 0.09) <= 1e-15 && std::abs(sis0 - 0.09) <= 1e-15;
    r.detail = fmt::format("ping {:.17g}, sis {:.17g}", ping0, sis0);
    return r;
}

CheckResult sufficiency_check(const SelftestOptions& opts) {
    CheckResult r{"knowledge-sufficiency", true, ""};
    const auto rep = oracle::check_knowledge_sufficiency(opts.seed, 200);
    r.passed = rep.mismatches == 0;
    r.detail = fmt::format("{} streams, {} comparisons, {} mismatches", rep.streams,
                           rep.comparisons, rep.mismatches);
    return r;
}

CheckResult mixed_rv_check(const SelftestOptions& opts) {
    CheckResult r{"mixed-rv-estimator", true, ""};
    for (double p : {0.0, 0.5, 1.0}) {
        const auto rep = oracle::check_mixed_rv(p, 1.0, 200000, opts.seed);
        const double expected = mixed_rv_mse(p, 1.0);
        const bool close = std::abs(rep.mse_optimal - expected) <= 3.0 * rep.stderr_optimal + 1e-15;
        const bool dominates = std::all_of(rep.mse_competitors.begin(), rep.mse_competitors.end(),
                                           [&](double m) { return m >= rep.mse_optimal; });
        if (!close || !dominates) {
            r.passed = false;
            r.detail = fmt::format("p={}: mse {:.6g} expected {:.6g}{}", p, rep.mse_optimal,
                                   expected, dominates ? "" : ", beaten by a competitor");
            return r;
        }
    }
    r.detail = "p in {0, 0.5, 1}";
    return r;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
    return {generator_check(opts),      propagation_check(), quadrature_check(false),
            quadrature_check(true),     initial_value_check(), sufficiency_check(opts),
            mixed_rv_check(opts)};
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        os << fmt::format("[{}] {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace ocl

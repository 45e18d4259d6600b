#include "ocl/bounds.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ocl {

// ---------------------------------------------------------------------------
// Generator

std::vector<double> GeneratorMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = diag[k] * x[k];
        if (k + 1 < n) acc += super[k] * x[k + 1];
        if (k > 0) acc += sub[k - 1] * x[k - 1];
        y[k] = acc;
    }
    return y;
}

std::vector<double> GeneratorMatrix::apply_transpose(std::span<const double> x) const {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = diag[k] * x[k];
        if (k + 1 < n) acc += sub[k] * x[k + 1];
        if (k > 0) acc += super[k - 1] * x[k - 1];
        y[k] = acc;
    }
    return y;
}

double GeneratorMatrix::max_exit_rate() const {
    double q = 0.0;
    for (double d : diag) q = std::max(q, -d);
    return q;
}

std::vector<double> GeneratorMatrix::column_sums() const {
    std::vector<double> sums(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = diag[k];
        if (k + 1 < n) s += sub[k];
        if (k > 0) s += super[k - 1];
        sums[k] = s;
    }
    return sums;
}

GeneratorMatrix build_generator(const SystemParams& params) {
    if (params.n_agents < 2) throw std::invalid_argument("generator needs N >= 2");
    const std::size_t n = params.n_agents;
    const double nm1 = static_cast<double>(n - 1);
    GeneratorMatrix g;
    g.n = n;
    g.diag.resize(n);
    g.super.resize(n - 1);
    g.sub.resize(n - 1);
    g.w.resize(n);
    g.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1);
        const double contacts = k * (static_cast<double>(n) - k) / nm1;
        g.v[i] = contacts;
        g.w[i] = (k - 1.0) / nm1;
        g.diag[i] = -(contacts * params.comm_rate + (k - 1.0) * params.lambda_r);
        if (i + 1 < n) {
            g.super[i] = k * params.lambda_r;
            g.sub[i] = contacts * params.comm_rate;
        }
    }
    return g;
}

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (rhs.size() != n || sub.size() + 1 != n || super.size() + 1 != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
    std::vector<double> c(n), x(n);
    double denom = diag[0];
    if (denom == 0.0) throw std::domain_error("solve_tridiagonal: singular system");
    c[0] = n > 1 ? super[0] / denom : 0.0;
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - sub[i - 1] * c[i - 1];
        if (denom == 0.0) throw std::domain_error("solve_tridiagonal: singular system");
        c[i] = i + 1 < n ? super[i] / denom : 0.0;
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

// ---------------------------------------------------------------------------
// Transient distribution

namespace {

// Poisson mean per uniformization step; keeps exp(-q dt) far from underflow.
constexpr double max_step_mass = 20.0;
constexpr double tail_tolerance = 1e-17;

// exp(A dt) p for one step with q*dt <= max_step_mass. B = I + A/q keeps
// every partial term on the simplex.
void uniformization_step(const GeneratorMatrix& gen, double q, double dt,
                         std::vector<double>& p, std::vector<double>& term,
                         std::vector<double>& next) {
    const std::size_t n = gen.n;
    const double mass = q * dt;
    double weight = std::exp(-mass);
    term = p;
    for (std::size_t i = 0; i < n; ++i) p[i] = weight * term[i];
    for (std::size_t k = 1;; ++k) {
        // term <- B term
        for (std::size_t i = 0; i < n; ++i) {
            double acc = term[i] + gen.diag[i] / q * term[i];
            if (i + 1 < n) acc += gen.super[i] / q * term[i + 1];
            if (i > 0) acc += gen.sub[i - 1] / q * term[i - 1];
            next[i] = acc;
        }
        std::swap(term, next);
        weight *= mass / static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i) p[i] += weight * term[i];
        const double ratio = mass / static_cast<double>(k + 1);
        if (ratio < 0.5 && weight * ratio / (1.0 - ratio) < tail_tolerance) break;
    }
}

}  // namespace

std::vector<double> propagate(const GeneratorMatrix& gen, double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("propagate: s must be finite and >= 0");
    std::vector<double> p(gen.n, 0.0);
    p[0] = 1.0;
    const double q = gen.max_exit_rate();
    if (q == 0.0 || s == 0.0) return p;
    const auto steps = static_cast<std::size_t>(std::ceil(q * s / max_step_mass));
    const double dt = s / static_cast<double>(steps);
    std::vector<double> term(gen.n), next(gen.n);
    for (std::size_t k = 0; k < steps; ++k) uniformization_step(gen, q, dt, p, term, next);
    return p;
}

std::vector<double> propagate_ode(const GeneratorMatrix& gen, double s, double rel_tol) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    State p(gen.n, 0.0);
    p[0] = 1.0;
    if (s == 0.0) return p;
    auto rhs = [&gen](const State& x, State& dxdt, double) { dxdt = gen.apply(x); };
    auto stepper = odeint::make_controlled(rel_tol * 1e-3, rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
    const double dt0 = std::min(s, 0.1 / std::max(gen.max_exit_rate(), 1.0));
    odeint::integrate_adaptive(stepper, rhs, p, 0.0, s, dt0);
    return p;
}

std::vector<double> stationary_distribution(const GeneratorMatrix& gen) {
    // pi[k+1]/pi[k] = A[k+1][k] / A[k][k+1], accumulated in log space.
    std::vector<double> logp(gen.n, 0.0);
    std::vector<double> pi(gen.n, 0.0);
    std::size_t reachable = 1;
    for (std::size_t k = 0; k + 1 < gen.n; ++k) {
        if (gen.sub[k] == 0.0) break;
        logp[k + 1] = logp[k] + std::log(gen.sub[k]) - std::log(gen.super[k]);
        ++reachable;
    }
    const double top = *std::max_element(logp.begin(), logp.begin() + reachable);
    double total = 0.0;
    for (std::size_t k = 0; k < reachable; ++k) total += pi[k] = std::exp(logp[k] - top);
    for (auto& x : pi) x /= total;
    return pi;
}

double sis_pseudo_cdf(const GeneratorMatrix& gen, double s) {
    const auto p = propagate(gen, s);
    double f = 0.0;
    for (std::size_t k = 0; k < gen.n; ++k) f += gen.w[k] * p[k];
    return f;
}

double sis_pdf(const GeneratorMatrix& gen, double s) {
    const auto p = propagate(gen, s);
    const auto u = gen.apply_transpose(gen.w);
    double f = 0.0;
    for (std::size_t k = 0; k < gen.n; ++k) f += u[k] * p[k];
    return f;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

namespace {

void check_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double ping_pdf(double s, double lambda_p) {
    if (!(s >= 0.0)) throw std::invalid_argument("ping_pdf: s must be >= 0");
    return lambda_p * std::exp(-lambda_p * s);
}

double ping_bound(const SystemParams& params, double t) {
    require_valid(params);
    check_time(t);
    const double rho = params.rate_ratio();
    if (rho == 0.0) return params.initial_mse();
    if (std::isinf(t)) return params.initial_mse() * (2.0 / (2.0 + rho));
    // 1/(1+rho/2) + e/(1+2/rho) over a common denominator; exactly 1 at t=0.
    const double e = std::exp(-(params.comm_rate + 2.0 * params.lambda_r) * t);
    return params.initial_mse() * ((2.0 + rho * e) / (2.0 + rho));
}

double sis_bound(const SystemParams& params, double t) {
    require_valid(params);
    check_time(t);
    if (std::isinf(t)) return sis_bound_asymptotic(params);
    const auto gen = build_generator(params);
    const double shift = 2.0 * params.lambda_r;
    // exp((A - 2 lambda_r) t) e_1 = exp(-2 lambda_r t) P(t)
    auto rhs = propagate(gen, t);
    const double decay = std::exp(-shift * t);
    for (auto& x : rhs) x *= decay;
    rhs[0] -= 1.0;
    std::vector<double> shifted(gen.diag);
    for (auto& d : shifted) d -= shift;
    const auto z = solve_tridiagonal(gen.sub, shifted, gen.super, rhs);
    const auto u = gen.apply_transpose(gen.w);
    return params.initial_mse() * (1.0 - dot(u, z));
}

double sis_bound_asymptotic(const SystemParams& params) {
    require_valid(params);
    const auto gen = build_generator(params);
    const double shift = 2.0 * params.lambda_r;
    std::vector<double> diag(gen.n), sub(gen.sub), super(gen.super);
    for (std::size_t k = 0; k < gen.n; ++k) diag[k] = shift - gen.diag[k];
    for (auto& x : sub) x = -x;
    for (auto& x : super) x = -x;
    std::vector<double> e1(gen.n, 0.0);
    e1[0] = 1.0;
    const auto z = solve_tridiagonal(sub, diag, super, e1);
    const auto u = gen.apply_transpose(gen.w);
    return params.initial_mse() * (1.0 - dot(u, z));
}

double sis_approx_bracket(std::size_t n) {
    if (n < 4) throw std::invalid_argument("N must be >= 4");
    const double nn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t k = 2; k + 2 <= n; ++k) {
        const double kk = static_cast<double>(k);
        sum += nn / (kk * (nn - kk));
    }
    return sum + (3.0 * nn - 1.0) / (nn - 1.0);
}

double sis_log_bracket(std::size_t n) {
    if (n < 4) throw std::invalid_argument("N must be >= 4");
    const double nn = static_cast<double>(n);
    return 3.5 + 2.0 * std::log((nn - 2.0) / 2.0) + (nn - 5.0) / ((nn - 2.0) * (nn - 1.0));
}

namespace {

double expansion(const SystemParams& params, double bracket) {
    require_valid(params);
    const double rho = params.rate_ratio();
    if (!(rho > 0.0)) throw std::invalid_argument("large-rho expansion needs rho > 0");
    // rho_tilde^{-1} / (N-1) == 1 / rho
    return params.initial_mse() * bracket / rho;
}

}  // namespace

double sis_bound_approx(const SystemParams& params) {
    return expansion(params, sis_approx_bracket(params.n_agents));
}

double sis_log_lower_bound(const SystemParams& params) {
    return expansion(params, sis_log_bracket(params.n_agents));
}

// ---------------------------------------------------------------------------
// Quadrature bound

double generic_bound(const PseudoPdf& pdf, const SystemParams& params, double t) {
    require_valid(params);
    check_time(t);
    using boost::math::quadrature::gauss_kronrod;
    constexpr unsigned max_depth = 20;
    constexpr double tol = 1e-12;
    const double two_lr = 2.0 * params.lambda_r;

    // Mass beyond exp(-2 lambda_r s) < 1e-30 cannot move the bound; the mass
    // check stops there so that slowly decaying densities stay cheap.
    const double mass_end = std::min(t, 35.0 / params.lambda_r);
    double mass = 0.0;
    if (mass_end > 0.0)
        mass = gauss_kronrod<double, 61>::integrate(pdf, 0.0, mass_end, max_depth, tol);
    if (mass > 1.0 + 1e-6)
        throw std::invalid_argument(fmt::format("pseudo-PDF mass {} exceeds 1", mass));

    auto damped = [&](double s) {
        const double decay = std::exp(-two_lr * s);
        return decay == 0.0 ? 0.0 : pdf(s) * decay;
    };
    double integral = 0.0;
    if (t > 0.0) integral = gauss_kronrod<double, 61>::integrate(damped, 0.0, t, max_depth, tol);
    return params.initial_mse() * (1.0 - integral);
}

// ---------------------------------------------------------------------------
// Curves

std::string_view to_string(BoundModel m) {
    switch (m) {
        case BoundModel::ping: return "ping";
        case BoundModel::sis: return "sis";
        case BoundModel::sis_approx: return "sis-approx";
        case BoundModel::sis_log: return "sis-log";
        case BoundModel::generic: return "generic";
    }
    return "?";
}

BoundModel parse_bound_model(std::string_view s) {
    if (s == "ping") return BoundModel::ping;
    if (s == "sis") return BoundModel::sis;
    if (s == "sis-approx") return BoundModel::sis_approx;
    if (s == "sis-log") return BoundModel::sis_log;
    if (s == "generic") return BoundModel::generic;
    throw std::invalid_argument("unknown bound model: " + std::string(s));
}

double evaluate_bound(BoundModel model, const SystemParams& params, double t) {
    switch (model) {
        case BoundModel::ping: return ping_bound(params, t);
        case BoundModel::sis: return sis_bound(params, t);
        case BoundModel::sis_approx: return sis_bound_approx(params);
        case BoundModel::sis_log: return sis_log_lower_bound(params);
        case BoundModel::generic: break;
    }
    throw std::invalid_argument("generic bounds need a pseudo-PDF; use generic_bound");
}

namespace {

BoundCurve empty_curve(BoundModel model, const SystemParams& base, std::span<const double> rhos,
                       double t) {
    BoundCurve c{model, base.n_agents, t, base.sigma2, {}};
    c.points.resize(rhos.size());
    for (std::size_t i = 0; i < rhos.size(); ++i) c.points[i].rho = rhos[i];
    return c;
}

SystemParams at_ratio(const SystemParams& base, double rho) {
    SystemParams p = base;
    p.comm_rate = rho * base.lambda_r;
    return p;
}

}  // namespace

BoundCurve evaluate_curve_serial(BoundModel model, const SystemParams& base,
                                 std::span<const double> rhos, double t) {
    auto curve = empty_curve(model, base, rhos, t);
    for (auto& pt : curve.points) pt.value = evaluate_bound(model, at_ratio(base, pt.rho), t);
    return curve;
}

BoundCurve evaluate_curve(BoundModel model, const SystemParams& base,
                          std::span<const double> rhos, double t) {
    auto curve = empty_curve(model, base, rhos, t);
    // Validate once up front so no exception escapes the parallel region.
    if (!rhos.empty()) (void)evaluate_bound(model, at_ratio(base, rhos.front()), t);
    for (double rho : rhos)
        if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
    if ((model == BoundModel::sis_approx || model == BoundModel::sis_log))
        for (double rho : rhos)
            if (!(rho > 0.0)) throw std::invalid_argument("large-rho expansion needs rho > 0");
    const auto count = static_cast<std::ptrdiff_t>(curve.points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        auto& pt = curve.points[static_cast<std::size_t>(i)];
        pt.value = evaluate_bound(model, at_ratio(base, pt.rho), t);
    }
    return curve;
}

namespace {

std::string format_time(double t) {
    return std::isinf(t) ? std::string("inf") : fmt::format("{:.17g}", t);
}

}  // namespace

void write_bound_csv_header(std::ostream& os) { os << "model,N,rho,t,sigma2,value\n"; }

void write_bound_csv_rows(std::ostream& os, const BoundCurve& curve) {
    for (const auto& pt : curve.points)
        os << fmt::format("{},{},{:.17g},{},{:.17g},{:.17g}\n", to_string(curve.model),
                          curve.n_agents, pt.rho, format_time(curve.t), curve.sigma2, pt.value);
}

}  // namespace ocl

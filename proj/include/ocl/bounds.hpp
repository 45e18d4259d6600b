#pragma once

#include "ocl/params.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace ocl {

inline constexpr double infinite_time = std::numeric_limits<double>::infinity();

/// Tridiagonal transition-rate matrix of the birth-death chain counting the
/// agents that hold sufficiently fresh information about a fixed peer.
///
/// With 1-based state k (number of holders, the peer itself included):
///   A[k][k]   = -(k(N-k)/(N-1) lambda_c + (k-1) lambda_r)
///   A[k][k+1] = k lambda_r
///   A[k+1][k] = k(N-k)/(N-1) lambda_c
/// Storage is 0-based: diag[k], super[k] = A[k][k+1], sub[k] = A[k+1][k].
struct GeneratorMatrix {
    std::size_t n = 0;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> sub;
    /// w[k] = (k-1)/(N-1): fraction of other agents among k holders.
    std::vector<double> w;
    /// v[k] = k(N-k)/(N-1).
    std::vector<double> v;

    /// A x.
    std::vector<double> apply(std::span<const double> x) const;
    /// A^T x.
    std::vector<double> apply_transpose(std::span<const double> x) const;
    /// Largest exit rate max_k |A[k][k]|.
    double max_exit_rate() const;
    /// Column sums of A; all zero for a valid generator.
    std::vector<double> column_sums() const;
};

GeneratorMatrix build_generator(const SystemParams& params);

/// Solves the tridiagonal system with sub-, main and super-diagonals.
/// Thomas elimination without pivoting; the callers' matrices are
/// diagonally dominant.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super, std::span<const double> rhs);

/// P(s) = exp(A s) e_1 by uniformization (truncation error below 1e-12).
std::vector<double> propagate(const GeneratorMatrix& gen, double s);

/// Same quantity by adaptive Dormand-Prince integration of dP/ds = A P.
std::vector<double> propagate_ode(const GeneratorMatrix& gen, double s, double rel_tol = 1e-10);

/// Limit of P(s) as s grows, from the detailed-balance recurrence.
std::vector<double> stationary_distribution(const GeneratorMatrix& gen);

/// Pseudo-CDF w^T exp(A s) e_1 of the information age under the Gossip model.
double sis_pseudo_cdf(const GeneratorMatrix& gen, double s);
/// Pseudo-PDF w^T A exp(A s) e_1.
double sis_pdf(const GeneratorMatrix& gen, double s);

/// Pseudo-PDF of the information age under the Ping model.
double ping_pdf(double s, double lambda_p);

/// Lower bound on E[C(t)] for the Ping model; t may be infinite_time.
double ping_bound(const SystemParams& params, double t);

/// Lower bound on E[C(t)] for the Gossip model. Infinite t falls through to
/// sis_bound_asymptotic.
double sis_bound(const SystemParams& params, double t);
/// t -> infinity limit of sis_bound.
double sis_bound_asymptotic(const SystemParams& params);

/// Bracket of the large-rho expansion:
/// sum_{k=2}^{N-2} N/(k(N-k)) + (3N-1)/(N-1).
double sis_approx_bracket(std::size_t n);
/// Trapezoid lower estimate of that bracket:
/// 7/2 + 2 log((N-2)/2) + (N-5)/((N-2)(N-1)).
double sis_log_bracket(std::size_t n);

/// (N-1)/N^2 sigma^2 * bracket / rho, the first-order large-rho expansion of
/// sis_bound_asymptotic. Requires N >= 4 and rho > 0.
double sis_bound_approx(const SystemParams& params);
/// Same with the trapezoid bracket.
double sis_log_lower_bound(const SystemParams& params);

using PseudoPdf = std::function<double(double)>;

/// (N-1)/N^2 (1 - int_0^t pdf(s) exp(-2 lambda_r s) ds) sigma^2 by adaptive
/// Gauss-Kronrod quadrature. Rejects a pdf with mass above 1 + 1e-6.
double generic_bound(const PseudoPdf& pdf, const SystemParams& params, double t);

enum class BoundModel { ping, sis, sis_approx, sis_log, generic };

std::string_view to_string(BoundModel m);
BoundModel parse_bound_model(std::string_view s);

/// Evaluates one bound model; sis_approx and sis_log ignore t.
double evaluate_bound(BoundModel model, const SystemParams& params, double t);

struct BoundPoint {
    double rho = 0.0;
    double value = 0.0;
};

struct BoundCurve {
    BoundModel model = BoundModel::ping;
    std::size_t n_agents = 0;
    double t = 0.0;
    double sigma2 = 1.0;
    std::vector<BoundPoint> points;
};

/// Bound values over a rho grid (comm_rate = rho * lambda_r), OpenMP-parallel
/// over grid points.
BoundCurve evaluate_curve(BoundModel model, const SystemParams& base,
                          std::span<const double> rhos, double t);
/// Serial reference of evaluate_curve.
BoundCurve evaluate_curve_serial(BoundModel model, const SystemParams& base,
                                 std::span<const double> rhos, double t);

/// CSV with header `model,N,rho,t,sigma2,value`.
void write_bound_csv_header(std::ostream& os);
void write_bound_csv_rows(std::ostream& os, const BoundCurve& curve);

}  // namespace ocl

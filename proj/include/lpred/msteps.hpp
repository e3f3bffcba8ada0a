#ifndef LPRED_MSTEPS_HPP
#define LPRED_MSTEPS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lpred/hardy.hpp"
#include "lpred/measure.hpp"

namespace lpred {

/**
 * m-steps-ahead prediction: the known past is { e_x : x >= m }, so the
 * prediction error is governed by the first m Taylor coefficients of the
 * outer function h with |h|^2 = w.  All operations are density-only.
 */

/** Status of the zero-free-disc requirement on the truncated outer polynomial. */
enum class root_condition {
    holds,        ///< checked and satisfied (p outside {1,2})
    fails,        ///< checked and violated (reported only via the error)
    not_required  ///< p in {1,2}: the projection formula needs no root condition
};

struct mstep_result {
    std::size_t m = 1;
    double p = 0.0;  ///< 0 marks a p-independent (distance-only) result
    double distance = 0.0;
    root_condition condition = root_condition::not_required;
    power_series b_prefix;  ///< b_0..b_{m-1} of the outer function (empty if degenerate)
    std::optional<grid_function> projection;
};

/**
 * One-step infimum: the geometric mean exp(integral of log w d-lambda),
 * and 0 when log w is not integrable.  Atoms are ignored.
 */
inline double szego_distance(const spectral_measure& mu) {
    try {
        const power_series a = log_density_fourier(mu, 0);
        return std::exp(a.c[0].real());
    } catch (const szego_degenerate&) {
        return 0.0;
    }
}

/**
 * L^p distance for m-steps-ahead prediction: sum_{j<m} |b_j|^2 with b the
 * Taylor coefficients of the outer function.  The value is the same for
 * every p in [1, infinity); 0 when degenerate.
 */
inline mstep_result mstep_distance(const spectral_measure& mu, std::size_t m) {
    if (m < 1) throw invalid_order("m must be at least 1");
    mstep_result out;
    out.m = m;
    power_series a;
    try {
        a = log_density_fourier(mu, m - 1);
    } catch (const szego_degenerate&) {
        return out; // distance 0
    }
    const power_series b = series_exp(a);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::norm(b[j]);
    out.distance = s;
    out.b_prefix = b;
    return out;
}

namespace detail {

/** Zero-pad a series to the given coefficient count. */
inline power_series pad_series(const power_series& s, std::size_t count) {
    std::vector<complexd> c(count, complexd(0.0));
    for (std::size_t j = 0; j < s.c.size() && j < count; ++j) c[j] = s.c[j];
    return power_series(std::move(c));
}

/** Density-level absolute-continuity check plus per-sample log ratios. */
inline void require_ac(const spectral_measure& mu, const spectral_measure& nu) {
    (void)radon_nikodym(mu, nu);
}

} // namespace detail

/**
 * Metric projection for m-steps-ahead prediction:
 *   phi = 1 - (Pi_m(h)/h)^{2/p},
 * where Pi_m keeps the first m Taylor coefficients of h.  The 2/p-power is
 * taken in the series sense: log of the truncated polynomial minus log of h
 * (a ratio holding the value 1 at z = 0), scaled by 2/p, re-exponentiated,
 * and evaluated on the boundary grid.  No pointwise complex powers are used,
 * so the branch is the analytic one throughout the disc.
 *
 * For p outside {1,2} the formula is valid only when the truncated
 * polynomial is zero-free in the (tolerance-enlarged) closed unit disc;
 * violation raises truncation_zero_in_disc.
 *
 * series_order bounds the working Taylor order; it must stay below half the
 * grid size.
 */
inline mstep_result mstep_projection(const spectral_measure& mu, std::size_t m, double p,
                                     std::size_t series_order = 256) {
    if (m < 1) throw invalid_order("m must be at least 1");
    if (!(p >= 1.0) || std::isinf(p))
        throw unsupported_exponent("projection requires p in [1, infinity)");
    if (m > series_order + 1)
        throw invalid_order("series order too small for the requested m");

    const power_series a = log_density_fourier(mu, series_order); // throws if degenerate
    const power_series b = series_exp(a);
    const power_series bm = truncate(b, m);

    mstep_result out;
    out.m = m;
    out.p = p;
    out.b_prefix = bm;
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::norm(b[j]);
    out.distance = s;

    if (p == 1.0 || p == 2.0) {
        out.condition = root_condition::not_required;
    } else {
        const root_scan scan = roots_in_disc(bm);
        if (scan.count_in_disc > 0 || scan.min_boundary_distance <= tau_root)
            throw truncation_zero_in_disc(
                "truncated outer polynomial has a zero in the closed unit disc");
        out.condition = root_condition::holds;
    }

    const power_series la = series_log(detail::pad_series(bm, series_order + 1));
    std::vector<complexd> sg(series_order + 1);
    for (std::size_t j = 0; j <= series_order; ++j)
        sg[j] = (2.0 / p) * (la[j] - a[j]);
    const power_series psi = series_exp(power_series(std::move(sg)));

    auto psi_samples = series_boundary(psi, mu.grid_size());
    std::vector<complexd> phi(mu.grid_size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = 1.0 - psi_samples[k];
    out.projection = grid_function(std::move(phi));
    return out;
}

/**
 * Cross prediction error for m-steps-ahead prediction: mu scored against the
 * projection built from nu,
 *   integral of |Pi_m(h_nu)|^2 (w_mu / w_nu) d-lambda.
 * The value does not depend on p; p only decides whether the zero-free-disc
 * condition must be checked (p outside {1,2} and m > 1).  Returns 0 when nu
 * is degenerate, +infinity when the integral diverges under refinement.
 * Requires mu absolutely continuous with respect to nu.
 */
inline double mstep_cross_error(const spectral_measure& nu, const spectral_measure& mu,
                                std::size_t m, double p, std::size_t series_order = 256) {
    if (m < 1) throw invalid_order("m must be at least 1");
    power_series a_nu;
    try {
        a_nu = log_density_fourier(nu, series_order);
    } catch (const szego_degenerate&) {
        return 0.0;
    }
    detail::require_ac(mu, nu);

    const power_series bm = truncate(series_exp(a_nu), m);
    if (p != 1.0 && p != 2.0 && m > 1) {
        const root_scan scan = roots_in_disc(bm);
        if (scan.count_in_disc > 0 || scan.min_boundary_distance <= tau_root)
            throw truncation_zero_in_disc(
                "truncated outer polynomial has a zero in the closed unit disc");
    }
    const auto poly = series_boundary(bm, mu.grid_size());
    std::vector<double> integrand(mu.grid_size());
    for (std::size_t k = 0; k < integrand.size(); ++k) {
        const double ratio = std::exp(mu.log_sample(k) - nu.log_sample(k));
        const double v = std::norm(poly[k]) * ratio;
        integrand[k] = std::isnan(v) ? 0.0 : v; // joint zeros carry no mass
    }
    if (quadrature_diverges(integrand))
        return std::numeric_limits<double>::infinity();
    return grid_mean(integrand);
}

/** Result of the outer-transfer energy inequality check. */
struct energy_bound_result {
    double lhs;
    double rhs;
    bool holds;
};

/**
 * Energy inequality for transferring a truncation through an outer function:
 *   integral of |Pi_m(g)|^2 (|h|^2/|g|^2) d-lambda  >=  sum_{j<m} |h_j|^2,
 * where h = z^inner_shift * h_series may carry a monomial inner factor and
 * g is expected to be outer (callers may violate that deliberately to
 * demonstrate that the hypothesis is necessary — the returned flag then
 * reports the failure).
 */
inline energy_bound_result energy_bound_check(const power_series& h_series,
                                              const power_series& g_series,
                                              long inner_shift, std::size_t m,
                                              std::size_t grid_size = 4096) {
    if (inner_shift < 0) throw input_error("inner shift must be nonnegative");
    if (m < 1) throw invalid_order("m must be at least 1");

    const auto shift = static_cast<std::size_t>(inner_shift);
    double rhs = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        if (j >= shift) rhs += std::norm(h_series[j - shift]);

    const auto h_b = series_boundary(h_series, grid_size);
    const auto g_b = series_boundary(g_series, grid_size);
    const auto pg_b = series_boundary(detail::pad_series(g_series, m), grid_size);
    double lhs = 0.0;
    for (std::size_t k = 0; k < grid_size; ++k)
        lhs += std::norm(pg_b[k]) * std::norm(h_b[k]) / std::max(std::norm(g_b[k]), 1e-300);
    lhs /= static_cast<double>(grid_size);

    return {lhs, rhs, lhs >= rhs - 1e-9 * std::max(1.0, rhs)};
}

/**
 * Diagnostic integral of log(w_0 / min(w_0, w_n)) d-lambda, with the
 * convention log(a/0) = +infinity for a > 0 (so a vanishing w_n under
 * positive w_0 yields +infinity).  Small values certify that w_n does not
 * undercut w_0 anywhere in the logarithmic mean.
 */
inline double log_ratio_diagnostic(const spectral_measure& mu0, const spectral_measure& mun) {
    if (mu0.grid_size() != mun.grid_size())
        throw grid_mismatch("diagnostic requires a common grid");
    const std::size_t n = mu0.grid_size();
    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double d = mu0.log_sample(k) - mun.log_sample(k);
        double v = std::max(0.0, d);
        if (std::isnan(v)) v = 0.0; // both densities vanish: ratio is 1
        if (std::isinf(v)) return std::numeric_limits<double>::infinity();
        integrand[k] = v;
    }
    if (quadrature_diverges(integrand))
        return std::numeric_limits<double>::infinity();
    return grid_mean(integrand);
}

} // namespace lpred

#endif // LPRED_MSTEPS_HPP

#ifndef LPRED_INTERPOLATION_HPP
#define LPRED_INTERPOLATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lpred/measure.hpp"

namespace lpred {

/**
 * Interpolation of one missing value: the known set is all integer
 * frequencies except 0, so the predictor space is the closed span of
 * { e_x : x != 0 } and everything reduces to negative moments of the density.
 * Atoms never enter: the distance of a measure equals the distance of its
 * absolutely continuous part, and the code paths below read only the density.
 */
struct interpolation_result {
    double distance = 0.0;
    bool degenerate = false;  ///< w^{-q/p} not integrable: projection is 1, distance 0
    std::optional<grid_function> projection;
};

namespace detail {

/** Conjugate exponent q with 1/p + 1/q = 1, for p > 1. */
inline double conjugate_exponent(double p) { return p / (p - 1.0); }

/** Quadrature of w^{-t} in log space; +inf when samples overflow. */
inline double neg_power_integral(const spectral_measure& mu, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < mu.grid_size(); ++k)
        s += std::exp(-t * mu.log_sample(k));
    return s / static_cast<double>(mu.grid_size());
}

} // namespace detail

/**
 * L^p distance of the missing value from its best interpolant.
 *   p > 1 : (integral of w^{-q/p} d-lambda)^(-p/q), 0 when that power of w
 *           is not integrable (degenerate);
 *   p = 1 : essential infimum of w (grid minimum);
 *   p in (0,1): identically 0 — every measure is approximated arbitrarily well;
 *   p <= 0 : unsupported.
 */
inline interpolation_result interp_distance(const spectral_measure& mu, double p) {
    if (!(p > 0.0)) throw unsupported_exponent("p must be positive");
    interpolation_result out;
    if (p < 1.0) return out; // distance 0 for every measure
    const auto& w = mu.density();
    if (p == 1.0) {
        out.distance = *std::min_element(w.begin(), w.end());
        out.degenerate = out.distance == 0.0;
        return out;
    }
    const double q = detail::conjugate_exponent(p);
    if (!neg_power_integrable(mu, q / p)) {
        out.degenerate = true;
        return out;
    }
    const double I = detail::neg_power_integral(mu, q / p);
    if (!std::isfinite(I)) { // annotation says integrable but the grid cannot resolve it
        out.degenerate = true;
        return out;
    }
    out.distance = std::pow(I, -p / q);
    return out;
}

/**
 * Metric projection of the missing value, p in (1, infinity):
 * phi = 1 - (integral of w^{-q/p})^{-1} w^{-q/p}; identically 1 when
 * degenerate.  For p = 1 no unique projection need exist — use
 * l1_minimizer_classification instead.
 */
inline grid_function interp_projection(const spectral_measure& mu, double p) {
    if (!(p > 1.0) || std::isinf(p))
        throw unsupported_exponent("projection requires p in (1, infinity)");
    const std::size_t n = mu.grid_size();
    const double q = detail::conjugate_exponent(p);
    const interpolation_result r = interp_distance(mu, p);
    if (r.degenerate) return grid_function::constant(n, 1.0);
    const double I = detail::neg_power_integral(mu, q / p);
    std::vector<complexd> phi(n);
    for (std::size_t k = 0; k < n; ++k)
        phi[k] = 1.0 - std::exp(-(q / p) * mu.log_sample(k)) / I;
    return grid_function(std::move(phi));
}

/**
 * Cross prediction error: the measure mu scored against the projection built
 * from nu,
 *   (integral of v^{-q/p} d-lambda)^{-p} * integral of v^{-q} w d-lambda.
 * Returns 0 when nu is degenerate (its projection is 1, leaving no residual
 * weight), +infinity when the second integral diverges under refinement.
 * Requires mu absolutely continuous with respect to nu.
 */
inline double interp_cross_error(const spectral_measure& nu, const spectral_measure& mu,
                                 double p) {
    if (!(p > 1.0) || std::isinf(p))
        throw unsupported_exponent("cross error requires p in (1, infinity)");
    const double q = detail::conjugate_exponent(p);
    if (!neg_power_integrable(nu, q / p)) return 0.0;
    (void)radon_nikodym(mu, nu); // enforce mu << nu

    const std::size_t n = mu.grid_size();
    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = std::exp(mu.log_sample(k) - q * nu.log_sample(k));
        integrand[k] = std::isnan(v) ? 0.0 : v; // 0 * inf at joint zeros: no mass there
    }
    if (quadrature_diverges(integrand))
        return std::numeric_limits<double>::infinity();
    const double I = detail::neg_power_integral(nu, q / p);
    if (!std::isfinite(I)) return 0.0;
    return std::pow(I, -p) * grid_mean(integrand);
}

/**
 * Existence/uniqueness trichotomy of the best L^1 interpolant, decided by the
 * set where the density attains its essential infimum:
 *   - infimum 0: the projection is identically 1;
 *   - infimum attained on a set of positive measure: infinitely many
 *     minimizers;
 *   - infimum attained only on a null set: no minimizer exists.
 */
enum class l1_minimizer_class { projection_is_one, infinitely_many, none_exists };

/**
 * Grid proxy for the trichotomy: "positive measure" means at least
 * max(8, N/1024) samples within 1e-6*(max-min) of the minimum.  The count
 * scales with N so that an isolated quadratic minimum (which captures
 * O(sqrt(tolerance))*N samples) stays below threshold at every resolution,
 * while genuine plateaus grow linearly and cross it.
 */
inline l1_minimizer_class l1_minimizer_classification(const spectral_measure& mu) {
    const auto& w = mu.density();
    const double lo = *std::min_element(w.begin(), w.end());
    const double hi = *std::max_element(w.begin(), w.end());
    if (lo <= 1e-12 * std::max(hi, 1.0)) return l1_minimizer_class::projection_is_one;
    const double tau_b = 1e-6 * (hi - lo);
    std::size_t count = 0;
    for (double v : w)
        if (v <= lo + tau_b) ++count;
    const std::size_t threshold = std::max<std::size_t>(8, w.size() / 1024);
    return count >= threshold ? l1_minimizer_class::infinitely_many
                              : l1_minimizer_class::none_exists;
}

} // namespace lpred

#endif // LPRED_INTERPOLATION_HPP

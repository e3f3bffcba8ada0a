#ifndef LPRED_CONVERGENCE_HPP
#define LPRED_CONVERGENCE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "lpred/measure.hpp"

namespace lpred {

/** One row of gap numbers, one per convergence mode. */
struct convergence_metrics {
    double tv;                    ///< total-variation distance (norm mode)
    double in_measure_deviation;  ///< reference measure of the deviation set
    double weak_gap;              ///< max gap over the dyadic interval family
    double weakstar_gap;          ///< max Fourier-coefficient gap, |x| <= X
};

/** mu([a,b)): grid samples whose node lies in the interval, plus atoms. */
inline double measure_of_interval(const spectral_measure& mu, double a, double b) {
    const auto& w = mu.density();
    const auto n = static_cast<double>(w.size());
    const auto lo = static_cast<std::size_t>(
        std::max(0.0, std::ceil(a / two_pi * n - 1e-9)));
    const auto hi = static_cast<std::size_t>(
        std::max(0.0, std::ceil(b / two_pi * n - 1e-9)));
    double s = 0.0;
    for (std::size_t k = lo; k < hi && k < w.size(); ++k) s += w[k];
    s /= n;
    for (const atom& at : mu.atoms())
        if (at.location >= a && at.location < b) s += at.mass;
    return s;
}

/**
 * The dyadic test family for weak convergence: levels k = 0..max_level,
 * level k splitting the circle into 2^k half-open intervals.
 */
inline std::vector<std::pair<double, double>> dyadic_intervals(int max_level = 10) {
    std::vector<std::pair<double, double>> out;
    for (int k = 0; k <= max_level; ++k) {
        const auto parts = static_cast<std::size_t>(1) << k;
        const double len = two_pi / static_cast<double>(parts);
        for (std::size_t i = 0; i < parts; ++i)
            out.emplace_back(len * static_cast<double>(i),
                             len * static_cast<double>(i + 1));
    }
    return out;
}

/** Largest |mu_n(I) - mu_0(I)| over a family of intervals. */
inline double weak_gap(const spectral_measure& mu0, const spectral_measure& mun,
                       const std::vector<std::pair<double, double>>& intervals) {
    double gap = 0.0;
    for (auto [a, b] : intervals)
        gap = std::max(gap,
                       std::abs(measure_of_interval(mun, a, b) -
                                measure_of_interval(mu0, a, b)));
    return gap;
}

/**
 * Largest Fourier-coefficient gap over characters |x| <= max_freq.  If either
 * measure fails to have finite coefficients (non-finite density samples) the
 * gap is +infinity.
 */
inline double weakstar_gap(const spectral_measure& mu0, const spectral_measure& mun,
                           long max_freq = 64) {
    double gap = 0.0;
    for (long x = -max_freq; x <= max_freq; ++x) {
        const complexd c0 = fourier_coefficient(mu0, x);
        const complexd cn = fourier_coefficient(mun, x);
        if (!std::isfinite(c0.real()) || !std::isfinite(cn.real()) ||
            !std::isfinite(c0.imag()) || !std::isfinite(cn.imag()))
            return std::numeric_limits<double>::infinity();
        gap = std::max(gap, std::abs(cn - c0));
    }
    return gap;
}

namespace detail {

/** Per-atom mass ratio of mu against each atom of the reference nu
 *  (0 where mu has no atom); part of the derivative against nu. */
inline std::vector<double> atom_ratios_against(const spectral_measure& mu,
                                               const spectral_measure& nu) {
    std::vector<double> out;
    out.reserve(nu.atoms().size());
    for (const atom& b : nu.atoms()) {
        double r = 0.0;
        for (const atom& a : mu.atoms())
            if (std::abs(a.location - b.location) <= 1e-12) {
                r = a.mass / b.mass;
                break;
            }
        out.push_back(r);
    }
    return out;
}

} // namespace detail

/**
 * Reference measure of the epsilon-deviation set of the two derivatives:
 * nu({ |d(mu_n)/d(nu) - d(mu_0)/d(nu)| > eps }), grid part and atom part.
 * Both measures must be absolutely continuous with respect to nu.
 */
inline double deviation_measure(const spectral_measure& mu0, const spectral_measure& mun,
                                const spectral_measure& nu, double eps) {
    const density_ratio r0 = radon_nikodym(mu0, nu);
    const density_ratio rn = radon_nikodym(mun, nu);
    const auto& wnu = nu.density();
    double s = 0.0;
    for (std::size_t k = 0; k < wnu.size(); ++k)
        if (std::abs(rn.samples[k] - r0.samples[k]) > eps) s += wnu[k];
    s /= static_cast<double>(wnu.size());

    const auto a0 = detail::atom_ratios_against(mu0, nu);
    const auto an = detail::atom_ratios_against(mun, nu);
    for (std::size_t i = 0; i < nu.atoms().size(); ++i)
        if (std::abs(an[i] - a0[i]) > eps) s += nu.atoms()[i].mass;
    return s;
}

/** All four mode gaps in one row. */
inline convergence_metrics modes_report(const spectral_measure& mu0,
                                        const spectral_measure& mun,
                                        const spectral_measure& nu,
                                        double eps = 1e-3, long max_freq = 64) {
    convergence_metrics m{};
    m.tv = tv_distance(mu0, mun);
    m.in_measure_deviation = deviation_measure(mu0, mun, nu, eps);
    m.weak_gap = weak_gap(mu0, mun, dyadic_intervals());
    m.weakstar_gap = weakstar_gap(mu0, mun, max_freq);
    return m;
}

} // namespace lpred

#endif // LPRED_CONVERGENCE_HPP

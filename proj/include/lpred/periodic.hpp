#ifndef LPRED_PERIODIC_HPP
#define LPRED_PERIODIC_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "lpred/measure.hpp"

namespace lpred {

/**
 * Periodic observation sets S = x + q*Z: the circle folds onto the
 * transversal T = [0, 2*pi/q), carrying the measure to a folded density
 * plus per-coset weight functions (Radon-Nikodym derivatives of each coset
 * slice against the fold).  Projections and distances then live on T.
 *
 * Quadrature convention: T inherits the ambient grid, so T-integrals keep
 * the 1/N weight of the full circle — the fold preserves total mass instead
 * of renormalizing the transversal.
 */
struct folded_measure {
    std::size_t q = 1;                 ///< coset count
    std::size_t transversal_size = 0;  ///< N/q samples on T
    std::vector<double> mu_tilde;      ///< folded density on T (ambient 1/N weight)
    std::vector<std::vector<double>> weights;  ///< q coset weights h^(alpha_j) on T
    std::vector<atom> folded_atoms;            ///< atom locations reduced mod 2*pi/q
    std::vector<std::vector<double>> atom_weights;  ///< per folded atom: q mass ratios
};

/**
 * Fold a measure along the cosets alpha_j = 2*pi*j/q: the folded density is
 * the sum of the q translated slices, each coset weight the slice's share,
 * with the symmetric convention h = 1/q wherever the fold carries no mass
 * (derivatives are arbitrary on null sets; symmetry keeps invariants clean).
 * Atoms fold by reducing their location mod 2*pi/q, again with per-coset
 * mass shares.
 */
inline folded_measure fold_measure(const spectral_measure& mu, std::size_t q) {
    if (q < 2) throw input_error("coset count must be at least 2");
    const std::size_t n = mu.grid_size();
    if (n % q != 0)
        throw grid_not_divisible("coset count must divide the grid size");

    folded_measure out;
    out.q = q;
    out.transversal_size = n / q;
    const std::size_t nt = out.transversal_size;
    out.mu_tilde.assign(nt, 0.0);
    out.weights.assign(q, std::vector<double>(nt, 0.0));
    const auto& w = mu.density();
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t j = 0; j < q; ++j) out.mu_tilde[k] += w[k + j * nt];
        if (out.mu_tilde[k] > 0.0) {
            for (std::size_t j = 0; j < q; ++j)
                out.weights[j][k] = w[k + j * nt] / out.mu_tilde[k];
        } else {
            for (std::size_t j = 0; j < q; ++j)
                out.weights[j][k] = 1.0 / static_cast<double>(q);
        }
    }

    const double period = two_pi / static_cast<double>(q);
    for (const atom& a : mu.atoms()) {
        auto j = static_cast<std::size_t>(std::floor(a.location / period));
        double t = a.location - static_cast<double>(j) * period;
        if (period - t <= 1e-12) { // boundary rounding: snap to the next coset
            j = (j + 1) % q;
            t = 0.0;
        }
        std::size_t slot = out.folded_atoms.size();
        for (std::size_t i = 0; i < out.folded_atoms.size(); ++i)
            if (std::abs(out.folded_atoms[i].location - t) <= 1e-12) {
                slot = i;
                break;
            }
        if (slot == out.folded_atoms.size()) {
            out.folded_atoms.push_back({t, 0.0});
            out.atom_weights.emplace_back(q, 0.0);
        }
        out.folded_atoms[slot].mass += a.mass;
        out.atom_weights[slot][j] += a.mass;
    }
    for (std::size_t i = 0; i < out.folded_atoms.size(); ++i)
        for (std::size_t j = 0; j < q; ++j)
            out.atom_weights[i][j] /= out.folded_atoms[i].mass;
    return out;
}

/** Projection data on the transversal plus its unfolded form on the circle. */
struct periodic_projection_result {
    std::vector<complexd> phi_tilde;     ///< on T
    std::vector<complexd> phi_at_atoms;  ///< phi-tilde at each folded atom
    std::vector<complexd> phi_full;      ///< unfolded to the ambient grid
    double distance = 0.0;               ///< for y = 0: integral of (1-|phi|^2) d-mu-tilde
};

namespace detail {

inline void require_offset(std::size_t q, long x) {
    const long r = x % static_cast<long>(q);
    if (r == 0)
        throw offset_in_subgroup("offset x must avoid the subgroup q*Z");
}

/** Unfold a transversal function along V_x: value e^{i·x·alpha_j} f(t) on coset j. */
inline std::vector<complexd> unfold(const std::vector<complexd>& f, std::size_t q, long x) {
    const std::size_t nt = f.size();
    std::vector<complexd> full(nt * q);
    for (std::size_t j = 0; j < q; ++j) {
        const complexd phase =
            std::polar(1.0, static_cast<double>(x) * two_pi * static_cast<double>(j) /
                                static_cast<double>(q));
        for (std::size_t k = 0; k < nt; ++k) full[k + j * nt] = phase * f[k];
    }
    return full;
}

} // namespace detail

/**
 * Orthogonal (L^2) projection of e_y onto span{ e_s : s in x + q*Z }:
 * on the transversal, phi(t) = e^{i*y*t} * sum_j e^{i*(y-x)*alpha_j} h^(alpha_j)(t),
 * then unfolded to the circle.  The distance field is the y = 0 prediction
 * error, integral over T of (1 - |phi|^2) d-mu-tilde, atoms included.
 */
inline periodic_projection_result periodic_projection(const spectral_measure& mu,
                                                      std::size_t q, long x, long y = 0) {
    detail::require_offset(q, x);
    const folded_measure fm = fold_measure(mu, q);
    const std::size_t nt = fm.transversal_size;
    const std::size_t n = mu.grid_size();

    std::vector<complexd> coset_phase(q);
    for (std::size_t j = 0; j < q; ++j)
        coset_phase[j] = std::polar(1.0, static_cast<double>(y - x) * two_pi *
                                             static_cast<double>(j) / static_cast<double>(q));

    periodic_projection_result out;
    out.phi_tilde.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        complexd s = 0.0;
        for (std::size_t j = 0; j < q; ++j) s += coset_phase[j] * fm.weights[j][k];
        const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
        out.phi_tilde[k] = std::polar(1.0, static_cast<double>(y) * t) * s;
    }
    out.phi_at_atoms.resize(fm.folded_atoms.size());
    for (std::size_t i = 0; i < fm.folded_atoms.size(); ++i) {
        complexd s = 0.0;
        for (std::size_t j = 0; j < q; ++j) s += coset_phase[j] * fm.atom_weights[i][j];
        out.phi_at_atoms[i] =
            std::polar(1.0, static_cast<double>(y) * fm.folded_atoms[i].location) * s;
    }
    out.phi_full = detail::unfold(out.phi_tilde, q, x);

    double d = 0.0;
    for (std::size_t k = 0; k < nt; ++k)
        d += (1.0 - std::norm(out.phi_tilde[k])) * fm.mu_tilde[k];
    d /= static_cast<double>(n);
    for (std::size_t i = 0; i < fm.folded_atoms.size(); ++i)
        d += (1.0 - std::norm(out.phi_at_atoms[i])) * fm.folded_atoms[i].mass;
    out.distance = d;
    return out;
}

/** L^2 distance of e_0 from span{ e_s : s in x + q*Z }. */
inline double periodic_distance2(const spectral_measure& mu, std::size_t q, long x) {
    return periodic_projection(mu, q, x, 0).distance;
}

/** General-p solution for two cosets. */
struct card2_result {
    double distance = 0.0;
    std::vector<complexd> psi_tilde;  ///< transversal profile of the projection
    std::vector<complexd> phi_full;   ///< unfolded projection on the ambient grid
};

/**
 * Metric projection and distance for q = 2 and any p in (0,1) or (1,infinity).
 * With A = (h^(0))^{1/(p-1)} and B = (h^(pi))^{1/(p-1)}, the pointwise
 * minimizer of h^(0)|1-s|^p + h^(pi)|1+s|^p for p > 1 is
 *   psi = (A - B) / (A + B),
 * giving the distance 2^p * integral over T of (A+B)^{1-p} h^(0) h^(pi) d-mu-tilde.
 * (The exponent grouping is pinned by the recomputation identity
 * integral of |1 - V_x psi|^p d-mu and by p = 2 consistency; samples where a
 * weight vanishes contribute nothing and psi snaps to the supported side.)
 * For p in (0,1) the minimizer sits at an endpoint: psi = sign(h^(0)-h^(pi))
 * and the distance is 2^p * integral of min(h^(0), h^(pi)) d-mu-tilde, the
 * continuous p -> 1 limit of the p > 1 expression.  p = 1 itself has no
 * unique minimizer and is rejected.
 */
inline card2_result periodic_distance_p_card2(const spectral_measure& mu, long x, double p) {
    if (p == 1.0)
        throw unsupported_exponent("p = 1 has no unique two-coset projection");
    if (!(p > 0.0) || std::isinf(p))
        throw unsupported_exponent("p must lie in (0,1) or (1,infinity)");
    detail::require_offset(2, x);
    const folded_measure fm = fold_measure(mu, 2);
    const std::size_t nt = fm.transversal_size;
    const std::size_t n = mu.grid_size();

    card2_result out;
    out.psi_tilde.resize(nt);
    double d = 0.0;
    const auto solve_point = [&](double h0, double h1, double mass) {
        double psi, f;
        if (p > 1.0) {
            if (h0 <= 0.0 || h1 <= 0.0) {
                psi = h0 >= h1 ? 1.0 : -1.0;
                f = 0.0;
            } else {
                const double a = std::pow(h0, 1.0 / (p - 1.0));
                const double b = std::pow(h1, 1.0 / (p - 1.0));
                psi = (a - b) / (a + b);
                f = std::pow(2.0, p) * std::pow(a + b, 1.0 - p) * h0 * h1;
            }
        } else {
            psi = h0 >= h1 ? 1.0 : -1.0;
            f = std::pow(2.0, p) * std::min(h0, h1);
        }
        d += f * mass;
        return psi;
    };

    for (std::size_t k = 0; k < nt; ++k)
        out.psi_tilde[k] = solve_point(fm.weights[0][k], fm.weights[1][k],
                                       fm.mu_tilde[k] / static_cast<double>(n));
    for (std::size_t i = 0; i < fm.folded_atoms.size(); ++i)
        (void)solve_point(fm.atom_weights[i][0], fm.atom_weights[i][1],
                          fm.folded_atoms[i].mass);
    out.distance = d;
    out.phi_full = detail::unfold(out.psi_tilde, 2, x);
    return out;
}

/**
 * Prediction of an atomic measure on the real line from the observation set
 * x + Z (x default 1/2): the annihilator of Z is 2*pi*Z, the transversal is
 * [0, 2*pi), and every sum is finitely supported on the atoms present.
 * phi(location) = e^{i*x*(location - t)} * phi-tilde(t), where t is the
 * location mod 2*pi and phi-tilde(t) averages e^{-i*x*alpha} over the atoms
 * of the class t + 2*pi*Z with their mass shares.
 */
inline complexd atomic_periodic_phi(const std::vector<atom>& atoms, double x, double gamma) {
    double total = 0.0;
    complexd s = 0.0;
    for (const atom& a : atoms) {
        // a belongs to gamma's class iff a.location - gamma is (numerically)
        // a multiple of 2*pi; the multiple itself is found by rounding, which
        // keeps boundary cases like 11*2*pi exact.
        const double steps = (a.location - gamma) / two_pi;
        const auto k = static_cast<long long>(std::llround(steps));
        if (std::abs(steps - static_cast<double>(k)) * two_pi <= 1e-9) {
            total += a.mass;
            s += a.mass * std::polar(1.0, -x * two_pi * static_cast<double>(k));
        }
    }
    if (total <= 0.0) return complexd(0.0);
    // Anchoring the class at gamma itself folds the V_x phase e^{i*x*(gamma-t)}
    // into the atom phases, so s/total is already phi evaluated at gamma.
    return s / total;
}

/**
 * Projection drift between two atomic real-line measures under the
 * observation set x + Z: integral of |phi_0 - phi_n|^2 d-mu_0 over the
 * atoms of mu_0.
 */
inline double atomic_periodic_drift(const std::vector<atom>& mu0_atoms,
                                    const std::vector<atom>& mun_atoms, double x = 0.5) {
    double s = 0.0;
    for (const atom& a : mu0_atoms) {
        const complexd p0 = atomic_periodic_phi(mu0_atoms, x, a.location);
        const complexd pn = atomic_periodic_phi(mun_atoms, x, a.location);
        s += std::norm(p0 - pn) * a.mass;
    }
    return s;
}

} // namespace lpred

#endif // LPRED_PERIODIC_HPP

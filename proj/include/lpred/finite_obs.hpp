#ifndef LPRED_FINITE_OBS_HPP
#define LPRED_FINITE_OBS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lpred/hardy.hpp"
#include "lpred/measure.hpp"

namespace lpred {

/**
 * Prediction from finitely many observed frequencies: the metric projection
 * of 1 onto span{ e_x : x in S } in L^p(mu) for a finite set S of distinct
 * nonzero integers.  Unlike the Hardy-side modules this one sees the whole
 * measure — atoms included, with exact character phases at atom locations.
 */
struct finite_solution {
    std::vector<long> frequencies;
    std::vector<complexd> coefficients;    ///< a_j, one per frequency
    double distance = 0.0;                 ///< integral of |1 - sum a_j e_{x_j}|^p d-mu
    std::size_t iterations = 0;
    bool converged = true;
    std::size_t effective_rank = 0;        ///< numerical rank of the Gram system
    std::vector<double> objective_history; ///< per-iteration objective (iterative solver)
};

namespace detail {

inline void validate_frequencies(const spectral_measure& mu, const std::vector<long>& freqs) {
    if (freqs.empty()) throw input_error("frequency set must be nonempty");
    const long nyquist = static_cast<long>(mu.grid_size() / 2);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] == 0) throw input_error("frequency 0 is the predicted value itself");
        if (std::labs(freqs[i]) > nyquist)
            throw input_error("frequency beyond grid Nyquist limit");
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
            if (freqs[i] == freqs[j]) throw input_error("frequencies must be distinct");
    }
}

/**
 * Coefficient lookup for the measure u*d-mu (grid weights u on the density,
 * separate weights on atoms): one DFT of u*w serves every integer frequency,
 * since the grid quadrature of e_{-j} is itself N-periodic in j.
 */
class weighted_coeffs {
public:
    weighted_coeffs(const spectral_measure& mu, const std::vector<double>& grid_weights,
                    const std::vector<double>& atom_weights)
        : mu_(&mu), atom_weights_(atom_weights) {
        const std::size_t n = mu.grid_size();
        std::vector<double> uw(n);
        for (std::size_t k = 0; k < n; ++k) uw[k] = grid_weights[k] * mu.density()[k];
        spectrum_ = dft_real(uw);
        for (auto& v : spectrum_) v /= static_cast<double>(n);
    }

    complexd operator()(long j) const {
        const auto n = static_cast<long>(mu_->grid_size());
        long idx = j % n;
        if (idx < 0) idx += n;
        complexd out = spectrum_[static_cast<std::size_t>(idx)];
        const auto& atoms = mu_->atoms();
        for (std::size_t i = 0; i < atoms.size(); ++i)
            out += atom_weights_[i] * atoms[i].mass *
                   std::polar(1.0, -static_cast<double>(j) * atoms[i].location);
        return out;
    }

private:
    const spectral_measure* mu_;
    std::vector<complexd> spectrum_;
    std::vector<double> atom_weights_;
};

/** Residual 1 - sum_j a_j e_{x_j}: grid samples plus exact values at atoms. */
inline void residual(const spectral_measure& mu, const std::vector<long>& freqs,
                     const std::vector<complexd>& a, std::vector<complexd>& grid_r,
                     std::vector<complexd>& atom_r) {
    const std::size_t n = mu.grid_size();
    grid_r.assign(n, complexd(1.0));
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        const double x = static_cast<double>(freqs[j]);
        for (std::size_t k = 0; k < n; ++k)
            grid_r[k] -= a[j] * std::polar(1.0, x * (two_pi * static_cast<double>(k) /
                                                     static_cast<double>(n)));
    }
    atom_r.assign(mu.atoms().size(), complexd(1.0));
    for (std::size_t i = 0; i < mu.atoms().size(); ++i)
        for (std::size_t j = 0; j < freqs.size(); ++j)
            atom_r[i] -= a[j] * std::polar(1.0, static_cast<double>(freqs[j]) *
                                                    mu.atoms()[i].location);
}

/** Objective integral of |r|^p d-mu from residual samples. */
inline double lp_objective(const spectral_measure& mu, const std::vector<complexd>& grid_r,
                           const std::vector<complexd>& atom_r, double p) {
    double s = 0.0;
    for (std::size_t k = 0; k < grid_r.size(); ++k)
        s += std::pow(std::abs(grid_r[k]), p) * mu.density()[k];
    s /= static_cast<double>(grid_r.size());
    for (std::size_t i = 0; i < atom_r.size(); ++i)
        s += std::pow(std::abs(atom_r[i]), p) * mu.atoms()[i].mass;
    return s;
}

/** Weighted normal-equation solve; fills coefficients and effective rank. */
inline void weighted_solve(const spectral_measure& mu, const std::vector<long>& freqs,
                           const std::vector<double>& grid_weights,
                           const std::vector<double>& atom_weights, finite_solution& out) {
    const weighted_coeffs g(mu, grid_weights, atom_weights);
    const auto k = static_cast<Eigen::Index>(freqs.size());
    Eigen::MatrixXcd G(k, k);
    Eigen::VectorXcd rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        rhs(i) = g(freqs[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < k; ++j)
            G(i, j) = g(freqs[static_cast<std::size_t>(i)] - freqs[static_cast<std::size_t>(j)]);
    }
    // Minimum-norm least-squares: rank-deficient Gram systems (the span can
    // have dimension below |S|) still get a deterministic minimizer.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(G);
    Eigen::VectorXcd a = cod.solve(rhs);
    out.effective_rank = static_cast<std::size_t>(cod.rank());
    out.coefficients.assign(a.data(), a.data() + a.size());
}

} // namespace detail

/** Hermitian Gram matrix G[i][j] = fourier_coefficient(mu, x_i - x_j). */
inline Eigen::MatrixXcd gram_matrix(const spectral_measure& mu, const std::vector<long>& freqs) {
    detail::validate_frequencies(mu, freqs);
    const std::vector<double> ones_grid(mu.grid_size(), 1.0);
    const std::vector<double> ones_atom(mu.atoms().size(), 1.0);
    const detail::weighted_coeffs g(mu, ones_grid, ones_atom);
    const auto k = static_cast<Eigen::Index>(freqs.size());
    Eigen::MatrixXcd G(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            G(i, j) = g(freqs[static_cast<std::size_t>(i)] - freqs[static_cast<std::size_t>(j)]);
    return G;
}

/**
 * Exact L^2 metric projection: normal equations G a = rhs with
 * rhs_i = fourier_coefficient(mu, x_i), solved in the minimum-norm sense,
 * distance recomputed by quadrature of the residual.
 */
inline finite_solution solve_p2(const spectral_measure& mu, const std::vector<long>& freqs) {
    detail::validate_frequencies(mu, freqs);
    finite_solution out;
    out.frequencies = freqs;
    const std::vector<double> ones_grid(mu.grid_size(), 1.0);
    const std::vector<double> ones_atom(mu.atoms().size(), 1.0);
    detail::weighted_solve(mu, freqs, ones_grid, ones_atom, out);
    std::vector<complexd> gr, ar;
    detail::residual(mu, freqs, out.coefficients, gr, ar);
    out.distance = detail::lp_objective(mu, gr, ar, 2.0);
    out.iterations = 1;
    return out;
}

/**
 * L^p metric projection for p in (1, infinity) by iteratively reweighted
 * least squares on the residual: weights |r|^{p-2} with the residual
 * magnitude floored at 1e-12 (this floors the weight for p > 2 and caps it
 * for p < 2), weight updates damped by one half when p < 2, stopping when no
 * coefficient moves by more than 1e-10 or after 500 iterations (converged is
 * false on cap).  The best-objective iterate is the one returned.
 */
inline finite_solution solve_lp(const spectral_measure& mu, const std::vector<long>& freqs,
                                double p) {
    if (!(p > 1.0) || std::isinf(p))
        throw unsupported_exponent("iterative solve requires p in (1, infinity)");
    if (p == 2.0) return solve_p2(mu, freqs);
    detail::validate_frequencies(mu, freqs);

    static constexpr double eps_w = 1e-12;
    static constexpr double coeff_tol = 1e-10;
    static constexpr std::size_t max_iter = 500;

    finite_solution out = solve_p2(mu, freqs);
    out.frequencies = freqs;

    std::vector<complexd> gr, ar;
    detail::residual(mu, freqs, out.coefficients, gr, ar);
    double best_objective = detail::lp_objective(mu, gr, ar, p);
    std::vector<complexd> best_coeffs = out.coefficients;
    out.objective_history.push_back(best_objective);

    std::vector<double> gw(mu.grid_size(), 1.0), aw(mu.atoms().size(), 1.0);
    out.converged = false;
    std::size_t it = 0;
    while (it < max_iter) {
        ++it;
        for (std::size_t k = 0; k < gw.size(); ++k) {
            const double u = std::pow(std::max(std::abs(gr[k]), eps_w), p - 2.0);
            gw[k] = p < 2.0 ? 0.5 * gw[k] + 0.5 * u : u;
        }
        for (std::size_t i = 0; i < aw.size(); ++i) {
            const double u = std::pow(std::max(std::abs(ar[i]), eps_w), p - 2.0);
            aw[i] = p < 2.0 ? 0.5 * aw[i] + 0.5 * u : u;
        }
        const std::vector<complexd> prev = out.coefficients;
        detail::weighted_solve(mu, freqs, gw, aw, out);
        detail::residual(mu, freqs, out.coefficients, gr, ar);
        const double objective = detail::lp_objective(mu, gr, ar, p);
        out.objective_history.push_back(objective);
        if (objective < best_objective) {
            best_objective = objective;
            best_coeffs = out.coefficients;
        }
        double step = 0.0;
        for (std::size_t j = 0; j < prev.size(); ++j)
            step = std::max(step, std::abs(out.coefficients[j] - prev[j]));
        if (step < coeff_tol) {
            out.converged = true;
            break;
        }
    }
    out.iterations = it;
    out.coefficients = best_coeffs;
    detail::residual(mu, freqs, out.coefficients, gr, ar);
    out.distance = detail::lp_objective(mu, gr, ar, p);
    return out;
}

/**
 * Cross prediction error: nu's optimal coefficients scored in mu's norm,
 * integral of |1 - sum a_j e_{x_j}|^p d-mu.  Requires mu absolutely
 * continuous with respect to nu.
 */
inline double finite_cross_error(const spectral_measure& nu, const spectral_measure& mu,
                                 const std::vector<long>& freqs, double p) {
    if (nu.grid_size() != mu.grid_size())
        throw grid_mismatch("cross error requires a common grid");
    (void)radon_nikodym(mu, nu);
    const finite_solution s = p == 2.0 ? solve_p2(nu, freqs) : solve_lp(nu, freqs, p);
    std::vector<complexd> gr, ar;
    detail::residual(mu, freqs, s.coefficients, gr, ar);
    return detail::lp_objective(mu, gr, ar, p);
}

/** Coefficient vectors (over S then the new frequency x) of the updated
 *  projections, one per requested target. */
struct augment_result {
    std::vector<long> frequencies;                   ///< S in order, then x
    std::vector<std::vector<complexd>> coefficients; ///< one vector per target y
    double residual_norm = 0.0;                      ///< L^2(mu) norm of e_x - P e_x
};

/**
 * Rank-one update of L^2 projections when a new frequency x joins S:
 *   Q e_y = P e_y + <e_y, r> / ||r||^2 * r,   r = e_x - P e_x,
 * carried out entirely in coefficient space with Gram-matrix inner products.
 * Throws dependent_character when e_x already lies in the mu-span of S
 * (residual norm at most 1e-9 times the norm of e_x).
 */
inline augment_result augment_projection(const spectral_measure& mu,
                                         const std::vector<long>& freqs, long x,
                                         const std::vector<long>& targets) {
    detail::validate_frequencies(mu, freqs);
    for (long s : freqs)
        if (s == x) throw input_error("new frequency already belongs to the set");
    if (std::labs(x) > static_cast<long>(mu.grid_size() / 2))
        throw input_error("frequency beyond grid Nyquist limit");

    const std::vector<double> ones_grid(mu.grid_size(), 1.0);
    const std::vector<double> ones_atom(mu.atoms().size(), 1.0);
    const detail::weighted_coeffs g(mu, ones_grid, ones_atom);
    const std::size_t k = freqs.size();

    Eigen::MatrixXcd G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                g(freqs[i] - freqs[j]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(G);

    // Projection of an arbitrary character e_t onto span S, as coefficients.
    const auto project = [&](long t) {
        Eigen::VectorXcd rhs(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) rhs(static_cast<Eigen::Index>(i)) = g(freqs[i] - t);
        return Eigen::VectorXcd(cod.solve(rhs));
    };

    // Inner product of coefficient vectors over the basis (e_{f_1},...,e_{f_m}):
    // <u, v> = sum_{ij} u_i conj(v_j) g(f_j - f_i).
    const auto inner = [&](const std::vector<long>& f, const Eigen::VectorXcd& u,
                           const Eigen::VectorXcd& v) {
        complexd s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j)
                s += u(static_cast<Eigen::Index>(i)) * std::conj(v(static_cast<Eigen::Index>(j))) *
                     g(f[j] - f[i]);
        return s;
    };

    // r = e_x - P e_x over the extended basis (S..., x).
    std::vector<long> ext = freqs;
    ext.push_back(x);
    const Eigen::VectorXcd b = project(x);
    Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k + 1));
    for (std::size_t j = 0; j < k; ++j) rho(static_cast<Eigen::Index>(j)) = -b(static_cast<Eigen::Index>(j));
    rho(static_cast<Eigen::Index>(k)) = 1.0;

    const double r_norm2 = inner(ext, rho, rho).real();
    const double x_norm = std::sqrt(std::max(g(0).real(), 0.0));
    augment_result out;
    out.frequencies = ext;
    out.residual_norm = std::sqrt(std::max(r_norm2, 0.0));
    if (out.residual_norm <= 1e-9 * x_norm)
        throw dependent_character("new character already lies in the span");

    for (long y : targets) {
        const Eigen::VectorXcd c = project(y);
        // <e_y, r> = sum_j conj(rho_j) g(f_j - y)
        complexd ip = 0.0;
        for (std::size_t j = 0; j < ext.size(); ++j)
            ip += std::conj(rho(static_cast<Eigen::Index>(j))) * g(ext[j] - y);
        const complexd scale = ip / r_norm2;
        std::vector<complexd> q(k + 1);
        for (std::size_t j = 0; j < k; ++j)
            q[j] = c(static_cast<Eigen::Index>(j)) + scale * rho(static_cast<Eigen::Index>(j));
        q[k] = scale * rho(static_cast<Eigen::Index>(k));
        out.coefficients.push_back(std::move(q));
    }
    return out;
}

} // namespace lpred

#endif // LPRED_FINITE_OBS_HPP

#ifndef LPRED_HARDY_HPP
#define LPRED_HARDY_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "lpred/measure.hpp"

namespace lpred {

/** Finite power series c_0 + c_1 z + ... + c_M z^M. */
struct power_series {
    std::vector<complexd> c;

    power_series() = default;
    explicit power_series(std::vector<complexd> coeffs) : c(std::move(coeffs)) {}

    std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
    complexd operator[](std::size_t j) const { return j < c.size() ? c[j] : complexd(0.0); }
};

/** First m coefficients of a series (the degree-(m-1) Taylor section). */
inline power_series truncate(const power_series& s, std::size_t m) {
    if (m < 1 || m > s.c.size())
        throw invalid_order("truncation length must lie in [1, order+1]");
    return power_series(std::vector<complexd>(s.c.begin(), s.c.begin() + m));
}

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

/** Forward DFT X[j] = sum_k x[k] exp(-2*pi*i*j*k/N) of real samples. */
inline std::vector<complexd> dft_real(const std::vector<double>& x) {
    std::vector<complexd> out;
    fft_engine().fwd(out, x);
    return out;
}

/** Inverse DFT x[k] = (1/N) sum_j X[j] exp(+2*pi*i*j*k/N). */
inline std::vector<complexd> idft(const std::vector<complexd>& x) {
    std::vector<complexd> out;
    fft_engine().inv(out, x);
    return out;
}

} // namespace detail

/**
 * Boundary samples s[k] = sum_j c_j exp(i*j*gamma_k) of a power series on the
 * uniform grid, via a zero-padded inverse DFT.  Requires order < grid_size.
 */
inline std::vector<complexd> series_boundary(const power_series& s, std::size_t grid_size) {
    if (s.c.size() > grid_size)
        throw invalid_order("series order must be below the evaluation grid size");
    std::vector<complexd> padded(grid_size, complexd(0.0));
    std::copy(s.c.begin(), s.c.end(), padded.begin());
    auto out = detail::idft(padded);
    for (auto& v : out) v *= static_cast<double>(grid_size);
    return out;
}

/**
 * Fourier coefficients a_0..a_M of log w, a_j = (1/N) sum_k e^{-ij*gamma_k} log w_k.
 * The density only (atoms never enter the Hardy machinery).
 *
 * Degeneracy (log w not integrable) is decided before any coefficient is
 * produced, in precedence order:
 *   1. the measure's analytic log_integrable annotation, when present;
 *   2. two or more samples at/below the clip floor 1e-300 (zero set of
 *      positive measure at grid resolution);
 *   3. the two-resolution refinement heuristic on the negative part of log w.
 * A single surviving near-zero sample is clipped at the floor; that costs
 * |log floor|/N in a_0 (about 0.04 at N = 2^14), vanishing under refinement.
 */
inline power_series log_density_fourier(const spectral_measure& mu, std::size_t M) {
    const std::size_t n = mu.grid_size();
    if (M >= n / 2) throw invalid_order("series order must be below half the grid size");

    static constexpr double clip_floor = 1e-300;
    const auto& w = mu.density();

    if (mu.log_integrable.has_value()) {
        if (!*mu.log_integrable)
            throw szego_degenerate("log-density not integrable (analytic annotation)");
    } else {
        std::size_t clipped = 0;
        for (double v : w)
            if (v <= clip_floor) ++clipped;
        if (clipped >= 2)
            throw szego_degenerate("density vanishes on a grid set of positive measure");
        std::vector<double> neg_log(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lw = w[k] <= clip_floor ? std::log(clip_floor) : mu.log_sample(k);
            neg_log[k] = std::max(-lw, 0.0);
        }
        if (quadrature_diverges(neg_log))
            throw szego_degenerate("negative part of log-density diverges under refinement");
    }

    std::vector<double> logw(n);
    for (std::size_t k = 0; k < n; ++k)
        logw[k] = w[k] <= clip_floor && !mu.has_log_density() ? std::log(clip_floor)
                                                              : mu.log_sample(k);
    const auto spectrum = detail::dft_real(logw);
    std::vector<complexd> a(M + 1);
    for (std::size_t j = 0; j <= M; ++j) a[j] = spectrum[j] / static_cast<double>(n);
    return power_series(std::move(a));
}

/**
 * Coefficients b of exp(a_0/2 + sum_{j>=1} a_j z^j): the index-0 term is
 * halved because a_0 plays the role of the full log-integral while the outer
 * function carries only its half (the other half sits in the conjugate part).
 * Recurrence: b_0 = e^{a_0/2}, n b_n = sum_{k=1..n} k a_k b_{n-k}.
 */
inline power_series series_exp(const power_series& a) {
    const std::size_t M = a.c.empty() ? 0 : a.c.size() - 1;
    std::vector<complexd> b(M + 1);
    b[0] = std::exp((a.c.empty() ? complexd(0.0) : a.c[0]) / 2.0);
    for (std::size_t nn = 1; nn <= M; ++nn) {
        complexd s = 0.0;
        for (std::size_t k = 1; k <= nn; ++k)
            s += static_cast<double>(k) * a.c[k] * b[nn - k];
        b[nn] = s / static_cast<double>(nn);
    }
    return power_series(std::move(b));
}

/**
 * Inverse of series_exp: a_0 = 2 log b_0 and the inverse recurrence
 * a_n = (n b_n - sum_{k=1..n-1} k a_k b_{n-k}) / (n b_0).
 * The constant term must not vanish, and a real b_0 must be positive
 * (an outer function's value at the origin).
 */
inline power_series series_log(const power_series& b) {
    if (b.c.empty() || std::abs(b.c[0]) == 0.0)
        throw invalid_series("series has no invertible constant term");
    if (b.c[0].imag() == 0.0 && b.c[0].real() <= 0.0)
        throw invalid_series("constant term must be positive");
    const std::size_t M = b.c.size() - 1;
    std::vector<complexd> a(M + 1);
    a[0] = 2.0 * std::log(b.c[0]);
    for (std::size_t nn = 1; nn <= M; ++nn) {
        complexd s = static_cast<double>(nn) * b.c[nn];
        for (std::size_t k = 1; k < nn; ++k)
            s -= static_cast<double>(k) * a[k] * b.c[nn - k];
        a[nn] = s / (static_cast<double>(nn) * b.c[0]);
    }
    return power_series(std::move(a));
}

/** Boundary values of the outer function with |h|^2 = w. */
struct outer_boundary_result {
    std::size_t grid_size;
    std::vector<complexd> h;  ///< h(e^{i*gamma_k})
    bool log_integrable;      ///< always true for a successfully built h
};

/**
 * Outer function boundary values h(e^{i*gamma}) = exp(u + i*C[u]) with
 * u = (1/2) log w and C the spectral conjugate (negative frequencies of u
 * flipped in sign, mean untouched).  Implemented as the analytic-signal
 * construction: keep the mean, double positive frequencies, drop negative
 * ones, inverse transform, exponentiate.  The real part of the exponent is
 * exactly u at the samples, so |h|^2 = w holds sample-wise by construction.
 */
inline outer_boundary_result outer_boundary(const spectral_measure& mu) {
    const std::size_t n = mu.grid_size();
    // Reuse the degeneracy decision (and its clipping) from the coefficient path.
    (void)log_density_fourier(mu, 0);

    static constexpr double clip_floor = 1e-300;
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lw = mu.density()[k] <= clip_floor && !mu.has_log_density()
                              ? std::log(clip_floor)
                              : mu.log_sample(k);
        u[k] = 0.5 * lw;
    }
    auto spectrum = detail::dft_real(u);
    std::vector<complexd> analytic(n, complexd(0.0));
    analytic[0] = spectrum[0];
    for (std::size_t j = 1; j < n / 2; ++j) analytic[j] = 2.0 * spectrum[j];
    analytic[n / 2] = spectrum[n / 2];
    const auto exponent = detail::idft(analytic);

    outer_boundary_result out;
    out.grid_size = n;
    out.log_integrable = true;
    out.h.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.h[k] = std::exp(exponent[k]);
    return out;
}

/** Root census of a polynomial relative to the unit circle. */
struct root_scan {
    std::size_t count_in_disc;     ///< roots with |z| < 1 - tau_root
    double min_boundary_distance;  ///< min over roots of ||z| - 1|, +inf if no roots
};

inline constexpr double tau_root = 1e-9;

/**
 * Companion-matrix root count of a polynomial against the open unit disc.
 * Trailing coefficients within 1e-13 of the largest magnitude are trimmed
 * before forming the companion matrix.
 */
inline root_scan roots_in_disc(const power_series& poly) {
    double max_mag = 0.0;
    for (const auto& v : poly.c) max_mag = std::max(max_mag, std::abs(v));
    if (max_mag == 0.0)
        throw degenerate_polynomial("all polynomial coefficients vanish");
    std::size_t deg = poly.c.size() - 1;
    while (deg > 0 && std::abs(poly.c[deg]) <= 1e-13 * max_mag) --deg;

    root_scan out{0, std::numeric_limits<double>::infinity()};
    if (deg == 0) return out;

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(deg),
                                                        static_cast<Eigen::Index>(deg));
    for (std::size_t i = 1; i < deg; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) =
            -poly.c[i] / poly.c[deg];

    const auto roots = companion.eigenvalues();
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        const double r = std::abs(roots[i]);
        if (r < 1.0 - tau_root) ++out.count_in_disc;
        out.min_boundary_distance = std::min(out.min_boundary_distance, std::abs(r - 1.0));
    }
    return out;
}

} // namespace lpred

#endif // LPRED_HARDY_HPP

#ifndef LPRED_STABILITY_HPP
#define LPRED_STABILITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpred/convergence.hpp"
#include "lpred/families.hpp"
#include "lpred/finite_obs.hpp"
#include "lpred/interpolation.hpp"
#include "lpred/io.hpp"
#include "lpred/msteps.hpp"
#include "lpred/periodic.hpp"

namespace lpred {

enum class problem_kind { interp, msteps, finite, periodic };

inline const char* problem_name(problem_kind k) {
    switch (k) {
        case problem_kind::interp: return "interp";
        case problem_kind::msteps: return "msteps";
        case problem_kind::finite: return "finite";
        case problem_kind::periodic: return "periodic";
    }
    return "?";
}

inline problem_kind problem_from_name(const std::string& s) {
    if (s == "interp") return problem_kind::interp;
    if (s == "msteps") return problem_kind::msteps;
    if (s == "finite") return problem_kind::finite;
    if (s == "periodic") return problem_kind::periodic;
    throw input_error("unknown problem: " + s);
}

/** Which prediction problem a sweep runs, with its per-problem parameters. */
struct problem_config {
    problem_kind kind = problem_kind::interp;
    std::size_t m = 1;                 ///< msteps horizon
    std::vector<long> frequencies{1};  ///< finite observation set
    std::size_t q = 2;                 ///< periodic subgroup index
    long x = 1;                        ///< periodic coset offset
};

/** One sweep row.  NaN in a cross/drift cell means "not applicable" and is
 *  rendered as "N/A"; infinities render as "inf". */
struct stability_row {
    long n = 0;
    double distance_n = 0.0;
    double cross_n0 = 0.0;  ///< E3 = d_p(mu_n, mu_0): mu_0 scored on mu_n's predictor
    double cross_0n = 0.0;  ///< E4 = d_p(mu_0, mu_n), only when mu_n << mu_0
    double drift = 0.0;     ///< integral of |phi_0 - phi_n|^p d-mu_0
    convergence_metrics metrics{};
};

struct stability_report {
    std::string family;
    std::map<std::string, double> params;
    problem_config problem;
    double p = 2.0;
    std::size_t grid_size = 0;
    double distance_0 = 0.0;
    std::vector<stability_row> rows;
    std::string r1, r2, r3;  ///< "holds-trend" | "fails" | "not-applicable"
};

struct sweep_options {
    family_spec family;  ///< name + params (the n field is ignored)
    std::vector<long> n_values;
    problem_config problem;
    double p = 2.0;
    std::size_t grid_size = 16384;
    std::size_t series_order = 256;
};

namespace detail {

inline double not_applicable() { return std::numeric_limits<double>::quiet_NaN(); }

/** Quadrature of |1 - phi|^p against mu; atoms read phi at the nearest node. */
inline double scored_error(const spectral_measure& mu, const std::vector<complexd>& phi,
                           double p) {
    const std::size_t n = mu.grid_size();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        s += mu.density()[k] * std::pow(std::abs(1.0 - phi[k]), p);
    s /= static_cast<double>(n);
    for (const atom& a : mu.atoms())
        s += a.mass * std::pow(std::abs(1.0 - phi[mu.nearest_node(a.location)]), p);
    return s;
}

/** Quadrature of |phi - psi|^p against mu; atoms read both at the nearest node. */
inline double drift_integral(const spectral_measure& mu, const std::vector<complexd>& phi,
                             const std::vector<complexd>& psi, double p) {
    const std::size_t n = mu.grid_size();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        s += mu.density()[k] * std::pow(std::abs(phi[k] - psi[k]), p);
    s /= static_cast<double>(n);
    for (const atom& a : mu.atoms()) {
        const std::size_t k = mu.nearest_node(a.location);
        s += a.mass * std::pow(std::abs(phi[k] - psi[k]), p);
    }
    return s;
}

/** Predictor sum a_j e_{x_j} sampled on the full grid. */
inline std::vector<complexd> finite_predictor(std::size_t grid_size,
                                              const finite_solution& sol) {
    std::vector<complexd> phi(grid_size, complexd(0.0, 0.0));
    for (std::size_t j = 0; j < sol.frequencies.size(); ++j) {
        const double x = static_cast<double>(sol.frequencies[j]);
        for (std::size_t k = 0; k < grid_size; ++k) {
            const double g = two_pi * static_cast<double>(k) / static_cast<double>(grid_size);
            phi[k] += sol.coefficients[j] * std::polar(1.0, x * g);
        }
    }
    return phi;
}

/** d_p for one measure under the configured problem (0 on degeneracy). */
inline double sweep_distance(const problem_config& pc, double p, const spectral_measure& mu) {
    switch (pc.kind) {
        case problem_kind::interp:
            return interp_distance(mu, p).distance;
        case problem_kind::msteps:
            return mstep_distance(mu, pc.m).distance;
        case problem_kind::finite:
            return (p == 2.0 ? solve_p2(mu, pc.frequencies)
                             : solve_lp(mu, pc.frequencies, p))
                .distance;
        case problem_kind::periodic:
            return p == 2.0 ? periodic_distance2(mu, pc.q, pc.x)
                            : periodic_distance_p_card2(mu, pc.x, p).distance;
    }
    return 0.0;
}

/** Full-grid predictor for the configured problem, or nullopt when the
 *  projection is unavailable (degenerate measure, exponent outside the
 *  problem's projection range, violated root condition). */
inline std::optional<std::vector<complexd>> sweep_predictor(const problem_config& pc,
                                                            double p,
                                                            const spectral_measure& mu,
                                                            std::size_t series_order) {
    try {
        switch (pc.kind) {
            case problem_kind::interp: {
                if (!(p > 1.0) || std::isinf(p)) return std::nullopt;
                return interp_projection(mu, p).samples();
            }
            case problem_kind::msteps: {
                const mstep_result r = mstep_projection(mu, pc.m, p, series_order);
                if (!r.projection) return std::nullopt;
                return r.projection->samples();
            }
            case problem_kind::finite: {
                const finite_solution s =
                    p == 2.0 ? solve_p2(mu, pc.frequencies) : solve_lp(mu, pc.frequencies, p);
                return finite_predictor(mu.grid_size(), s);
            }
            case problem_kind::periodic: {
                if (p == 2.0) return periodic_projection(mu, pc.q, pc.x).phi_full;
                return periodic_distance_p_card2(mu, pc.x, p).phi_full;
            }
        }
    } catch (const degeneracy_error&) {
        return std::nullopt;
    } catch (const unsupported_exponent&) {
        return std::nullopt;
    }
    return std::nullopt;
}

/** Module-level cross error d_p(nu, mu): mu scored against nu's predictor. */
inline double sweep_cross(const problem_config& pc, double p, const spectral_measure& nu,
                          const spectral_measure& mu, std::size_t series_order) {
    switch (pc.kind) {
        case problem_kind::interp:
            return interp_cross_error(nu, mu, p);
        case problem_kind::msteps:
            return mstep_cross_error(nu, mu, pc.m, p, series_order);
        case problem_kind::finite:
            return finite_cross_error(nu, mu, pc.frequencies, p);
        case problem_kind::periodic: {
            const auto phi = sweep_predictor(pc, p, nu, series_order);
            if (!phi) return not_applicable();
            return scored_error(mu, *phi, p);
        }
    }
    return not_applicable();
}

/** Reference measure dominating mu_0 and mu_n: density w_0 + 1 plus the
 *  union of both atom lists (masses added on collision). */
inline spectral_measure sweep_reference(const spectral_measure& mu0,
                                        const spectral_measure& mun) {
    const std::size_t n = mu0.grid_size();
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w0 = mu0.density()[k];
        w[k] = (std::isfinite(w0) ? w0 : 0.0) + 1.0;
    }
    std::vector<atom> atoms = mu0.atoms();
    for (const atom& a : mun.atoms()) {
        bool merged = false;
        for (atom& b : atoms)
            if (std::abs(a.location - b.location) <= 1e-12) {
                b.mass += a.mass;
                merged = true;
                break;
            }
        if (!merged) atoms.push_back(a);
    }
    return spectral_measure(n, std::move(w), std::move(atoms));
}

} // namespace detail

/**
 * Trend test used by the R1/R2/R3 verdicts: over the last ceil(len/3) rows
 * the column must sit within relative tolerance 5e-2 of the target (scale
 * s = max(|target|, largest finite |value| in the column)) and the tail gaps
 * |value - target| must not grow by more than a factor 2 between consecutive
 * rows (pairs below 1e-9*s are skipped as converged noise).
 */
inline bool holds_trend(const std::vector<double>& values, double target) {
    if (values.empty()) return false;
    double scale = std::abs(target);
    for (double v : values)
        if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    // Columns that sit at the target up to rounding noise (e.g. a drift that
    // is exactly zero analytically) must pass; without the absolute floor a
    // zero target would make the relative tolerance self-defeating.
    const double atol = 1e-12 * std::max(1.0, scale);
    const std::size_t tail = (values.size() + 2) / 3;
    const std::size_t start = values.size() - tail;
    for (std::size_t i = start; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) return false;
        if (std::abs(v - target) > std::max(5e-2 * scale, atol)) return false;
    }
    for (std::size_t i = start; i + 1 < values.size(); ++i) {
        const double g0 = std::abs(values[i] - target);
        const double g1 = std::abs(values[i + 1] - target);
        if (g0 <= std::max(1e-9 * scale, atol) || g1 <= std::max(1e-9 * scale, atol))
            continue;
        if (g1 > 2.0 * g0) return false;
    }
    return true;
}

namespace detail {

/** Verdict for one column: not-applicable when the tail has N/A cells (or the
 *  whole column is N/A), otherwise holds-trend / fails per the trend test. */
inline std::string column_verdict(const std::vector<double>& values, double target) {
    bool all_nan = true;
    for (double v : values)
        if (!std::isnan(v)) all_nan = false;
    if (all_nan) return "not-applicable";
    const std::size_t tail = (values.size() + 2) / 3;
    for (std::size_t i = values.size() - tail; i < values.size(); ++i)
        if (std::isnan(values[i])) return "not-applicable";
    return holds_trend(values, target) ? "holds-trend" : "fails";
}

} // namespace detail

/**
 * Run one stability sweep: for each n, the self distance d_p(mu_n), the cross
 * errors E3 = d_p(mu_n, mu_0) and E4 = d_p(mu_0, mu_n) (E4 only when
 * mu_n << mu_0), the projection drift against mu_0, and the four convergence
 * mode gaps; then the verdicts
 *   R1: d_p(mu_n)      -> d_p(mu_0)
 *   R2: d_p(mu_n,mu_0) -> d_p(mu_0)
 *   R3: drift          -> 0.
 * Cross/drift cells go N/A when the quantity is undefined for that row
 * (absolute continuity fails, the projection does not exist, or the exponent
 * is outside the problem's projection range).
 */
inline stability_report stability_sweep(const sweep_options& opt) {
    if (opt.n_values.empty()) throw input_error("sweep needs at least one n");
    for (long n : opt.n_values)
        if (n < 1) throw input_error("sweep indices must be positive");
    const problem_config& pc = opt.problem;
    if (pc.kind == problem_kind::periodic && opt.p != 2.0 && pc.q != 2)
        throw incompatible_problem("periodic sweeps with p != 2 require q = 2");

    family_spec fs = opt.family;
    fs.n = opt.n_values.front();
    family_pair first = make_family(fs, opt.grid_size);
    const spectral_measure mu0 = std::move(first.mu0);

    stability_report rep;
    rep.family = opt.family.name;
    rep.params = opt.family.params;
    rep.problem = pc;
    rep.p = opt.p;
    rep.grid_size = opt.grid_size;
    rep.distance_0 = detail::sweep_distance(pc, opt.p, mu0);
    const auto phi0 = detail::sweep_predictor(pc, opt.p, mu0, opt.series_order);

    for (long n : opt.n_values) {
        fs.n = n;
        const spectral_measure mun = make_family(fs, opt.grid_size).mun;
        stability_row row;
        row.n = n;
        row.distance_n = detail::sweep_distance(pc, opt.p, mun);

        try {
            row.cross_n0 = detail::sweep_cross(pc, opt.p, mun, mu0, opt.series_order);
        } catch (const degeneracy_error&) {
            row.cross_n0 = detail::not_applicable();
        } catch (const unsupported_exponent&) {
            row.cross_n0 = detail::not_applicable();
        }
        try {
            (void)radon_nikodym(mun, mu0); // E4 is defined only when mu_n << mu_0
            row.cross_0n = detail::sweep_cross(pc, opt.p, mu0, mun, opt.series_order);
        } catch (const degeneracy_error&) {
            row.cross_0n = detail::not_applicable();
        } catch (const unsupported_exponent&) {
            row.cross_0n = detail::not_applicable();
        }

        const auto phin = detail::sweep_predictor(pc, opt.p, mun, opt.series_order);
        row.drift = (phi0 && phin) ? detail::drift_integral(mu0, *phi0, *phin, opt.p)
                                   : detail::not_applicable();

        const spectral_measure ref = detail::sweep_reference(mu0, mun);
        row.metrics = modes_report(mu0, mun, ref);
        rep.rows.push_back(std::move(row));
    }

    std::vector<double> col1, col2, col3;
    for (const auto& r : rep.rows) {
        col1.push_back(r.distance_n);
        col2.push_back(r.cross_n0);
        col3.push_back(r.drift);
    }
    rep.r1 = detail::column_verdict(col1, rep.distance_0);
    rep.r2 = detail::column_verdict(col2, rep.distance_0);
    rep.r3 = detail::column_verdict(col3, 0.0);
    return rep;
}

/**
 * Sanity probe for the sup-norm problem on the atomic pair mu_0 = delta_0,
 * mu_n = delta_0 + (1/n)*Haar: minimizes max over the support of
 * |1 - alpha*e_1| by ternary search in the real coefficient alpha and returns
 * the two minima — (0, 1): the sup distance jumps even though every L^p
 * analogue of the pair converges.
 */
inline std::pair<double, double> dinf_singleton_check(std::size_t grid_size = 4096,
                                                      long n = 8) {
    family_pair fp = make_family({"ex3.5", {}, n}, grid_size);
    auto sup_error = [](const spectral_measure& mu, double alpha) {
        double s = 0.0;
        const std::size_t N = mu.grid_size();
        for (std::size_t k = 0; k < N; ++k) {
            if (mu.density()[k] <= 0.0) continue;
            const double g = two_pi * static_cast<double>(k) / static_cast<double>(N);
            s = std::max(s, std::abs(1.0 - alpha * std::polar(1.0, g)));
        }
        for (const atom& a : mu.atoms())
            s = std::max(s, std::abs(1.0 - alpha * std::polar(1.0, a.location)));
        return s;
    };
    auto minimize = [&](const spectral_measure& mu) {
        double lo = -2.0, hi = 2.0;
        for (int it = 0; it < 200; ++it) { // max of convex maps is convex in alpha
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (sup_error(mu, m1) <= sup_error(mu, m2))
                hi = m2;
            else
                lo = m1;
        }
        return sup_error(mu, 0.5 * (lo + hi));
    };
    return {minimize(fp.mu0), minimize(fp.mun)};
}

/** JSON report: 12 significant digits, "inf" for infinities, "N/A" for
 *  not-applicable cells. */
inline json report_to_json(const stability_report& rep) {
    json j;
    j["family"] = rep.family;
    if (!rep.params.empty()) {
        json jp;
        for (const auto& [k, v] : rep.params) jp[k] = json_number(v);
        j["params"] = jp;
    }
    j["problem"] = problem_name(rep.problem.kind);
    switch (rep.problem.kind) {
        case problem_kind::msteps: j["m"] = rep.problem.m; break;
        case problem_kind::finite: j["frequencies"] = rep.problem.frequencies; break;
        case problem_kind::periodic:
            j["q"] = rep.problem.q;
            j["x"] = rep.problem.x;
            break;
        case problem_kind::interp: break;
    }
    j["p"] = json_number(rep.p);
    j["grid_size"] = rep.grid_size;
    j["distance_0"] = json_number(rep.distance_0);
    j["rows"] = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["n"] = r.n;
        row["distance_n"] = json_number(r.distance_n);
        row["cross_n0"] = json_number(r.cross_n0);
        row["cross_0n"] = json_number(r.cross_0n);
        row["drift"] = json_number(r.drift);
        row["tv"] = json_number(r.metrics.tv);
        row["in_measure"] = json_number(r.metrics.in_measure_deviation);
        row["weak_gap"] = json_number(r.metrics.weak_gap);
        row["weakstar_gap"] = json_number(r.metrics.weakstar_gap);
        j["rows"].push_back(std::move(row));
    }
    j["verdicts"] = {{"R1", rep.r1}, {"R2", rep.r2}, {"R3", rep.r3}};
    return j;
}

/** CSV report: one comment line with the sweep context and verdicts, then a
 *  header and one row per n with 6 significant digits. */
inline std::string report_to_csv(const stability_report& rep) {
    std::ostringstream os;
    os << "# family=" << rep.family << " problem=" << problem_name(rep.problem.kind)
       << " p=" << csv_number(rep.p) << " distance_0=" << csv_number(rep.distance_0)
       << " R1=" << rep.r1 << " R2=" << rep.r2 << " R3=" << rep.r3 << "\n";
    os << "n,distance_n,cross_n0,cross_0n,drift,tv,in_measure,weak_gap,weakstar_gap\n";
    for (const auto& r : rep.rows) {
        os << r.n << ',' << csv_number(r.distance_n) << ',' << csv_number(r.cross_n0)
           << ',' << csv_number(r.cross_0n) << ',' << csv_number(r.drift) << ','
           << csv_number(r.metrics.tv) << ',' << csv_number(r.metrics.in_measure_deviation)
           << ',' << csv_number(r.metrics.weak_gap) << ','
           << csv_number(r.metrics.weakstar_gap) << "\n";
    }
    return os.str();
}

} // namespace lpred

#endif // LPRED_STABILITY_HPP

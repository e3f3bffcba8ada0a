#ifndef LPRED_FAMILIES_HPP
#define LPRED_FAMILIES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lpred/measure.hpp"

namespace lpred {

/** A registered example family evaluated at sequence index n. */
struct family_spec {
    std::string name;
    std::map<std::string, double> params;
    long n = 1;
};

/** The base measure and the n-th member of a family. */
struct family_pair {
    spectral_measure mu0;
    spectral_measure mun;
};

/** Atomic real-line family data (locations are real numbers, not circle points). */
struct atomic_family {
    std::vector<atom> mu0_atoms;
    std::vector<atom> mun_atoms;
};

namespace detail {

inline double get_param(const family_spec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

inline void check_param_keys(const family_spec& spec,
                             std::initializer_list<const char*> known) {
    for (const auto& [key, value] : spec.params) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw input_error("unknown parameter '" + key + "' for family " + spec.name);
    }
}

inline void annotate(spectral_measure& mu, bool log_integrable, double neg_power_critical) {
    mu.log_integrable = log_integrable;
    mu.neg_power_critical = neg_power_critical;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace detail

/** Registered family names (custom-json measures come in through the measure
 *  JSON schema instead and cannot be swept). */
inline const std::vector<std::string>& family_registry() {
    static const std::vector<std::string> names = {
        "ex3.2a", "ex3.2b", "ex3.5",  "ex3.6a", "ex3.6b", "ex3.6c",
        "ex3.6d", "ex4.11", "ex5.1",  "ex5.2",  "ex5.8",  "ex5.14",
        "ex6.5",  "ex7.5a", "ex7.5b", "ex7.7",  "stable", "custom-json"};
    return names;
}

/** The ex7.7 atomic pair on the real line: a unit atom at 0, joined for
 *  mu_n by a unit atom at (2n+1)*2*pi. */
inline atomic_family make_atomic_family(long n) {
    atomic_family out;
    out.mu0_atoms = {{0.0, 1.0}};
    out.mun_atoms = {{0.0, 1.0}, {(2.0 * static_cast<double>(n) + 1.0) * two_pi, 1.0}};
    return out;
}

/**
 * Build (mu_0, mu_n) for a registered family name at the requested grid size.
 * Every generator documents its densities inline and sets the analytic
 * annotations (log-integrability, critical negative power) that sampling
 * alone cannot decide.
 */
inline family_pair make_family(const family_spec& spec, std::size_t grid_size) {
    const double n = static_cast<double>(spec.n);
    if (spec.n < 1) throw input_error("family index n must be positive");
    const auto& name = spec.name;
    auto from = [&](const std::function<double(double)>& w) {
        return spectral_measure::from_function(grid_size, w);
    };
    auto from_log = [&](const std::function<double(double)>& lw) {
        return spectral_measure::from_log_function(grid_size, lw);
    };
    using detail::annotate;
    using detail::kInf;

    if (name == "ex3.2a") {
        // w_0 = 1; w_n vanishes on [0,1/n).
        detail::check_param_keys(spec, {});
        family_pair fp{from([](double) { return 1.0; }),
                       from([=](double g) { return g < 1.0 / n ? 0.0 : 1.0; })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, false, 0.0);
        return fp;
    }
    if (name == "ex3.2b") {
        // w_0 = sqrt(gamma); variant 1 patches [0,1/n) with the constant a/n,
        // variant 2 with n^{-2}.
        detail::check_param_keys(spec, {"a", "variant"});
        const double a = detail::get_param(spec, "a", 1.0);
        const int variant = static_cast<int>(detail::get_param(spec, "variant", 1.0));
        if (variant != 1 && variant != 2) throw input_error("variant must be 1 or 2");
        const double patch = variant == 1 ? a / n : 1.0 / (n * n);
        family_pair fp{from([](double g) { return std::sqrt(g); }),
                       from([=](double g) { return g < 1.0 / n ? patch : std::sqrt(g); })};
        annotate(fp.mu0, true, 2.0);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex3.5") {
        // mu_0 = delta_0; mu_n adds the uniform density 1/n.
        detail::check_param_keys(spec, {});
        spectral_measure mu0(grid_size, std::vector<double>(grid_size, 0.0), {{0.0, 1.0}});
        spectral_measure mun(grid_size, std::vector<double>(grid_size, 1.0 / n),
                             {{0.0, 1.0}});
        annotate(mu0, false, 0.0);
        annotate(mun, true, kInf);
        return {std::move(mu0), std::move(mun)};
    }
    if (name == "ex3.6a") {
        // w_0 = 1; w_n dips to gamma on [0,1/n).
        detail::check_param_keys(spec, {});
        family_pair fp{from([](double) { return 1.0; }),
                       from([=](double g) { return g < 1.0 / n ? g : 1.0; })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, true, 1.0);
        return fp;
    }
    if (name == "ex3.6b") {
        // w_0 = gamma; w_n is 1/n near 0, gamma in the middle, 2*pi-gamma near 2*pi.
        detail::check_param_keys(spec, {});
        family_pair fp{from([](double g) { return g; }), from([=](double g) {
                           if (g < 1.0 / n) return 1.0 / n;
                           if (g < two_pi - 1.0 / n) return g;
                           return two_pi - g;
                       })};
        annotate(fp.mu0, true, 1.0);
        annotate(fp.mun, true, 1.0); // the mirrored edge keeps w_n^{-1} out of L^1
        return fp;
    }
    if (name == "ex3.6c") {
        // w_0 = a*gamma; w_n floors [0,1/n) at a/n^2.
        detail::check_param_keys(spec, {"a"});
        const double a = detail::get_param(spec, "a", 1.0);
        family_pair fp{from([=](double g) { return a * g; }), from([=](double g) {
                           return g < 1.0 / n ? a / (n * n) : a * g;
                       })};
        annotate(fp.mu0, true, 1.0);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex3.6d") {
        // w_0 = sqrt(gamma); w_n floors [0,1/n) at a*n^{-3/4}.
        detail::check_param_keys(spec, {"a"});
        const double a = detail::get_param(spec, "a", 1.0);
        family_pair fp{from([](double g) { return std::sqrt(g); }), from([=](double g) {
                           return g < 1.0 / n ? a * std::pow(n, -0.75) : std::sqrt(g);
                       })};
        annotate(fp.mu0, true, 2.0);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex4.11" || name == "ex5.8") {
        // w_0 = 2; w_n = 2 + cos(n*gamma).
        detail::check_param_keys(spec, {});
        family_pair fp{from([](double) { return 2.0; }),
                       from([=](double g) { return 2.0 + std::cos(n * g); })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex5.1") {
        // log w_0 = 1/(gamma*log^3 gamma) on (0, e^-3], constant past the node
        // where that expression stops decreasing; log w_n switches to
        // 1/(gamma*log gamma) on (0,1/n), whose absolute integral diverges.
        detail::check_param_keys(spec, {});
        if (spec.n < 2) throw input_error("ex5.1 requires n >= 2");
        const double cut = std::exp(-3.0);
        const double tail = -std::exp(3.0) / 27.0;
        auto logw0 = [=](double g) {
            if (g <= cut) {
                const double l = std::log(g);
                return 1.0 / (g * l * l * l);
            }
            return tail;
        };
        auto logwn = [=](double g) {
            if (g < 1.0 / n) return 1.0 / (g * std::log(g));
            return logw0(g);
        };
        family_pair fp{from_log(logw0), from_log(logwn)};
        annotate(fp.mu0, true, 0.0);
        annotate(fp.mun, false, 0.0);
        return fp;
    }
    if (name == "ex5.2") {
        // log w_0 = -1/gamma; log w_n = n^2 on [0,1/n).  Densities overflow
        // double range for large n, so the log samples are primary.
        detail::check_param_keys(spec, {});
        auto logw0 = [](double g) { return -1.0 / g; };
        family_pair fp{from_log(logw0), from_log([=](double g) {
                           return g < 1.0 / n ? n * n : logw0(g);
                       })};
        annotate(fp.mu0, false, 0.0);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex5.14") {
        // w_0 = 1; w_n = n^{-b} on [0,1/n).  The parameter a only constrains
        // the admissible b (the family is defined for a*b < 1); it does not
        // enter the density.
        detail::check_param_keys(spec, {"a", "b"});
        const double a = detail::get_param(spec, "a", 0.4);
        const double b = detail::get_param(spec, "b", 2.0);
        if (!(a * b < 1.0)) throw input_error("ex5.14 requires a*b < 1");
        family_pair fp{from([](double) { return 1.0; }), from([=](double g) {
                           return g < 1.0 / n ? std::pow(n, -b) : 1.0;
                       })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "ex6.5") {
        // mu_0 = (1/2pi) delta_0 + Haar; w_n spikes to n on [0,1/n).
        detail::check_param_keys(spec, {});
        spectral_measure mu0(grid_size, std::vector<double>(grid_size, 1.0),
                             {{0.0, 1.0 / two_pi}});
        spectral_measure mun = from([=](double g) { return g < 1.0 / n ? n : 1.0; });
        annotate(mu0, true, kInf);
        annotate(mun, true, kInf);
        return {std::move(mu0), std::move(mun)};
    }
    if (name == "ex7.5a") {
        // mu_0 lives on [0,pi); w_n spikes to n on [0,1/n) and [pi,pi+1/n).
        detail::check_param_keys(spec, {});
        const double half = two_pi / 2.0;
        family_pair fp{from([=](double g) { return g < half ? 1.0 : 0.0; }),
                       from([=](double g) {
                           if (g < 1.0 / n) return n;
                           if (g < half) return 1.0;
                           if (g < half + 1.0 / n) return n;
                           return 0.0;
                       })};
        annotate(fp.mu0, false, 0.0);
        annotate(fp.mun, false, 0.0);
        return fp;
    }
    if (name == "ex7.5b") {
        // mu_0 = Haar; w_n = 1 + cos((2n+1)*gamma).
        detail::check_param_keys(spec, {});
        family_pair fp{from([](double) { return 1.0; }), from([=](double g) {
                           return 1.0 + std::cos((2.0 * n + 1.0) * g);
                       })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, true, 0.5); // (1+cos)^{-t} ~ theta^{-2t} at the zero
        return fp;
    }
    if (name == "ex7.7")
        throw incompatible_problem(
            "ex7.7 is an atomic real-line family; use make_atomic_family / the "
            "atomic drift path");
    if (name == "stable") {
        // Synthetic contraction family: w_n = (1+1/n) w_0 + (1/n) cos(n*gamma)
        // with w_0 = 2 + cos(gamma), so mu_n >= mu_0 and every mode gap is O(1/n).
        detail::check_param_keys(spec, {});
        auto w0 = [](double g) { return 2.0 + std::cos(g); };
        family_pair fp{from(w0), from([=](double g) {
                           return (1.0 + 1.0 / n) * w0(g) + std::cos(n * g) / n;
                       })};
        annotate(fp.mu0, true, kInf);
        annotate(fp.mun, true, kInf);
        return fp;
    }
    if (name == "custom-json")
        throw incompatible_problem(
            "custom-json measures are supplied through --measure on the one-shot "
            "subcommands and cannot be swept");
    throw unknown_family("unrecognized family name: " + name);
}

} // namespace lpred

#endif // LPRED_FAMILIES_HPP

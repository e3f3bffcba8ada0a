#ifndef LPRED_IO_HPP
#define LPRED_IO_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpred/families.hpp"
#include "lpred/measure.hpp"

namespace lpred {

using json = nlohmann::json;

/** Round to the given number of significant decimal digits. */
inline double round_sig(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

/** JSON value for a real number: finite values rounded to `digits`
 *  significant digits, infinities as the strings "inf"/"-inf", NaN (used for
 *  not-applicable cells) as "N/A". */
inline json json_number(double v, int digits = 12) {
    if (std::isnan(v)) return "N/A";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round_sig(v, digits);
}

/** CSV cell with 6 significant digits; infinities print as inf, N/A as N/A. */
inline std::string csv_number(double v) {
    if (std::isnan(v)) return "N/A";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/**
 * Build a spectral measure from its JSON description:
 *
 *   {
 *     "grid_size": 16384,                        // optional, default_grid otherwise
 *     "density": {"family": "ex4.11",
 *                 "params": {"n": 8, "member": "mun", ...}}   // registry member
 *               | {"samples": [w_0, ..., w_{N-1}]}            // explicit samples
 *               | omitted (purely atomic measure)
 *     "atoms": [{"location": 0.0, "mass": 0.1}, ...],
 *     "log_integrable": true | false | "auto",
 *     "neg_power_critical": 2.0 | "inf"
 *   }
 *
 * For family densities, params.n selects the sequence index (default 1) and
 * params.member picks "mu0" or "mun" (default "mun"); remaining params are
 * forwarded to the family generator.
 */
inline spectral_measure measure_from_json(const json& j, std::size_t default_grid) {
    if (!j.is_object()) throw input_error("measure JSON must be an object");
    std::size_t grid = default_grid;
    if (j.contains("grid_size")) {
        const json& jg = j["grid_size"];
        if (!jg.is_number_integer() || jg.get<long long>() <= 0)
            throw input_error("grid_size must be a positive integer");
        grid = jg.get<std::size_t>();
    }

    std::vector<atom> atoms;
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw input_error("atoms must be an array");
        for (const auto& ja : j["atoms"]) {
            if (!ja.contains("location") || !ja.contains("mass"))
                throw input_error("each atom needs location and mass");
            atoms.push_back({ja["location"].get<double>(), ja["mass"].get<double>()});
        }
    }

    spectral_measure mu = [&]() -> spectral_measure {
        if (!j.contains("density"))
            return spectral_measure(grid, std::vector<double>(grid, 0.0), atoms);
        const json& jd = j["density"];
        if (jd.contains("samples")) {
            const auto samples = jd["samples"].get<std::vector<double>>();
            if (samples.size() != grid)
                throw input_error("density samples length must equal grid_size");
            return spectral_measure(grid, samples, atoms);
        }
        if (jd.contains("family")) {
            family_spec spec;
            spec.name = jd["family"].get<std::string>();
            std::string member = "mun";
            if (jd.contains("params")) {
                if (!jd["params"].is_object())
                    throw input_error("density params must be an object");
                for (const auto& [key, value] : jd["params"].items()) {
                    if (key == "n") {
                        spec.n = value.get<long>();
                    } else if (key == "member") {
                        member = value.get<std::string>();
                    } else {
                        spec.params[key] = value.get<double>();
                    }
                }
            }
            if (member != "mu0" && member != "mun")
                throw input_error("params.member must be \"mu0\" or \"mun\"");
            family_pair fp = make_family(spec, grid);
            spectral_measure base = member == "mu0" ? std::move(fp.mu0) : std::move(fp.mun);
            for (const auto& a : atoms) base.add_atom(a.location, a.mass);
            return base;
        }
        throw input_error("density must contain either \"family\" or \"samples\"");
    }();

    if (j.contains("log_integrable")) {
        const json& jl = j["log_integrable"];
        if (jl.is_boolean())
            mu.log_integrable = jl.get<bool>();
        else if (jl.is_string() && jl.get<std::string>() == "auto")
            mu.log_integrable.reset();
        else
            throw input_error("log_integrable must be true, false, or \"auto\"");
    }
    if (j.contains("neg_power_critical")) {
        const json& jc = j["neg_power_critical"];
        if (jc.is_number())
            mu.neg_power_critical = jc.get<double>();
        else if (jc.is_string() && jc.get<std::string>() == "inf")
            mu.neg_power_critical = std::numeric_limits<double>::infinity();
        else
            throw input_error("neg_power_critical must be a number or \"inf\"");
    }
    return mu;
}

} // namespace lpred

#endif // LPRED_IO_HPP

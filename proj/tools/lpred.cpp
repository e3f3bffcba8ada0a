// Command-line front end: L^p trigonometric approximation distances, metric
// projections, cross prediction errors, and stability sweeps for spectral
// measures on the circle.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpred/io.hpp"
#include "lpred/stability.hpp"

namespace {

using lpred::json;

/** --measure accepts inline JSON (first non-space char '{') or a file path. */
json load_json_arg(const std::string& arg) {
    std::string text = arg;
    const auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{') {
        // inline JSON
    } else {
        std::ifstream in(arg);
        if (!in) throw lpred::input_error("cannot open measure file: " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw lpred::input_error(std::string("measure JSON parse error: ") + e.what());
    }
}

/** "8" | "4,8,16" | "4:64:4" (inclusive arithmetic range). */
std::vector<long> parse_n_list(const std::string& s) {
    std::vector<long> out;
    if (s.find(':') != std::string::npos) {
        long a = 0, b = 0, c = 1;
        if (std::sscanf(s.c_str(), "%ld:%ld:%ld", &a, &b, &c) != 3 || c <= 0 || a > b)
            throw lpred::input_error("range must be start:stop:step with step > 0");
        for (long n = a; n <= b; n += c) out.push_back(n);
        return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stol(tok));
    }
    if (out.empty()) throw lpred::input_error("empty index list");
    return out;
}

std::vector<long> parse_freq_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stol(tok));
    }
    if (out.empty()) throw lpred::input_error("empty frequency list");
    return out;
}

json complex_list(const std::vector<lpred::complexd>& v, int digits = 12) {
    json out = json::array();
    for (const auto& z : v)
        out.push_back({lpred::json_number(z.real(), digits), lpred::json_number(z.imag(), digits)});
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw lpred::input_error("cannot open output file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"L^p prediction distances and projections for spectral measures"};
    app.require_subcommand(1);

    std::size_t grid_size = 16384;
    std::size_t series_order = 256;
    unsigned long seed = 0;
    app.add_option("--grid-size", grid_size, "uniform grid resolution (even, >= 2)")
        ->capture_default_str();
    app.add_option("--series-order", series_order, "power-series truncation order")
        ->capture_default_str();
    app.add_option("--seed", seed, "seed recorded in reports (reserved for randomized drivers)")
        ->capture_default_str();

    std::string measure_arg, cross_arg, out_path;

    // ---- interp ----------------------------------------------------------
    auto* cmd_interp = app.add_subcommand("interp", "distance to the span of all other characters");
    double interp_p = 2.0;
    cmd_interp->add_option("--measure", measure_arg, "measure JSON (inline or file)")->required();
    cmd_interp->add_option("--p", interp_p, "exponent")->required();
    cmd_interp->add_option("--cross", cross_arg, "second measure scored against the projection");
    cmd_interp->add_option("--out", out_path, "write JSON here instead of stdout");

    // ---- szego -----------------------------------------------------------
    auto* cmd_szego = app.add_subcommand("szego", "one-step geometric-mean infimum");
    cmd_szego->add_option("--measure", measure_arg, "measure JSON (inline or file)")->required();
    cmd_szego->add_option("--out", out_path, "write JSON here instead of stdout");

    // ---- msteps ----------------------------------------------------------
    auto* cmd_msteps = app.add_subcommand("msteps", "m-step prediction distance and projection");
    std::size_t msteps_m = 1;
    double msteps_p = 2.0;
    cmd_msteps->add_option("--measure", measure_arg, "measure JSON (inline or file)")->required();
    cmd_msteps->add_option("--m", msteps_m, "number of predicted steps")->required();
    cmd_msteps->add_option("--p", msteps_p, "exponent")->required();
    cmd_msteps->add_option("--cross", cross_arg, "second measure scored against the projection");
    cmd_msteps->add_option("--out", out_path, "write JSON here instead of stdout");

    // ---- finite ----------------------------------------------------------
    auto* cmd_finite = app.add_subcommand("finite", "best predictor from finitely many observations");
    std::string freqs_arg;
    double finite_p = 2.0;
    long augment_x = 0;
    bool has_augment = false;
    cmd_finite->add_option("--measure", measure_arg, "measure JSON (inline or file)")->required();
    cmd_finite->add_option("--freqs", freqs_arg, "observed frequencies, e.g. 1,2,5")->required();
    cmd_finite->add_option("--p", finite_p, "exponent")->required();
    cmd_finite->add_option("--cross", cross_arg, "second measure scored against the predictor");
    cmd_finite->add_option("--augment", augment_x, "adjoin this frequency and report the updated projection of e_0")
        ->each([&](const std::string&) { has_augment = true; });
    cmd_finite->add_option("--out", out_path, "write JSON here instead of stdout");

    // ---- periodic --------------------------------------------------------
    auto* cmd_periodic = app.add_subcommand("periodic", "prediction from an arithmetic progression of frequencies");
    std::size_t periodic_q = 2;
    long periodic_x = 1;
    double periodic_p = 2.0;
    cmd_periodic->add_option("--measure", measure_arg, "measure JSON (inline or file)")->required();
    cmd_periodic->add_option("--q", periodic_q, "progression modulus (subgroup index)")->required();
    cmd_periodic->add_option("--x", periodic_x, "coset offset of the predicted character")->required();
    cmd_periodic->add_option("--p", periodic_p, "exponent")->required();
    cmd_periodic->add_option("--out", out_path, "write JSON here instead of stdout");

    // ---- stability sweep -------------------------------------------------
    auto* cmd_stability = app.add_subcommand("stability", "convergence-of-measures stability reports");
    cmd_stability->require_subcommand(1);
    auto* cmd_sweep = cmd_stability->add_subcommand("sweep", "run one family across a list of n");
    std::string family_name, n_arg, problem_arg = "interp", csv_path, sweep_freqs = "1";
    std::vector<std::string> param_args;
    double sweep_p = 2.0;
    std::size_t sweep_m = 1, sweep_q = 2;
    long sweep_x = 1;
    cmd_sweep->add_option("--family", family_name, "registered family name")->required();
    cmd_sweep->add_option("--n", n_arg, "indices: start:stop:step or comma list")->required();
    cmd_sweep->add_option("--problem", problem_arg, "interp | msteps | finite | periodic")
        ->capture_default_str();
    cmd_sweep->add_option("--p", sweep_p, "exponent")->capture_default_str();
    cmd_sweep->add_option("--m", sweep_m, "msteps horizon")->capture_default_str();
    cmd_sweep->add_option("--freqs", sweep_freqs, "finite observation set")->capture_default_str();
    cmd_sweep->add_option("--q", sweep_q, "periodic modulus")->capture_default_str();
    cmd_sweep->add_option("--x", sweep_x, "periodic coset offset")->capture_default_str();
    cmd_sweep->add_option("--param", param_args, "family parameter key=value (repeatable)");
    cmd_sweep->add_option("--out", out_path, "write the JSON report here");
    cmd_sweep->add_option("--csv", csv_path, "also write a CSV table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // --help and friends exit 0; anything else is an input error: exit 2
        return code == 0 ? 0 : 2;
    }

    try {
        json out;
        if (*cmd_interp) {
            const lpred::spectral_measure mu =
                lpred::measure_from_json(load_json_arg(measure_arg), grid_size);
            const auto res = lpred::interp_distance(mu, interp_p);
            out["p"] = lpred::json_number(interp_p);
            out["distance"] = lpred::json_number(res.distance);
            out["degenerate"] = res.degenerate;
            if (interp_p == 1.0) {
                switch (lpred::l1_minimizer_classification(mu)) {
                    case lpred::l1_minimizer_class::projection_is_one:
                        out["minimizer_class"] = "PROJECTION_IS_ONE";
                        break;
                    case lpred::l1_minimizer_class::infinitely_many:
                        out["minimizer_class"] = "INFINITELY_MANY";
                        break;
                    case lpred::l1_minimizer_class::none_exists:
                        out["minimizer_class"] = "NONE_EXISTS";
                        break;
                }
            }
            if (!cross_arg.empty()) {
                const lpred::spectral_measure nu =
                    lpred::measure_from_json(load_json_arg(cross_arg), grid_size);
                out["cross_error"] =
                    lpred::json_number(lpred::interp_cross_error(mu, nu, interp_p));
            }
            emit(out, out_path);
        } else if (*cmd_szego) {
            const lpred::spectral_measure mu =
                lpred::measure_from_json(load_json_arg(measure_arg), grid_size);
            out["szego_distance"] = lpred::json_number(lpred::szego_distance(mu));
            emit(out, out_path);
        } else if (*cmd_msteps) {
            const lpred::spectral_measure mu =
                lpred::measure_from_json(load_json_arg(measure_arg), grid_size);
            const auto dist = lpred::mstep_distance(mu, msteps_m);
            out["m"] = msteps_m;
            out["p"] = lpred::json_number(msteps_p);
            out["distance"] = lpred::json_number(dist.distance);
            out["degenerate"] = dist.b_prefix.c.empty();
            if (!dist.b_prefix.c.empty()) {
                out["b_prefix"] = complex_list(dist.b_prefix.c);
                // the projection path adds the root-condition verdict (and
                // throws with exit 3 when the condition is violated)
                const auto proj = lpred::mstep_projection(mu, msteps_m, msteps_p, series_order);
                switch (proj.condition) {
                    case lpred::root_condition::holds: out["root_condition"] = "holds"; break;
                    case lpred::root_condition::fails: out["root_condition"] = "fails"; break;
                    case lpred::root_condition::not_required:
                        out["root_condition"] = "not_required";
                        break;
                }
            }
            if (!cross_arg.empty()) {
                const lpred::spectral_measure nu =
                    lpred::measure_from_json(load_json_arg(cross_arg), grid_size);
                out["cross_error"] = lpred::json_number(
                    lpred::mstep_cross_error(mu, nu, msteps_m, msteps_p, series_order));
            }
            emit(out, out_path);
        } else if (*cmd_finite) {
            const lpred::spectral_measure mu =
                lpred::measure_from_json(load_json_arg(measure_arg), grid_size);
            const auto freqs = parse_freq_list(freqs_arg);
            const lpred::finite_solution sol = finite_p == 2.0
                                                   ? lpred::solve_p2(mu, freqs)
                                                   : lpred::solve_lp(mu, freqs, finite_p);
            out["frequencies"] = sol.frequencies;
            out["p"] = lpred::json_number(finite_p);
            out["coefficients"] = complex_list(sol.coefficients);
            out["distance"] = lpred::json_number(sol.distance);
            out["iterations"] = sol.iterations;
            out["converged"] = sol.converged;
            out["effective_rank"] = sol.effective_rank;
            if (!cross_arg.empty()) {
                const lpred::spectral_measure nu =
                    lpred::measure_from_json(load_json_arg(cross_arg), grid_size);
                out["cross_error"] =
                    lpred::json_number(lpred::finite_cross_error(mu, nu, freqs, finite_p));
            }
            if (has_augment) {
                const auto aug = lpred::augment_projection(mu, freqs, augment_x, {0});
                json ja;
                ja["frequencies"] = aug.frequencies;
                ja["coefficients"] = complex_list(aug.coefficients.at(0));
                ja["residual_norm"] = lpred::json_number(aug.residual_norm);
                out["augment"] = std::move(ja);
            }
            emit(out, out_path);
        } else if (*cmd_periodic) {
            const lpred::spectral_measure mu =
                lpred::measure_from_json(load_json_arg(measure_arg), grid_size);
            out["q"] = periodic_q;
            out["x"] = periodic_x;
            out["p"] = lpred::json_number(periodic_p);
            if (periodic_p == 2.0) {
                out["distance"] =
                    lpred::json_number(lpred::periodic_distance2(mu, periodic_q, periodic_x));
            } else {
                if (periodic_q != 2)
                    throw lpred::incompatible_problem("p != 2 requires q = 2");
                out["distance"] = lpred::json_number(
                    lpred::periodic_distance_p_card2(mu, periodic_x, periodic_p).distance);
            }
            emit(out, out_path);
        } else if (*cmd_sweep) {
            lpred::sweep_options so;
            so.family.name = family_name;
            for (const auto& kv : param_args) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw lpred::input_error("--param expects key=value: " + kv);
                so.family.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            so.n_values = parse_n_list(n_arg);
            so.problem.kind = lpred::problem_from_name(problem_arg);
            so.problem.m = sweep_m;
            so.problem.frequencies = parse_freq_list(sweep_freqs);
            so.problem.q = sweep_q;
            so.problem.x = sweep_x;
            so.p = sweep_p;
            so.grid_size = grid_size;
            so.series_order = series_order;
            const lpred::stability_report rep = lpred::stability_sweep(so);
            json j = lpred::report_to_json(rep);
            j["seed"] = seed;
            emit(j, out_path);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) throw lpred::input_error("cannot open CSV file: " + csv_path);
                csv << lpred::report_to_csv(rep);
            }
        }
    } catch (const lpred::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const lpred::degeneracy_error& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

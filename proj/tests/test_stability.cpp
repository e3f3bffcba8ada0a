#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "lpred/stability.hpp"

using namespace lpred;
using Catch::Approx;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::nan("");
} // namespace

TEST_CASE("trend rule") {
    SECTION("convergence toward the target passes") {
        CHECK(holds_trend({3.0, 2.5, 2.2, 2.1, 2.05, 2.02}, 2.0));
    }
    SECTION("a constant column off the target fails") {
        CHECK_FALSE(holds_trend({3.0, 3.0, 3.0, 3.0, 3.0, 3.0}, 2.0));
    }
    SECTION("tail gaps may not grow by more than a factor two") {
        CHECK_FALSE(holds_trend({2.001, 2.0005, 2.001, 2.03, 2.07}, 2.0));
        CHECK_FALSE(holds_trend({2.0, 2.0, 2.0, 2.0004, 2.001}, 2.0));
    }
    SECTION("identically-zero columns pass a zero target") {
        CHECK(holds_trend({0.0, 0.0, 0.0, 0.0}, 0.0));
    }
    SECTION("rounding noise at the target passes despite growth") {
        // growing but all below the absolute floor 1e-12*max(1, scale)
        CHECK(holds_trend({1e-19, 3e-18, 7e-17}, 0.0));
    }
    SECTION("non-finite tail values fail") {
        CHECK_FALSE(holds_trend({1.0, 1.0, kInf}, 1.0));
        CHECK_FALSE(holds_trend({1.0, 1.0, kNaN}, 1.0));
    }
    SECTION("empty columns fail") { CHECK_FALSE(holds_trend({}, 1.0)); }
}

TEST_CASE("column verdicts distinguish N/A from failure") {
    CHECK(detail::column_verdict({kNaN, kNaN, kNaN}, 1.0) == "not-applicable");
    CHECK(detail::column_verdict({1.0, 1.0, kNaN}, 1.0) == "not-applicable");
    // an early N/A with a clean convergent tail still gets judged
    CHECK(detail::column_verdict({kNaN, 2.01, 2.005, 2.002}, 2.0) == "holds-trend");
    CHECK(detail::column_verdict({kNaN, 3.0, 3.0, 3.0}, 2.0) == "fails");
}

TEST_CASE("problem names round-trip") {
    for (problem_kind k : {problem_kind::interp, problem_kind::msteps,
                           problem_kind::finite, problem_kind::periodic})
        CHECK(problem_from_name(problem_name(k)) == k);
    CHECK_THROWS_AS(problem_from_name("fourier"), input_error);
}

TEST_CASE("sweep input validation") {
    sweep_options opt;
    opt.family = {"stable", {}, 1};
    opt.grid_size = 4096;
    opt.n_values = {};
    CHECK_THROWS_AS(stability_sweep(opt), input_error);
    opt.n_values = {0, 4};
    CHECK_THROWS_AS(stability_sweep(opt), input_error);
    opt.n_values = {4};
    opt.problem.kind = problem_kind::periodic;
    opt.problem.q = 4;
    opt.problem.x = 1;
    opt.p = 3.0;
    CHECK_THROWS_AS(stability_sweep(opt), incompatible_problem);
}

TEST_CASE("contraction family holds all three relations") {
    sweep_options opt;
    opt.family = {"stable", {}, 1};
    // deep enough that the trend tail sits well inside the 5% band
    opt.n_values = {8, 16, 32, 64, 128, 256};
    opt.grid_size = 4096;
    opt.problem.kind = problem_kind::interp;
    const stability_report rep = stability_sweep(opt);
    CHECK(rep.r1 == "holds-trend");
    CHECK(rep.r2 == "holds-trend");
    CHECK(rep.r3 == "holds-trend");
    CHECK(rep.distance_0 == Approx(std::sqrt(3.0)).epsilon(1e-6));
    for (const auto& row : rep.rows) {
        CHECK(std::isfinite(row.cross_n0));
        CHECK(std::isfinite(row.cross_0n));
        CHECK(row.metrics.tv > 0.0);
    }
    // every mode gap shrinks to nothing for this family
    CHECK(rep.rows.back().metrics.tv < 0.1);
    CHECK(rep.rows.back().metrics.weakstar_gap < 0.05);
}

TEST_CASE("oscillating density breaks R1 and R2 under weak-* convergence") {
    sweep_options opt;
    opt.family = {"ex4.11", {}, 1};
    opt.n_values = {8, 16, 32, 64};
    opt.grid_size = 4096;
    opt.problem.kind = problem_kind::interp;
    const stability_report rep = stability_sweep(opt);
    CHECK(rep.distance_0 == Approx(2.0).margin(1e-9));
    CHECK(rep.r1 == "fails");  // d(mu_n) constant at sqrt(3)
    CHECK(rep.r2 == "fails");  // cross error constant at 4/sqrt(3)
    CHECK(rep.r3 == "fails");  // drift stays bounded away from zero
    CHECK(rep.rows.back().distance_n == Approx(std::sqrt(3.0)).epsilon(1e-6));
    CHECK(rep.rows.back().cross_n0 == Approx(4.0 / std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("one-sided absolute continuity marks the reverse cross column N/A") {
    sweep_options opt;
    opt.family = {"ex3.5", {}, 1};
    opt.n_values = {4, 8, 16};
    opt.grid_size = 2048;
    opt.problem.kind = problem_kind::interp;
    const stability_report rep = stability_sweep(opt);
    for (const auto& row : rep.rows) {
        CHECK(std::isnan(row.cross_0n));      // mu_n is not << mu_0
        CHECK(std::isfinite(row.cross_n0));   // but mu_0 << mu_n
        CHECK(row.distance_n == Approx(1.0 / static_cast<double>(row.n)).epsilon(1e-6));
    }
    CHECK(rep.distance_0 == 0.0);

    const json j = report_to_json(rep);
    CHECK(j["rows"][0]["cross_0n"] == json("N/A"));
    CHECK(j["verdicts"].contains("R2"));
}

TEST_CASE("report serialization") {
    sweep_options opt;
    opt.family = {"stable", {}, 1};
    opt.n_values = {4, 8};
    opt.grid_size = 2048;
    opt.problem.kind = problem_kind::msteps;
    opt.problem.m = 2;
    const stability_report rep = stability_sweep(opt);

    const json j = report_to_json(rep);
    for (const char* key : {"family", "problem", "p", "grid_size", "distance_0",
                            "rows", "verdicts"})
        CHECK(j.contains(key));
    CHECK(j["problem"] == json("msteps"));
    CHECK(j["m"] == json(2));
    REQUIRE(j["rows"].size() == 2);
    for (const char* key : {"n", "distance_n", "cross_n0", "cross_0n", "drift", "tv",
                            "in_measure", "weak_gap", "weakstar_gap"})
        CHECK(j["rows"][0].contains(key));

    const std::string csv = report_to_csv(rep);
    std::istringstream is(csv);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == rep.rows.size() + 2);
    CHECK(csv.rfind("# family=stable problem=msteps", 0) == 0);
    CHECK(csv.find("n,distance_n,cross_n0,cross_0n,drift,tv,in_measure,weak_gap,weakstar_gap") !=
          std::string::npos);
}

TEST_CASE("finite and periodic sweeps carry their problem fields") {
    sweep_options opt;
    opt.family = {"stable", {}, 1};
    opt.n_values = {4, 8};
    opt.grid_size = 2048;
    opt.problem.kind = problem_kind::finite;
    opt.problem.frequencies = {1, 2, 5};
    json j = report_to_json(stability_sweep(opt));
    CHECK(j["frequencies"] == json(std::vector<long>{1, 2, 5}));

    opt.problem.kind = problem_kind::periodic;
    opt.problem.q = 2;
    opt.problem.x = 1;
    // r3 needs a deep n range for the trend tail; grid resolves cos(256 g)
    opt.n_values = {8, 16, 32, 64, 128, 256};
    opt.grid_size = 4096;
    const stability_report rep = stability_sweep(opt);
    j = report_to_json(rep);
    CHECK(j["q"] == json(2));
    CHECK(j["x"] == json(1));
    CHECK(rep.r3 == "holds-trend");
}

TEST_CASE("sup-norm distances can jump where every quadrature analogue converges") {
    const auto [d0, dn] = dinf_singleton_check();
    CHECK(d0 == Approx(0.0).margin(1e-6));
    CHECK(dn == Approx(1.0).margin(1e-6));
}

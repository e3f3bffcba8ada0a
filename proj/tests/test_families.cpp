#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "lpred/families.hpp"
#include "lpred/interpolation.hpp"
#include "lpred/io.hpp"
#include "lpred/msteps.hpp"

using namespace lpred;
using Catch::Approx;

namespace {
constexpr std::size_t kGrid = 8192;

family_pair make(const std::string& name, long n,
                 std::map<std::string, double> params = {}) {
    return make_family({name, std::move(params), n}, kGrid);
}

double node(std::size_t k) { return two_pi * static_cast<double>(k) / kGrid; }
} // namespace

TEST_CASE("registry lists every sweepable family") {
    const auto& names = family_registry();
    CHECK(names.size() == 18);
    for (const char* expect :
         {"ex3.2a", "ex3.2b", "ex3.5", "ex3.6a", "ex3.6b", "ex3.6c", "ex3.6d",
          "ex4.11", "ex5.1", "ex5.2", "ex5.8", "ex5.14", "ex6.5", "ex7.5a",
          "ex7.5b", "ex7.7", "stable", "custom-json"})
        CHECK(std::find(names.begin(), names.end(), expect) != names.end());
    CHECK_THROWS_AS(make("ex9.9", 1), unknown_family);
}

TEST_CASE("vanishing-patch and dip families sample as documented") {
    SECTION("hard cutoff") {
        const auto fp = make("ex3.2a", 16);
        CHECK(fp.mu0.density()[kGrid / 4] == 1.0);
        CHECK(fp.mun.density()[0] == 0.0);       // half-cell node pi/N < 1/16
        CHECK(fp.mun.density()[kGrid / 4] == 1.0);
        CHECK(fp.mu0.log_integrable == true);
        CHECK(std::isinf(*fp.mu0.neg_power_critical));
        CHECK(fp.mun.log_integrable == false);
        CHECK(*fp.mun.neg_power_critical == 0.0);
    }
    SECTION("square-root base with constant patches") {
        const auto v1 = make("ex3.2b", 4, {{"a", 3.0}});
        CHECK(v1.mu0.density()[kGrid / 4] == Approx(std::sqrt(node(kGrid / 4))));
        CHECK(v1.mun.density()[0] == Approx(3.0 / 4.0));
        CHECK(*v1.mu0.neg_power_critical == 2.0);
        const auto v2 = make("ex3.2b", 4, {{"variant", 2.0}});
        CHECK(v2.mun.density()[0] == Approx(1.0 / 16.0));
        CHECK(std::isinf(*v2.mun.neg_power_critical));
    }
    SECTION("linear dip") {
        const auto fp = make("ex3.6a", 8);
        const double g0 = two_pi / (2.0 * kGrid);
        CHECK(fp.mun.density()[0] == Approx(g0));
        CHECK(fp.mun.density()[kGrid / 2] == 1.0);
        CHECK(*fp.mun.neg_power_critical == 1.0);
    }
    SECTION("three-piece density with a mirrored right edge") {
        const auto fp = make("ex3.6b", 4);
        CHECK(fp.mun.density()[0] == Approx(0.25));
        CHECK(fp.mun.density()[kGrid / 4] == Approx(node(kGrid / 4)));
        CHECK(fp.mun.density()[kGrid - 1] == Approx(two_pi - node(kGrid - 1)));
        CHECK(fp.mu0.density()[kGrid / 4] == Approx(node(kGrid / 4)));
    }
    SECTION("scaled linear base floors at a/n^2") {
        const auto fp = make("ex3.6c", 4, {{"a", 2.0}});
        CHECK(fp.mu0.density()[kGrid / 4] == Approx(2.0 * node(kGrid / 4)));
        CHECK(fp.mun.density()[0] == Approx(2.0 / 16.0));
    }
    SECTION("square-root base floors at a*n^{-3/4}") {
        const auto fp = make("ex3.6d", 16, {{"a", 2.0}});
        CHECK(fp.mun.density()[0] == Approx(0.25));
        CHECK(fp.mun.density()[kGrid / 2] == Approx(std::sqrt(node(kGrid / 2))));
    }
    SECTION("shrinking patch of height n^{-b}") {
        const auto fp = make("ex5.14", 4);
        CHECK(fp.mun.density()[0] == Approx(1.0 / 16.0));
        CHECK(fp.mun.density()[kGrid / 2] == 1.0);
    }
}

TEST_CASE("atomic and mixed families") {
    const auto fp = make("ex3.5", 8);
    REQUIRE(fp.mu0.atoms().size() == 1);
    CHECK(fp.mu0.atoms()[0].location == 0.0);
    CHECK(fp.mu0.atoms()[0].mass == 1.0);
    CHECK(fp.mu0.density()[100] == 0.0);
    CHECK(fp.mun.density()[100] == Approx(1.0 / 8.0));
    CHECK(fp.mun.atoms()[0].mass == 1.0);
    CHECK(fp.mu0.log_integrable == false);

    const auto e65 = make("ex6.5", 8);
    REQUIRE(e65.mu0.atoms().size() == 1);
    CHECK(e65.mu0.atoms()[0].mass == Approx(1.0 / two_pi));
    CHECK(e65.mu0.density()[kGrid / 2] == 1.0);
    CHECK(e65.mun.density()[0] == 8.0);
    CHECK(e65.mun.density()[kGrid / 2] == 1.0);
    CHECK(e65.mun.atoms().empty());

    const atomic_family af = make_atomic_family(3);
    REQUIRE(af.mu0_atoms.size() == 1);
    REQUIRE(af.mun_atoms.size() == 2);
    CHECK(af.mun_atoms[1].location == Approx(7.0 * two_pi));
    CHECK(af.mun_atoms[1].mass == 1.0);
}

TEST_CASE("oscillating families and the alias pair") {
    const auto a = make("ex4.11", 3);
    const auto b = make("ex5.8", 3);
    CHECK(a.mu0.density()[17] == 2.0);
    for (std::size_t k : {0u, 123u, 4096u})
        CHECK(a.mun.density()[k] == Approx(b.mun.density()[k]).margin(1e-15));
    const double g = node(100);
    CHECK(a.mun.density()[100] == Approx(2.0 + std::cos(3.0 * g)));

    const auto c = make("ex7.5b", 8);
    CHECK(c.mun.density()[100] == Approx(1.0 + std::cos(17.0 * g)));
    CHECK(*c.mun.neg_power_critical == 0.5);

    const auto s = make("stable", 4);
    CHECK(s.mun.density()[kGrid / 4] ==
          Approx(1.25 * (2.0 + std::cos(node(kGrid / 4))) + 0.25 * std::cos(4.0 * node(kGrid / 4))));
}

TEST_CASE("log-space families keep extreme densities representable") {
    const auto e52 = make("ex5.2", 16);
    CHECK(e52.mu0.log_integrable == false);
    CHECK(e52.mun.log_integrable == true);
    // the patch exponentiates to e^{n^2}: finite here, astronomically large
    CHECK(e52.mun.density()[0] == Approx(std::exp(256.0)));
    const double g = node(kGrid / 4);
    CHECK(e52.mun.density()[kGrid / 4] == Approx(std::exp(-1.0 / g)));

    const auto e51 = make("ex5.1", 4);
    const double tail = -std::exp(3.0) / 27.0;
    CHECK(e51.mu0.density()[kGrid / 2] == Approx(std::exp(tail)));
    const double gs = node(kGrid / 32);  // inside (e^{-3}, 1/4)
    CHECK(e51.mun.density()[kGrid / 32] ==
          Approx(std::exp(1.0 / (gs * std::log(gs)))));
    CHECK(e51.mun.log_integrable == false);
}

TEST_CASE("half-interval support with spreading spikes") {
    const auto fp = make("ex7.5a", 8);
    CHECK(fp.mu0.density()[kGrid / 4] == 1.0);
    CHECK(fp.mu0.density()[3 * kGrid / 4] == 0.0);
    CHECK(fp.mun.density()[0] == 8.0);
    CHECK(fp.mun.density()[kGrid / 2] == 8.0);  // node at pi starts the second spike
    CHECK(fp.mun.density()[kGrid / 4] == 1.0);
    CHECK(fp.mun.density()[3 * kGrid / 4] == 0.0);
    CHECK(fp.mun.log_integrable == false);
}

TEST_CASE("geometric mean of the exploding-patch family follows the closed form") {
    // patch-boundary rounding scales like 1/N; 2^14 keeps it inside the tolerance
    const long n = 16;
    const auto fp = make_family({"ex5.2", {}, n}, 16384);
    const double expect =
        std::exp((static_cast<double>(n) - std::log(static_cast<double>(n)) -
                  std::log(two_pi)) /
                 two_pi);
    CHECK(szego_distance(fp.mun) == Approx(expect).epsilon(2e-3));
    CHECK(szego_distance(fp.mu0) == 0.0);
}

TEST_CASE("cross error of the shrinking-patch family follows the closed form") {
    const long n = 8;
    const double b = 2.0;
    const auto fp = make("ex5.14", n);
    const double nn = static_cast<double>(n);
    // 2*pi times the means of 1/w_n and of w_0/w_n^2 over the circle
    const double i1 = std::pow(nn, b - 1.0) + two_pi - 1.0 / nn;
    const double i2 = std::pow(nn, 2.0 * b - 1.0) + two_pi - 1.0 / nn;
    const double expect = two_pi * i2 / (i1 * i1);
    CHECK(interp_cross_error(fp.mun, fp.mu0, 2.0) == Approx(expect).epsilon(1e-2));
}

TEST_CASE("three-piece family is degenerate for p = 2, so its cross error is 0") {
    const auto fp = make("ex3.6b", 8);
    const auto r = interp_distance(fp.mun, 2.0);
    CHECK(r.degenerate);
    CHECK(r.distance == 0.0);
    CHECK(interp_cross_error(fp.mun, fp.mu0, 2.0) == 0.0);
}

TEST_CASE("family parameter validation") {
    CHECK_THROWS_AS(make("ex3.2a", 0), input_error);
    CHECK_THROWS_AS(make("ex3.2a", 4, {{"bogus", 1.0}}), input_error);
    CHECK_THROWS_AS(make("ex3.2b", 4, {{"variant", 3.0}}), input_error);
    CHECK_THROWS_AS(make("ex5.14", 4, {{"a", 0.5}, {"b", 2.0}}), input_error);
    CHECK_THROWS_AS(make("ex5.1", 1), input_error);
    CHECK_THROWS_AS(make("ex7.7", 4), incompatible_problem);
    CHECK_THROWS_AS(make("custom-json", 1), incompatible_problem);
}

TEST_CASE("measures can be described in JSON") {
    SECTION("explicit samples with atoms") {
        json j = {{"grid_size", 8},
                  {"density", {{"samples", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}}}},
                  {"atoms", {{{"location", 1.0}, {"mass", 0.5}}}}};
        const auto mu = measure_from_json(j, 4096);
        REQUIRE(mu.grid_size() == 8);
        CHECK(mu.density()[3] == 4.0);
        REQUIRE(mu.atoms().size() == 1);
        CHECK(mu.atoms()[0].mass == 0.5);
        j["density"]["samples"] = {1.0, 2.0};
        CHECK_THROWS_AS(measure_from_json(j, 4096), input_error);
    }
    SECTION("family member selection and the default grid") {
        json j = {{"density",
                   {{"family", "ex4.11"}, {"params", {{"n", 3}, {"member", "mu0"}}}}}};
        const auto mu0 = measure_from_json(j, 512);
        CHECK(mu0.grid_size() == 512);
        CHECK(mu0.density()[100] == 2.0);
        j["density"]["params"].erase("member");  // defaults to the n-th member
        const auto mun = measure_from_json(j, 512);
        CHECK(mun.density()[100] ==
              Approx(2.0 + std::cos(3.0 * two_pi * 100.0 / 512.0)));
        j["atoms"] = {{{"location", 2.0}, {"mass", 0.25}}};
        const auto with_atom = measure_from_json(j, 512);
        REQUIRE(with_atom.atoms().size() == 1);
    }
    SECTION("purely atomic when density is omitted") {
        json j = {{"grid_size", 64}, {"atoms", {{{"location", 0.0}, {"mass", 1.0}}}}};
        const auto mu = measure_from_json(j, 4096);
        CHECK(mu.grid_size() == 64);
        CHECK(mu.total_mass() == Approx(1.0));
    }
    SECTION("analytic annotations") {
        json j = {{"density", {{"family", "ex4.11"}, {"params", {{"n", 2}}}}}};
        j["log_integrable"] = false;
        j["neg_power_critical"] = 2.5;
        auto mu = measure_from_json(j, 256);
        CHECK(mu.log_integrable == false);
        CHECK(*mu.neg_power_critical == 2.5);
        j["log_integrable"] = "auto";
        j["neg_power_critical"] = "inf";
        mu = measure_from_json(j, 256);
        CHECK_FALSE(mu.log_integrable.has_value());  // generator value cleared
        CHECK(std::isinf(*mu.neg_power_critical));
        j["log_integrable"] = "sometimes";
        CHECK_THROWS_AS(measure_from_json(j, 256), input_error);
    }
    SECTION("malformed descriptions") {
        CHECK_THROWS_AS(measure_from_json(json::array(), 64), input_error);
        CHECK_THROWS_AS(measure_from_json({{"grid_size", -4}}, 64), input_error);
        CHECK_THROWS_AS(measure_from_json({{"density", json::object()}}, 64), input_error);
        CHECK_THROWS_AS(measure_from_json({{"atoms", 3}}, 64), input_error);
        json j = {{"density", {{"family", "ex4.11"}, {"params", {{"member", "both"}}}}}};
        CHECK_THROWS_AS(measure_from_json(j, 64), input_error);
        j["density"]["params"] = 7;
        CHECK_THROWS_AS(measure_from_json(j, 64), input_error);
        json ja = {{"grid_size", 64}, {"atoms", {{{"location", 1.0}}}}};
        CHECK_THROWS_AS(measure_from_json(ja, 64), input_error);
    }
}

TEST_CASE("numeric serialization helpers") {
    CHECK(round_sig(1234567.0, 3) == 1230000.0);
    CHECK(round_sig(0.0012345678, 4) == Approx(0.001235).margin(1e-12));
    CHECK(round_sig(0.0, 6) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(json_number(inf) == json("inf"));
    CHECK(json_number(-inf) == json("-inf"));
    CHECK(json_number(std::nan("")) == json("N/A"));
    CHECK(json_number(1.0 / 3.0).get<double>() == Approx(0.333333333333).margin(1e-15));
    CHECK(csv_number(std::nan("")) == "N/A");
    CHECK(csv_number(2.5) == "2.5");
    CHECK(csv_number(inf) == "inf");
}

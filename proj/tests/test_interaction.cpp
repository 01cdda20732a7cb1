#include <random>

#include <catch_amalgamated.hpp>

#include "critbound/fields.hpp"
#include "critbound/interaction.hpp"
#include "oracles.hpp"

using namespace critbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ProfilePtr limit_w()
{
    static const ProfilePtr w =
        std::make_shared<const RadialProfile>(shoot_ground_state(ProblemParams{3, 4.0, 0.0, 1.0}));
    return w;
}

} // namespace

TEST_CASE("power inequality holds on random samples", "[interaction]")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const double a = 10.0 * U(rng);
        const double b = 10.0 * U(rng);
        const double p = 2.0 + 4.0 * U(rng);
        violations += !power_inequality(a, b, p);
    }
    CHECK(violations == 0);
}

TEST_CASE("power inequality slack has closed forms at p = 2 and p = 3", "[interaction]")
{
    // (a+b)² - a² - b² - 2ab = 0; (a+b)³ - a³ - b³ - 2(a²b + ab²) = ab(a+b)
    for (double a : {0.0, 0.5, 3.0}) {
        for (double b : {0.0, 1.25, 4.0}) {
            CHECK(std::abs(static_cast<double>(power_inequality_slack(a, b, 2.0))) < 1e-12);
            CHECK_THAT(static_cast<double>(power_inequality_slack(a, b, 3.0)), WithinAbs(a * b * (a + b), 1e-11));
        }
    }
}

TEST_CASE("gamma is symmetric under s -> 1-s and vanishes at the ends", "[interaction]")
{
    for (double s : {0.1, 0.25, 0.4}) {
        CHECK_THAT(gamma_function(s, 46.0, 2.9, 4.0), WithinRel(gamma_function(1.0 - s, 46.0, 2.9, 4.0), 1e-12));
    }
    CHECK(gamma_function(0.0, 46.0, 2.9, 4.0) == 0.0);
    CHECK(gamma_function(1.0, 46.0, 2.9, 4.0) == 0.0);
    CHECK(gamma_function(0.5, 46.0, 2.9, 4.0) < 0.0);
    // p = 2: the bracket is 1 - ½·1·2 = 0
    CHECK_THAT(gamma_function(0.3, 46.0, 2.9, 2.0), WithinAbs(0.0, 1e-14));
}

TEST_CASE("delta_rho follows its defining formula", "[interaction]")
{
    CHECK_THAT(delta_rho(5.0, 3), WithinRel(std::exp(-10.0) / 5.0, 1e-14));
    CHECK_THAT(delta_rho(2.0, 5), WithinRel(std::exp(-4.0) / 4.0, 1e-14));
    CHECK_THROWS_AS(delta_rho(0.0, 3), InvalidParams);
}

TEST_CASE("bipolar integral matches the gaussian overlap", "[interaction]")
{
    // ∫ e^(-|x-De₁|²) e^(-|x|²) dx = (π/2)^(3/2) e^(-D²/2)
    auto g = [](double r) { return std::exp(-r * r); };
    for (double D : {0.5, 2.0, 4.0}) {
        CHECK_THAT(bipolar_integral(g, g, D, 12.0), WithinRel(std::pow(M_PI / 2.0, 1.5) * std::exp(-0.5 * D * D), 1e-9));
    }
}

TEST_CASE("exponential moment matches the gaussian Laplace transform", "[interaction]")
{
    // ∫ e^(-|x|²) e^(-αx₁) dx = π^(3/2) e^(α²/4)
    auto g = [](double r) { return std::exp(-r * r); };
    for (double alpha : {0.5, 1.0, 2.0}) {
        CHECK_THAT(exponential_moment(g, alpha, 1.0, 12.0), WithinRel(std::pow(M_PI, 1.5) * std::exp(0.25 * alpha * alpha), 1e-10));
    }
}

TEST_CASE("cross term agrees with the bipolar integral", "[interaction][fields]")
{
    const ProfilePtr w = limit_w();
    const double rho = 2.0;
    auto g = [&](double r) { return std::pow(w->value(r), 3.0); };
    auto h = [&](double r) { return w->value(r); };
    const double ref = bipolar_integral(g, h, 2.0 * rho, 30.0);
    CHECK_THAT(cross_term(*w, 3.0, 1.0, {rho, 0.0, 0.0}, {-rho, 0.0, 0.0}), WithinRel(ref, 1e-6));
}

TEST_CASE("normalized interaction plateaus at the exponential-limit value", "[interaction]")
{
    const ProfilePtr w = limit_w();
    const InteractionReport rep = estimate_c1(*w, {4.0, 5.0, 6.0});
    const double c = oracle::decay_c(*w, 12.0, 20.0);
    CHECK(rep.plateau_drift < 0.05);
    CHECK_THAT(rep.c1_estimate, WithinRel(oracle::c1_limit(*w, c, 3.0), 1e-3));
    CHECK(rep.gamma_half < 0.0);
}

TEST_CASE("estimate_c1 rejects unordered rho lists", "[interaction]")
{
    CHECK_THROWS_AS(estimate_c1(*limit_w(), {5.0, 4.0}), InvalidParams);
}

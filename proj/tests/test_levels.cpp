#include <random>

#include <catch_amalgamated.hpp>

#include "critbound/energy_levels.hpp"
#include "oracles.hpp"

using namespace critbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("bubble quotient reproduces the closed-form Sobolev constant", "[levels]")
{
    CHECK_THAT(sobolev_constant(3), WithinRel(oracle::sobolev_closed_form(3), 1e-10));
    CHECK_THAT(sobolev_constant(4), WithinRel(oracle::sobolev_closed_form(4), 1e-10));
    CHECK_THAT(sobolev_constant(3), WithinRel(3.0 * std::pow(M_PI / 2.0, 4.0 / 3.0), 1e-12));
}

TEST_CASE("Rayleigh quotient is invariant under dilation and scaling", "[levels]")
{
    const double S = sobolev_constant(3);
    for (double lam : {0.3, 1.0, 7.0}) {
        const double v = rayleigh_quotient(
            3, [lam](double r) { return 5.0 / std::sqrt(1.0 + lam * lam * r * r); },
            [lam](double r) { return -5.0 * lam * lam * r * std::pow(1.0 + lam * lam * r * r, -1.5); });
        CHECK_THAT(v, WithinRel(S, 1e-9));
    }
}

TEST_CASE("random trial functions never beat the bubble", "[levels]")
{
    const double S = sobolev_constant(3);
    std::mt19937_64 rng(20261017);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        // sum of two gaussians with random weights and widths
        const double a1 = 0.1 + U(rng), a2 = U(rng), b1 = 0.1 + 3 * U(rng), b2 = 0.1 + 3 * U(rng);
        const double v = rayleigh_quotient(
            3, [&](double r) { return a1 * std::exp(-b1 * r * r) + a2 * std::exp(-b2 * r * r); },
            [&](double r) { return -2 * r * (a1 * b1 * std::exp(-b1 * r * r) + a2 * b2 * std::exp(-b2 * r * r)); });
        REQUIRE(v > S);
    }
}

TEST_CASE("critical level from the formula and from scaling agree", "[levels]")
{
    for (double eps : {0.02, 0.05, 0.1, 1.0}) {
        CHECK_THAT(critical_level(3, eps), WithinRel(critical_level_by_scaling(3, eps), 1e-10));
    }
    // ε^(-1/2) scaling in N = 3
    CHECK_THAT(critical_level(3, 0.01) / critical_level(3, 0.04), WithinRel(2.0, 1e-12));
}

TEST_CASE("bubble profile samples the unit bubble", "[levels]")
{
    const RadialProfile U = bubble_profile(3, 1.0);
    for (double r : {0.5, 1.0, 3.0}) {
        const double C = std::pow(3.0, 0.25); // -ΔU = U⁵ in R³
        const double u = C / std::sqrt(1.0 + r * r);
        CHECK_THAT(U.value(r), WithinRel(u, 1e-8));
    }
}

TEST_CASE("extrapolation helpers are exact on polynomials", "[levels]")
{
    const std::vector<double> x{0.02, 0.05, 0.1};
    std::vector<double> lin, quad;
    for (double v : x) {
        lin.push_back(3.0 - 2.0 * v);
        quad.push_back(3.0 - 2.0 * v + 5.0 * v * v);
    }
    const auto [slope, icpt] = linear_fit(x, lin);
    CHECK_THAT(slope, WithinAbs(-2.0, 1e-12));
    CHECK_THAT(icpt, WithinAbs(3.0, 1e-12));
    CHECK_THAT(richardson_to_zero(x, quad), WithinAbs(3.0, 1e-10));
}

TEST_CASE("ground level decreases in eps and stays below the critical level", "[levels]")
{
    const ProblemParams base{3, 4.0, 0.0, 1.0};
    const double m = compute_m_eps(base).energy;
    double prev = m;
    for (double eps : {0.01, 0.05, 0.1}) {
        const double me = compute_m_eps(base.with_eps(eps)).energy;
        CHECK(me < prev);
        CHECK(me < critical_level(3, eps));
        prev = me;
    }
}

TEST_CASE("make_check reports margins with the right sign", "[levels]")
{
    const LedgerCheck a = make_check("a", 1.0, 2.0, true);
    CHECK(a.pass);
    CHECK(a.margin() == 1.0);
    const LedgerCheck b = make_check("b", 2.0, 2.0, true);
    CHECK_FALSE(b.pass);
    const LedgerCheck c = make_check("c", 2.0, 2.0, false);
    CHECK(c.pass);
    CHECK(make_check("d", 3.0, 2.0, false).margin() == -1.0);
}

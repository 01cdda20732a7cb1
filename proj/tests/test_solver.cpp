#include <random>

#include <catch_amalgamated.hpp>

#include "critbound/energy_levels.hpp"
#include "critbound/ground_state_solver.hpp"

using namespace critbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ProblemParams eps_params{3, 4.0, 0.05, 1.0};

const RadialProfile& limit_w()
{
    static const RadialProfile w = shoot_ground_state(ProblemParams{3, 4.0, 0.0, 1.0});
    return w;
}

/// Central-difference directional derivative against the analytic gradient.
double fd_mismatch(const RadialFunctional& F, const std::vector<double>& u, std::mt19937_64& rng)
{
    std::normal_distribution<double> N01;
    std::vector<double> d(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (F.is_free(i)) {
            d[i] = N01(rng) * std::max(u[i], 1e-3);
        }
    }
    const std::vector<double> g = F.gradient(u);
    double gd = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        gd += g[i] * d[i];
    }
    const double h = 1e-4;
    std::vector<double> up = u, um = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        up[i] += h * d[i];
        um[i] -= h * d[i];
    }
    const double fd = (F.energy(up) - F.energy(um)) / (2.0 * h);
    return std::abs(fd - gd) / std::abs(gd);
}

} // namespace

TEST_CASE("functional gradient matches finite differences", "[solver]")
{
    std::mt19937_64 rng(99);
    for (const PotentialSpec& pot : {PotentialSpec::constant(), PotentialSpec::gaussian(-0.3, 2.0)}) {
        const RadialFunctional F(pot, {}, eps_params, 35.0, 1500);
        const std::vector<double> u = F.sample(limit_w());
        for (int k = 0; k < 10; ++k) {
            CHECK(fd_mismatch(F, u, rng) < 1e-5);
        }
    }
}

TEST_CASE("discrete energy of the shot profile matches its radial energy", "[solver]")
{
    const RadialProfile w = shoot_ground_state(eps_params);
    const RadialFunctional F({}, {}, eps_params);
    const double E = F.energy(F.sample(w));
    const GroundStateLevel lvl = compute_m_eps(eps_params);
    CHECK_THAT(E, WithinRel(lvl.energy, 1e-4));
}

TEST_CASE("solver on a = 1 converges to the shot level monotonically", "[solver]")
{
    const MinimizationResult r = minimize_on_nehari_radial({}, {}, eps_params, limit_w());
    CHECK(r.status == SolverStatus::Converged);
    CHECK(r.max_energy_increase <= 0.0);
    CHECK(r.max_nehari_residual < 1e-10);
    CHECK_THAT(r.energy, WithinRel(compute_m_eps(eps_params).energy, 1e-4));
    for (std::size_t i = 1; i < r.log.size(); ++i) {
        REQUIRE(r.log[i].energy <= r.log[i - 1].energy);
    }
}

TEST_CASE("a below-class potential lowers the ground level", "[solver]")
{
    const MinimizationResult r =
        minimize_on_nehari_radial(PotentialSpec::gaussian(-0.3, 2.0), {}, eps_params, limit_w());
    CHECK(r.status == SolverStatus::Converged);
    CHECK(r.energy < compute_m_eps(eps_params).energy);
}

TEST_CASE("condition check reports equality for a = 1 on the whole space", "[solver]")
{
    const Criterion1824Report rep =
        check_condition_18_24({}, {}, eps_params, {{0.0, 0.0, 0.0}, {2.5, 1.0, -0.5}});
    for (const auto& row : rep.rows) {
        CHECK(row.equality);
        CHECK_THAT(row.energy_sw, WithinRel(rep.m, 1e-6));
    }
}

TEST_CASE("condition check separates below-class from the exterior hole", "[solver]")
{
    const std::vector<Vec3> z{{0.0, 0.0, 0.0}, {3.0, 0.0, 0.0}};
    for (const auto& row : check_condition_18_24(PotentialSpec::gaussian(-0.3, 3.0), {}, eps_params, z).rows) {
        CHECK(row.satisfied);
    }
    const std::vector<Vec3> zx{{4.0, 0.0, 0.0}, {6.0, 0.0, 0.0}};
    for (const auto& row : check_condition_18_24({}, DomainSpec::exterior(1.0), eps_params, zx).rows) {
        CHECK_FALSE(row.satisfied);
        CHECK_FALSE(row.equality);
    }
}

TEST_CASE("nonexistence diagnostic refuses below-class potentials", "[solver]")
{
    CHECK_THROWS_AS(nonexistence_diagnostic(PotentialSpec::gaussian(-0.3, 2.0), {}, eps_params, {4}), InvalidParams);
}

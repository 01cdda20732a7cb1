#include <catch_amalgamated.hpp>

#include "critbound/energy_levels.hpp"
#include "critbound/nehari.hpp"
#include "critbound/radial_core.hpp"
#include "oracles.hpp"

using namespace critbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const RadialProfile& limit_w()
{
    static const RadialProfile w = shoot_ground_state(ProblemParams{3, 4.0, 0.0, 1.0});
    return w;
}

} // namespace

TEST_CASE("cubic ground state matches the tabulated central value", "[radial]")
{
    // Q(0) of -ΔQ + Q = Q³ in R³, known to 8 digits from the NLS literature
    CHECK_THAT(limit_w().values().front(), WithinRel(4.3373877, 1e-7));
}

TEST_CASE("ground state solves the ODE and sits on the Nehari manifold", "[radial]")
{
    const RadialProfile& w = limit_w();
    CHECK(nehari_residual(w) < 1e-8);
    CHECK(ode_residual(w) < 1e-4);
    const RadialNorms n = radial_norms(w);
    // on 𝒩 with ε = 0: ‖w‖² = |w|₄⁴
    CHECK_THAT(n.h1_sq(), WithinRel(n.lp_p, 1e-8));
}

TEST_CASE("ground state is positive and radially decreasing", "[radial]")
{
    const RadialProfile& w = limit_w();
    const auto& u = w.values();
    for (std::size_t i = 1; i < u.size(); ++i) {
        REQUIRE(u[i] > 0.0);
        REQUIRE(u[i] < u[i - 1]);
    }
}

TEST_CASE("decay constants agree with a direct plateau average", "[radial]")
{
    const RadialProfile& w = limit_w();
    const DecayConstants d = extract_decay_constants(w);
    CHECK_THAT(d.c, WithinRel(oracle::decay_c(w, 12.0, 20.0), 1e-6));
    CHECK_THAT(d.c_prime, WithinRel(-d.c, 1e-6));
    CHECK(d.plateau_variation < 0.02);
    // the tail beyond the grid follows c e^(-r) r^(-1)
    CHECK_THAT(w.value(40.0), WithinRel(d.c * std::exp(-40.0) / 40.0, 1e-3));
}

TEST_CASE("Nehari projection hits the manifold and maximizes along the ray", "[nehari]")
{
    NormBundle b{3.0, 2.0, 1.5, 1.0, 4.0, 6.0};
    for (double eps : {0.0, 0.05, 0.3}) {
        const NehariProjection pr = project_to_nehari(b, eps);
        CHECK(std::abs(nehari_defect(b, eps, pr.t)) < 1e-12 * b.norm_a_sq * pr.t * pr.t);
        for (double f : {0.9, 0.99, 1.01, 1.1}) {
            CHECK(energy_along_ray(b, eps, f * pr.t) < pr.energy_at_t);
        }
    }
}

TEST_CASE("Nehari projection is scale invariant", "[nehari]")
{
    const NormBundle b = bundle_of(limit_w());
    const NehariProjection a = project_to_nehari(b, 0.05);
    const NehariProjection c = project_to_nehari(b.scaled(3.0), 0.05);
    CHECK_THAT(c.energy_at_t, WithinRel(a.energy_at_t, 1e-12));
    CHECK_THAT(3.0 * c.t, WithinRel(a.t, 1e-12));
}

TEST_CASE("ground energy on the Nehari manifold equals the energy identity", "[radial]")
{
    for (double eps : {0.0, 0.05}) {
        const GroundStateReport rep = ground_state_report(ProblemParams{3, 4.0, eps, 1.0});
        CHECK(rep.identity_gap < 1e-8);
        CHECK(rep.grid_stability < 1e-6);
    }
}

TEST_CASE("shooting rejects invalid parameters", "[radial]")
{
    CHECK_THROWS_AS(shoot_ground_state(ProblemParams{3, 7.0, 0.0, 1.0}), InvalidParams);
    CHECK_THROWS_AS(shoot_ground_state(ProblemParams{3, 4.0, -0.1, 1.0}), InvalidParams);
}

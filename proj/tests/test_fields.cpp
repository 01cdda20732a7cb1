#include <random>

#include <catch_amalgamated.hpp>

#include "critbound/fields.hpp"
#include "critbound/interaction.hpp"
#include "critbound/minmax.hpp"

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

TEST_CASE("integer superadditive excess matches the long-double expansion", "[fields]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = std::pow(10.0, -6.0 * U(rng));
        const double b = std::pow(10.0, -6.0 * U(rng));
        for (double q : {2.0, 4.0, 6.0}) {
            const long double A = a, B = b;
            const long double ref = std::pow(A + B, (long double)q) - std::pow(A, (long double)q) - std::pow(B, (long double)q);
            REQUIRE_THAT(detail::superadditive_excess(a, b, q), WithinRel(static_cast<double>(ref), 1e-9));
        }
    }
    CHECK(detail::superadditive_excess(1.0, 0.0, 4.0) == 0.0);
    CHECK_THAT(detail::superadditive_excess(1.0, 1.0, 2.5), WithinRel(std::pow(2.0, 2.5) - 2.0, 1e-14));
}

TEST_CASE("a single translated bump carries the radial norms", "[fields]")
{
    const ProfilePtr w = limit_w();
    const RadialNorms n = radial_norms(*w);
    const NormBundle b = field_bundle(single_bump(w, {1.3, -0.4, 2.0}));
    CHECK_THAT(b.norm_a_sq, WithinRel(n.h1_sq(), 1e-6));
    CHECK_THAT(b.lp_p, WithinRel(n.lp_p, 1e-6));
    CHECK_THAT(b.lcrit, WithinRel(n.lcrit, 1e-6));
}

TEST_CASE("bundles scale with the field amplitude", "[fields]")
{
    const ProfilePtr w = limit_w();
    const BumpField f = make_psi(w, 0.3, {-1.0, 0.0, 0.0}, 4.0);
    const FieldQuadrature fq(f);
    const NormBundle a = fq.bundle(f);
    const NormBundle b = fq.bundle(f.scaled(2.0));
    CHECK_THAT(b.norm_a_sq, WithinRel(4.0 * a.norm_a_sq, 1e-12));
    CHECK_THAT(b.lp_p, WithinRel(16.0 * a.lp_p, 1e-12));
    CHECK_THAT(b.lcrit, WithinRel(64.0 * a.lcrit, 1e-12));
}

TEST_CASE("swapping the two bump coefficients mirrors the field", "[fields]")
{
    const ProfilePtr w = limit_w();
    const NormBundle a = field_bundle(make_psi(w, 0.2, {-1.0, 0.0, 0.0}, 4.0));
    const NormBundle b = field_bundle(make_psi(w, 0.8, {-1.0, 0.0, 0.0}, 4.0));
    CHECK_THAT(a.norm_a_sq, WithinRel(b.norm_a_sq, 1e-10));
    CHECK_THAT(a.lp_p, WithinRel(b.lp_p, 1e-10));
}

TEST_CASE("two-bump norm expands as self parts plus the pair product", "[fields][interaction]")
{
    const ProfilePtr w = limit_w();
    const double rho = 4.0;
    const RadialNorms n = radial_norms(*w);
    const double pair = cross_term(*w, 3.0, 1.0, {rho, 0.0, 0.0}, {-rho, 0.0, 0.0});
    for (double s : {0.25, 0.5}) {
        const NormBundle b = field_bundle(make_psi(w, s, {-1.0, 0.0, 0.0}, rho));
        // ⟨w₁, w₂⟩_H¹ = ∫ w₁³ w₂ for solutions of -Δw + w = w³
        const double expected = ((1 - s) * (1 - s) + s * s) * n.h1_sq() + 2.0 * s * (1 - s) * pair;
        CHECK_THAT(b.norm_a_sq, WithinRel(expected, 1e-6));
    }
}

TEST_CASE("exterior cutoff lowers the norms of a bump near the hole", "[fields]")
{
    const ProfilePtr w = limit_w();
    const NormBundle whole = field_bundle(single_bump(w, {3.0, 0.0, 0.0}));
    const NormBundle ext = field_bundle(single_bump(w, {3.0, 0.0, 0.0}, DomainSpec::exterior(1.0)));
    CHECK(ext.lp_p < whole.lp_p);
    CHECK(ext.l2 < whole.l2);
}

TEST_CASE("fields validate their terms", "[fields]")
{
    BumpField empty;
    CHECK_THROWS_AS(FieldQuadrature(empty), InvalidParams);
    CHECK_THROWS_AS(cross_term(*limit_w(), 0.5, 1.0, {0, 0, 0}, {1, 0, 0}), InvalidParams);
}

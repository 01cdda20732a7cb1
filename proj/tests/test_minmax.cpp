#include <catch_amalgamated.hpp>

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

TEST_CASE("sigma grid lies on the sphere |y - e1| = 2 with both poles", "[minmax]")
{
    const std::vector<SigmaPoint> g = sigma_grid(16, 8);
    REQUIRE(g.size() == 16 * 8 + 2);
    CHECK(g.front().y == Vec3{3.0, 0.0, 0.0});
    CHECK(g.back().y == Vec3{-1.0, 0.0, 0.0});
    for (const auto& p : g) {
        CHECK_THAT(norm(p.y - e1), WithinAbs(2.0, 1e-14));
    }
    CHECK_THROWS_AS(sigma_grid(0, 2), InvalidParams);
}

TEST_CASE("psi puts weight 1-s at rho e1 and s at rho y", "[minmax]")
{
    const BumpField f = make_psi(limit_w(), 0.25, {-1.0, 0.0, 0.0}, 6.0);
    REQUIRE(f.terms.size() == 2);
    CHECK(f.terms[0].center == Vec3{6.0, 0.0, 0.0});
    CHECK(f.terms[0].coeff == 0.75);
    CHECK(f.terms[1].center == Vec3{-6.0, 0.0, 0.0});
    CHECK(f.terms[1].coeff == 0.25);
    CHECK_FALSE(f.cutoff.has_value());
    CHECK(make_psi(limit_w(), 0.25, {-1.0, 0.0, 0.0}, 6.0, DomainSpec::exterior(1.0)).cutoff.has_value());
    CHECK_THROWS_AS(make_psi(limit_w(), 1.5, {-1.0, 0.0, 0.0}, 6.0), InvalidParams);
}

TEST_CASE("scan over the antipodal point peaks at s = 1/2", "[minmax]")
{
    ScanOptions opt;
    opt.s_count = 5;
    opt.n_azimuth = 1;
    opt.n_polar = 0;
    const ScanResult r = scan_levels(limit_w(), 5.0, 0.05, {}, {}, opt);
    CHECK(r.scan.size() == 10);
    CHECK(r.B <= r.A);
    CHECK(r.max_nehari_residual < 1e-10);
    // the -e1 pole gives a field symmetric under s -> 1-s
    CHECK_THAT(r.s_at_max, WithinAbs(0.5, 1e-6));
}

TEST_CASE("beta zero on the symmetric configuration sits at s = 1/2", "[minmax]")
{
    BetaZeroOptions opt;
    opt.precondition_azimuth = 2;
    opt.precondition_polar = 1;
    const BetaZeroResult z = find_beta_zero(limit_w(), 5.0, 0.05, {}, {}, opt);
    CHECK_THAT(z.s_star, WithinAbs(0.5, 1e-8));
    CHECK(z.nehari_residual < 1e-10);
    CHECK(z.c_hat <= z.energy);
}

TEST_CASE("chain report names every inequality", "[minmax]")
{
    ScanResult s;
    s.A = 30.0;
    s.B = 15.0;
    BetaZeroResult z;
    z.c_hat = 29.0;
    const EnergyLedger L = inequality_chain_report(s, z, 18.9, 16.0, 0.05);
    REQUIRE(L.checks.size() == 5);
    CHECK(L.all_pass());
    z.c_hat = 31.0;
    CHECK_FALSE(inequality_chain_report(s, z, 18.9, 16.0, 0.05).all_pass());
}

TEST_CASE("rho threshold check flags separations below rho_bar", "[minmax]")
{
    CHECK(rho_threshold_check(6.0, 3.0).pass);
    CHECK(rho_threshold_check(3.0, 3.0).pass);
    const LedgerCheck low = rho_threshold_check(2.0, 3.0);
    CHECK_FALSE(low.pass);
    CHECK(low.note.find("below threshold") != std::string::npos);
}

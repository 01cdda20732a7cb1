#include <catch_amalgamated.hpp>

#include "critbound/barycenter.hpp"
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

TEST_CASE("ball averages agree with a Cartesian midpoint oracle", "[barycenter]")
{
    const RadialProfile& w = *limit_w();
    const auto& rule = detail::ball_rule();
    for (double d : {0.0, 0.4, 1.0, 2.5}) {
        const int n = 120;
        const double h = 2.0 / n;
        long double sum = 0.0L;
        long double count = 0.0L;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    const Vec3 x{-1.0 + (i + 0.5) * h, -1.0 + (j + 0.5) * h, -1.0 + (k + 0.5) * h};
                    if (dot(x, x) <= 1.0) {
                        sum += w.value(norm(x + Vec3{d, 0.0, 0.0}));
                        count += 1.0L;
                    }
                }
            }
        }
        const double ref = static_cast<double>(sum / count);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            s += rule.w[q] * w.value(norm(rule.x[q] + Vec3{d, 0.0, 0.0}));
        }
        CHECK_THAT(radial_ball_average(w, d), WithinRel(ref, 1e-4));
        // the product rule sees the kink of w at its center when d = 1
        CHECK_THAT(s / (4.0 * M_PI / 3.0), WithinRel(ref, 1e-3));
    }
    double vol = 0.0;
    for (double wq : rule.w) {
        vol += wq;
    }
    CHECK_THAT(vol, WithinRel(4.0 * M_PI / 3.0, 1e-12));
}

TEST_CASE("radial bump at the origin has barycenter zero", "[barycenter]")
{
    const Vec3 b = barycenter(single_bump(limit_w(), {0.0, 0.0, 0.0}));
    CHECK(norm(b) < 1e-12);
}

TEST_CASE("barycenter is exactly scale invariant", "[barycenter]")
{
    const BumpField f = make_psi(limit_w(), 0.3, sigma_point(1.0, 2.0).y, 6.0);
    const Vec3 a = barycenter(f);
    for (double t : {1e-3, 0.5, 3.0, 1e4}) {
        CHECK(barycenter(f.scaled(t)) == a);
    }
}

TEST_CASE("barycenter follows translations within the lattice error", "[barycenter]")
{
    const BarycenterOptions opt;
    for (const Vec3& z : {Vec3{0.37, -1.13, 2.71}, Vec3{-4.0, 0.1, 0.05}}) {
        const Vec3 b = barycenter(single_bump(limit_w(), z), opt);
        CHECK(norm(b - z) < 2.0 * opt.spacing);
    }
}

TEST_CASE("barycenter commutes with the reflection x2 -> -x2", "[barycenter]")
{
    const Vec3 y = sigma_point(0.7, 1.1).y;
    const Vec3 y_ref{y[0], -y[1], y[2]};
    const Vec3 a = barycenter(make_psi(limit_w(), 0.4, y, 5.0));
    const Vec3 b = barycenter(make_psi(limit_w(), 0.4, y_ref, 5.0));
    CHECK_THAT(a[0], WithinAbs(b[0], 1e-10));
    CHECK_THAT(a[1], WithinAbs(-b[1], 1e-10));
    CHECK_THAT(a[2], WithinAbs(b[2], 1e-10));
}

TEST_CASE("precomputed map agrees with a fresh evaluation", "[barycenter]")
{
    const BumpField f = make_psi(limit_w(), 0.5, sigma_point(0.0, 1.5).y, 6.0);
    const BarycenterMap map(f);
    for (double s : {0.1, 0.5, 0.9}) {
        const Vec3 direct = barycenter(make_psi(limit_w(), s, sigma_point(0.0, 1.5).y, 6.0));
        Vec3 via{};
        if (map.evaluate({1.0 - s, s}, &via)) {
            CHECK(norm(via - direct) < 1e-12);
        }
    }
}

TEST_CASE("barycenter rejects the zero field", "[barycenter]")
{
    CHECK_THROWS_AS(barycenter(single_bump(limit_w(), {0.0, 0.0, 0.0}).scaled(0.0)), DegenerateField);
}

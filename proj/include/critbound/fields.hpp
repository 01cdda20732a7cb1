#pragma once

// Superpositions u = t ϑ Σ c_i w_i(· - z_i) of translated radial profiles in R³
// and their norms.
//
// Norms are split into exact radial self parts plus localized corrections:
//
//   pair interaction   ∫ ∇w_i·∇w_j + w_i w_j,   ∫ W^q - Σ (c_i w_i)^q
//                      over a cylinder about the segment z_i z_j;
//   cutoff collar      ∫ |∇(ϑW)|² - |∇W|² + (ϑ² - 1)W²,  ∫ (ϑ^q - 1) W^q
//                      over B_{R₀+1}(0);
//   potential          ∫ (a - 1) ϑ² W²  over the support of a - 1.
//
// Corrections are exponentially small in the separations, so computing them
// directly keeps them resolved to many digits below the size of the totals.
// When all centers lie on one line the collar and potential integrals are
// reduced to two dimensions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/geometry.hpp"
#include "critbound/nehari.hpp"
#include "critbound/potential.hpp"
#include "critbound/quadrature.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

using ProfilePtr = std::shared_ptr<const RadialProfile>;

struct BumpTerm {
    ProfilePtr profile;
    Vec3 center{0.0, 0.0, 0.0};
    double coeff = 1.0;
};

/// u(x) = scale · ϑ(x) · Σ coeff_i · w_i(|x - center_i|), ϑ ≡ 1 without cutoff.
struct BumpField {
    std::vector<BumpTerm> terms;
    std::optional<CutoffSpec> cutoff;
    DomainSpec domain;
    double scale = 1.0;

    void validate() const
    {
        domain.validate();
        if (domain.is_exterior() && !cutoff) {
            throw InvalidParams("a field on an exterior domain needs a cutoff");
        }
        for (const auto& t : terms) {
            if (!t.profile) {
                throw InvalidParams("bump term without profile");
            }
            if (t.profile->params().N != 3) {
                throw InvalidParams("nonradial fields are supported for N = 3 only");
            }
            if (!(t.coeff >= 0.0)) {
                throw InvalidParams("bump coefficients must be nonnegative");
            }
            const auto& a = t.profile->params();
            const auto& b = terms.front().profile->params();
            if (a.N != b.N || a.p != b.p || a.eps != b.eps) {
                throw InvalidParams("bump terms must share their problem parameters");
            }
        }
    }

    [[nodiscard]] const ProblemParams& params() const { return terms.front().profile->params(); }

    [[nodiscard]] double theta(const Vec3& x) const { return cutoff ? cutoff_value(*cutoff, x) : 1.0; }

    /// Σ c_i w_i(x - z_i) without cutoff or scale.
    [[nodiscard]] double raw_value(const Vec3& x) const
    {
        double s = 0.0;
        for (const auto& t : terms) {
            if (t.coeff != 0.0) {
                s += t.coeff * t.profile->value(norm(x - t.center));
            }
        }
        return s;
    }

    [[nodiscard]] double value(const Vec3& x) const { return scale * theta(x) * raw_value(x); }

    [[nodiscard]] BumpField scaled(double t) const
    {
        BumpField out = *this;
        out.scale *= t;
        return out;
    }

    /// Moves every bump by z; the hole stays at the origin.
    [[nodiscard]] BumpField translated(const Vec3& z) const
    {
        BumpField out = *this;
        for (auto& t : out.terms) {
            t.center = t.center + z;
        }
        return out;
    }
};

/// ϑ·w(· - z) on the given domain (the cutoff is dropped on R³).
inline BumpField single_bump(ProfilePtr profile, const Vec3& z, const DomainSpec& domain = {})
{
    BumpField f;
    f.terms.push_back({std::move(profile), z, 1.0});
    f.domain = domain;
    if (domain.is_exterior()) {
        f.cutoff = cutoff_for(domain);
    }
    return f;
}

struct QuadratureOptions {
    double rel_tol = 1e-6;     ///< on each correction between refinement levels
    double abs_floor = 1e-14;  ///< relative to the total it corrects
    double fail_tol = 1e-4;    ///< disagreement that raises QuadratureNotConverged
    int max_level = 3;
    double truncation = 24.0;  ///< ignore the region where r_i + r_j > |z_i - z_j| + truncation
    double base_panel = 1.0;   ///< panel width at level 0, halved per level
};

namespace detail {

inline bool collinear(const std::vector<Vec3>& pts, Vec3* axis)
{
    std::vector<Vec3> distinct;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : distinct) {
            seen |= norm(p - q) < 1e-12;
        }
        if (!seen) {
            distinct.push_back(p);
        }
    }
    if (distinct.size() < 2) {
        *axis = e1;
        return true;
    }
    const Vec3 dir = distinct[1] - distinct[0];
    for (std::size_t k = 2; k < distinct.size(); ++k) {
        const Vec3 v = distinct[k] - distinct[0];
        if (norm(cross(dir, v)) > 1e-10 * norm(dir) * std::max(1.0, norm(v))) {
            return false;
        }
    }
    *axis = dir;
    return true;
}

inline std::vector<double> refine_breaks(std::vector<double> breaks, double h)
{
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 breaks.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((breaks[i + 1] - breaks[i]) / h)));
        for (std::size_t k = 0; k < n; ++k) {
            out.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * static_cast<double>(k) / static_cast<double>(n));
        }
    }
    out.push_back(breaks.back());
    return out;
}

/// Calls f(x, weight) for Gauss nodes on a cylinder about the line
/// origin + ξ e, ξ ∈ [xi_lo, xi_hi], distance ≤ rho_hi. The azimuth is
/// integrated analytically, so f must be axially symmetric.
template <class F>
void cylinder_nodes(const Vec3& origin, const Vec3& axis, std::vector<double> xi_breaks,
                    double rho_hi, double h, F&& f)
{
    const auto& g = quad::gauss_rule<8>();
    const Frame frame(axis);
    const auto xs = refine_breaks(std::move(xi_breaks), h);
    const auto rs = refine_breaks({0.0, rho_hi}, h);
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
        const double hx = 0.5 * (xs[a + 1] - xs[a]);
        const double mx = 0.5 * (xs[a + 1] + xs[a]);
        for (std::size_t b = 0; b + 1 < rs.size(); ++b) {
            const double hr = 0.5 * (rs[b + 1] - rs[b]);
            const double mr = 0.5 * (rs[b + 1] + rs[b]);
            for (std::size_t i = 0; i < 8; ++i) {
                const double xi = mx + hx * g.x[i];
                for (std::size_t j = 0; j < 8; ++j) {
                    const double rho = mr + hr * g.x[j];
                    const double w = 2.0 * std::numbers::pi * rho * g.w[i] * g.w[j] * hx * hr;
                    f(frame.point(origin, xi, rho, 0.0), w);
                }
            }
        }
    }
}

/// Calls f(x, weight) for nodes on the ball B_R(center) in spherical
/// coordinates with polar axis `axis`. With `axisymmetric` the azimuth is
/// integrated analytically.
template <class F>
void ball_nodes(const Vec3& center, const Vec3& axis, double R, std::vector<double> radial_breaks,
                bool axisymmetric, double h, F&& f)
{
    const auto& g = quad::gauss_rule<8>();
    const Frame frame(axis);
    radial_breaks.push_back(0.0);
    radial_breaks.push_back(R);
    std::erase_if(radial_breaks, [R](double r) { return r < 0.0 || r > R; });
    const auto rs = refine_breaks(std::move(radial_breaks), h);
    const auto theta_panels = static_cast<std::size_t>(std::ceil(4.0 / h));
    const std::size_t n_phi = axisymmetric ? 1 : static_cast<std::size_t>(std::ceil(16.0 / h));
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
    const double dth = std::numbers::pi / static_cast<double>(theta_panels);
    for (std::size_t a = 0; a + 1 < rs.size(); ++a) {
        const double hr = 0.5 * (rs[a + 1] - rs[a]);
        const double mr = 0.5 * (rs[a + 1] + rs[a]);
        for (std::size_t i = 0; i < 8; ++i) {
            const double r = mr + hr * g.x[i];
            for (std::size_t b = 0; b < theta_panels; ++b) {
                const double mt = (static_cast<double>(b) + 0.5) * dth;
                for (std::size_t j = 0; j < 8; ++j) {
                    const double th = mt + 0.5 * dth * g.x[j];
                    const double base = g.w[i] * hr * g.w[j] * 0.5 * dth * r * r * std::sin(th) * dphi;
                    const double ax = r * std::cos(th);
                    const double rad = r * std::sin(th);
                    for (std::size_t k = 0; k < n_phi; ++k) {
                        f(frame.point(center, ax, rad, static_cast<double>(k) * dphi), base);
                    }
                }
            }
        }
    }
}

/// Exponent as a small integer, or -1.
inline int small_integer(double q)
{
    return (q == std::floor(q) && q >= 1.0 && q <= 16.0) ? static_cast<int>(q) : -1;
}

/// x^q with repeated multiplication for small integer q.
inline double fast_pow(double x, double q)
{
    const int n = small_integer(q);
    if (n < 0) {
        return std::pow(x, q);
    }
    double r = x;
    for (int k = 1; k < n; ++k) {
        r *= x;
    }
    return r;
}

/// (a + b)^q - a^q - b^q for a, b ≥ 0, accurate when one term is tiny. Integer
/// q uses the binomial sum, whose terms are all nonnegative.
inline double superadditive_excess(double a, double b, double q)
{
    if (a < b) {
        std::swap(a, b);
    }
    if (b <= 0.0) {
        return 0.0;
    }
    const int n = small_integer(q);
    if (n >= 2) {
        // a^n Σ_{j=1}^{n-1} C(n,j) r^j with r = b/a ≤ 1, by Horner
        const double r = b / a;
        double binom = n; // C(n, n-1)
        double acc = binom;
        for (int k = n - 2; k >= 1; --k) {
            binom = binom * (k + 1) / (n - k);
            acc = acc * r + binom;
        }
        return acc * r * fast_pow(a, n);
    }
    return std::pow(a, q) * std::expm1(q * std::log1p(b / a)) - std::pow(b, q);
}

struct Sample {
    double w;
    Vec3 grad;
};

inline Sample sample(const RadialProfile& prof, const Vec3& center, const Vec3& x)
{
    const Vec3 d = x - center;
    const double r = norm(d);
    const auto [u, du] = prof.value_and_derivative(r);
    if (r == 0.0) {
        return {u, {0.0, 0.0, 0.0}};
    }
    return {u, (du / r) * d};
}

} // namespace detail

/// Norms of every field sharing one geometry (profiles, centers, cutoff,
/// potential); coefficients and scale vary freely. Node data are cached so a
/// scan over coefficients does no profile lookups.
class FieldQuadrature {
public:
    FieldQuadrature(const BumpField& field, const PotentialSpec& potential = {},
                    const QuadratureOptions& opt = {})
        : opt_(opt), potential_(potential)
    {
        field.validate();
        potential.validate(3);
        if (field.terms.empty()) {
            throw InvalidParams("field has no terms");
        }
        cutoff_ = field.cutoff;
        params_ = field.params();
        for (const auto& t : field.terms) {
            std::size_t k = 0;
            for (; k < terms_.size(); ++k) {
                if (terms_[k].profile == t.profile && norm(terms_[k].center - t.center) < 1e-12) {
                    break;
                }
            }
            if (k == terms_.size()) {
                if (k > 0 && norm(terms_[0].center - t.center) < 1e-12) {
                    throw InvalidParams("distinct profiles at one center are not supported");
                }
                terms_.push_back({t.profile, t.center});
            }
            map_.push_back(k);
        }
        if (terms_.size() > 2) {
            throw InvalidParams("fields with more than two centers are not supported");
        }
        for (const auto& t : terms_) {
            self_.push_back(radial_norms(*t.profile));
        }
        reference_ = merge(field);
        if (std::all_of(reference_.begin(), reference_.end(), [](double c) { return c == 0.0; })) {
            std::fill(reference_.begin(), reference_.end(), 1.0);
        }

        Levels prev = build(0);
        for (int level = 1; level <= opt_.max_level; ++level) {
            Levels next = build(level);
            const double gap = disagreement(prev, next);
            prev = std::move(next);
            level_ = level;
            last_gap_ = gap;
            if (gap <= 1.0) {
                data_ = std::move(prev);
                return;
            }
        }
        if (fail_gap_ > opt_.fail_tol) {
            throw QuadratureNotConverged("field quadrature refinement disagrees by "
                                         + std::to_string(fail_gap_) + " relative");
        }
        data_ = std::move(prev);
    }

    /// Bundle of scale · ϑ Σ c_k w_k with c given per original term.
    [[nodiscard]] NormBundle bundle(std::span<const double> coeffs, double scale = 1.0) const
    {
        if (coeffs.size() != map_.size()) {
            throw InvalidParams("coefficient count does not match the field");
        }
        std::vector<double> c(terms_.size(), 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            c[map_[i]] += coeffs[i];
        }
        return evaluate(data_, c).scaled(scale);
    }

    [[nodiscard]] NormBundle bundle(const BumpField& field) const
    {
        std::vector<double> c;
        for (const auto& t : field.terms) {
            c.push_back(t.coeff);
        }
        return bundle(c, field.scale);
    }

    /// Σ c_i² times the self parts: the bundle with every correction dropped.
    [[nodiscard]] NormBundle self_bundle(std::span<const double> coeffs, double scale = 1.0) const
    {
        std::vector<double> c(terms_.size(), 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            c[map_[i]] += coeffs[i];
        }
        return self_part(c).scaled(scale);
    }

    /// ∫ ∇w_0·∇w_1 + w_0 w_1 for a two-center geometry, 0 otherwise.
    [[nodiscard]] double pair_h1() const { return data_.pair_h1; }
    [[nodiscard]] double pair_l2() const { return data_.pair_l2; }

    [[nodiscard]] int level() const { return level_; }
    /// Last refinement change in units of the convergence tolerance (≤ 1 when converged).
    [[nodiscard]] double last_gap() const { return last_gap_; }

private:
    struct Merged {
        ProfilePtr profile;
        Vec3 center;
    };

    /// Cached data at one refinement level.
    struct Levels {
        double pair_h1 = 0.0; ///< ∫∇w_0·∇w_1 + w_0w_1
        double pair_l2 = 0.0;
        std::vector<double> pair_wt, pair_a, pair_b; ///< cylinder nodes (weight, w_0, w_1)
        // quadratic forms over the collar and potential balls, K×K row-major
        std::vector<double> q_norm, q_l2;
        std::vector<double> ball_wt, ball_theta, ball_w; ///< collar nodes; ball_w is K per node
    };

    QuadratureOptions opt_;
    PotentialSpec potential_;
    std::optional<CutoffSpec> cutoff_;
    ProblemParams params_;
    std::vector<Merged> terms_;
    std::vector<std::size_t> map_;
    std::vector<RadialNorms> self_;
    std::vector<double> reference_;
    Levels data_;
    int level_ = 0;
    double last_gap_ = 0.0;
    double fail_gap_ = 0.0;

    [[nodiscard]] std::vector<double> merge(const BumpField& field) const
    {
        std::vector<double> c(terms_.size(), 0.0);
        for (std::size_t i = 0; i < field.terms.size(); ++i) {
            c[map_[i]] += field.terms[i].coeff;
        }
        return c;
    }

    [[nodiscard]] NormBundle self_part(const std::vector<double>& c) const
    {
        NormBundle b;
        b.p = params_.p;
        b.crit_exp = params_.crit_exp();
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double ck = c[k];
            b.norm_a_sq += ck * ck * self_[k].h1_sq();
            b.l2 += ck * ck * self_[k].l2_sq;
            b.lp_p += std::pow(ck, b.p) * self_[k].lp_p;
            b.lcrit += std::pow(ck, b.crit_exp) * self_[k].lcrit;
        }
        return b;
    }

    [[nodiscard]] NormBundle evaluate(const Levels& d, const std::vector<double>& c) const
    {
        NormBundle b = self_part(c);
        const std::size_t K = c.size();
        const double p = b.p;
        const double q = b.crit_exp;
        if (K == 2) {
            b.norm_a_sq += 2.0 * c[0] * c[1] * d.pair_h1;
            b.l2 += 2.0 * c[0] * c[1] * d.pair_l2;
            double sp = 0.0, sq = 0.0;
            for (std::size_t n = 0; n < d.pair_wt.size(); ++n) {
                const double x = c[0] * d.pair_a[n];
                const double y = c[1] * d.pair_b[n];
                sp += d.pair_wt[n] * detail::superadditive_excess(x, y, p);
                sq += d.pair_wt[n] * detail::superadditive_excess(x, y, q);
            }
            b.lp_p += sp;
            b.lcrit += sq;
        }
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) {
                b.norm_a_sq += c[i] * c[j] * d.q_norm[i * K + j];
                b.l2 += c[i] * c[j] * d.q_l2[i * K + j];
            }
        }
        double sp = 0.0, sq = 0.0;
        for (std::size_t n = 0; n < d.ball_wt.size(); ++n) {
            double W = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                W += c[k] * d.ball_w[n * K + k];
            }
            if (W <= 0.0) {
                continue;
            }
            const double th = d.ball_theta[n];
            sp += d.ball_wt[n] * (detail::fast_pow(th, p) - 1.0) * detail::fast_pow(W, p);
            sq += d.ball_wt[n] * (detail::fast_pow(th, q) - 1.0) * detail::fast_pow(W, q);
        }
        b.lp_p += sp;
        b.lcrit += sq;
        b.norm_a_sq = std::max(b.norm_a_sq, 0.0);
        b.l2 = std::max(b.l2, 0.0);
        b.lp_p = std::max(b.lp_p, 0.0);
        b.lcrit = std::max(b.lcrit, 0.0);
        return b;
    }

    /// Largest component-wise change between levels in units of the tolerance.
    double disagreement(const Levels& a, const Levels& b)
    {
        const NormBundle self = self_part(reference_);
        const NormBundle x = evaluate(a, reference_);
        const NormBundle y = evaluate(b, reference_);
        double worst = 0.0;
        double worst_rel = 0.0;
        auto check = [&](double s, double u, double v) {
            const double corr = v - s;
            const double change = std::abs(v - u);
            const double allowed = opt_.rel_tol * std::abs(corr) + opt_.abs_floor * std::abs(v);
            worst = std::max(worst, allowed > 0.0 ? change / allowed : (change > 0.0 ? 2.0 : 0.0));
            if (v != 0.0) {
                worst_rel = std::max(worst_rel, change / std::abs(v));
            }
        };
        check(self.norm_a_sq, x.norm_a_sq, y.norm_a_sq);
        check(self.l2, x.l2, y.l2);
        check(self.lp_p, x.lp_p, y.lp_p);
        check(self.lcrit, x.lcrit, y.lcrit);
        fail_gap_ = worst_rel;
        return worst;
    }

    [[nodiscard]] Levels build(int level) const
    {
        const double h = opt_.base_panel * std::ldexp(1.0, -level);
        const std::size_t K = terms_.size();
        Levels d;
        d.q_norm.assign(K * K, 0.0);
        d.q_l2.assign(K * K, 0.0);

        if (K == 2) {
            const Vec3 z0 = terms_[0].center;
            const Vec3 z1 = terms_[1].center;
            const double dist = norm(z1 - z0);
            const double T = opt_.truncation;
            const double rho_hi = std::sqrt(0.25 * (dist + T) * (dist + T) - 0.25 * dist * dist);
            const RadialProfile& w0 = *terms_[0].profile;
            const RadialProfile& w1 = *terms_[1].profile;
            detail::cylinder_nodes(z0, z1 - z0, {-0.5 * T, 0.0, dist, dist + 0.5 * T}, rho_hi, h,
                                   [&](const Vec3& x, double wt) {
                                       const double r0 = norm(x - z0);
                                       const double r1 = norm(x - z1);
                                       if (r0 + r1 > dist + T) {
                                           return;
                                       }
                                       const auto a = detail::sample(w0, z0, x);
                                       const auto b = detail::sample(w1, z1, x);
                                       d.pair_h1 += wt * (dot(a.grad, b.grad) + a.w * b.w);
                                       d.pair_l2 += wt * a.w * b.w;
                                       d.pair_wt.push_back(wt);
                                       d.pair_a.push_back(a.w);
                                       d.pair_b.push_back(b.w);
                                   });
        }

        std::vector<Vec3> centers;
        for (const auto& t : terms_) {
            centers.push_back(t.center);
        }

        if (cutoff_) {
            const CutoffSpec cut = *cutoff_;
            const Vec3 origin{0.0, 0.0, 0.0};
            std::vector<Vec3> pts = centers;
            pts.push_back(origin);
            Vec3 axis{};
            const bool axisym = detail::collinear(pts, &axis);
            std::vector<detail::Sample> s(K);
            detail::ball_nodes(origin, axis, cut.outer_radius(), {cut.inner_radius}, axisym, h,
                               [&](const Vec3& x, double wt) {
                                   const double th = cutoff_value(cut, x);
                                   const Vec3 gth = cutoff_gradient(cut, x);
                                   for (std::size_t k = 0; k < K; ++k) {
                                       s[k] = detail::sample(*terms_[k].profile, terms_[k].center, x);
                                   }
                                   for (std::size_t i = 0; i < K; ++i) {
                                       for (std::size_t j = 0; j < K; ++j) {
                                           const double ww = s[i].w * s[j].w;
                                           const double v = (th * th - 1.0) * (dot(s[i].grad, s[j].grad) + ww)
                                                            + th * (s[i].w * dot(gth, s[j].grad)
                                                                    + s[j].w * dot(gth, s[i].grad))
                                                            + dot(gth, gth) * ww;
                                           d.q_norm[i * K + j] += wt * v;
                                           d.q_l2[i * K + j] += wt * (th * th - 1.0) * ww;
                                       }
                                   }
                                   d.ball_wt.push_back(wt);
                                   d.ball_theta.push_back(th);
                                   for (std::size_t k = 0; k < K; ++k) {
                                       d.ball_w.push_back(s[k].w);
                                   }
                               });
        }

        if (!potential_.is_constant()) {
            std::vector<Vec3> pts = centers;
            pts.push_back(potential_.center);
            if (cutoff_) {
                pts.push_back({0.0, 0.0, 0.0});
            }
            Vec3 axis{};
            const bool axisym = detail::collinear(pts, &axis);
            std::vector<double> breaks = potential_.breakpoints();
            if (cutoff_ && norm(potential_.center) < 1e-12) {
                breaks.push_back(cutoff_->inner_radius);
                breaks.push_back(cutoff_->outer_radius());
            }
            std::vector<double> w(K);
            detail::ball_nodes(potential_.center, axis, potential_.support_radius(), breaks, axisym, h,
                               [&](const Vec3& x, double wt) {
                                   const double ex = potential_.excess(x);
                                   if (ex == 0.0) {
                                       return;
                                   }
                                   const double th = cutoff_ ? cutoff_value(*cutoff_, x) : 1.0;
                                   for (std::size_t k = 0; k < K; ++k) {
                                       w[k] = terms_[k].profile->value(norm(x - terms_[k].center));
                                   }
                                   for (std::size_t i = 0; i < K; ++i) {
                                       for (std::size_t j = 0; j < K; ++j) {
                                           d.q_norm[i * K + j] += wt * ex * th * th * w[i] * w[j];
                                       }
                                   }
                               });
        }
        return d;
    }
};

/// Full bundle of a field against a potential.
inline NormBundle field_bundle(const BumpField& field, const PotentialSpec& potential = {},
                               const QuadratureOptions& opt = {})
{
    return FieldQuadrature(field, potential, opt).bundle(field);
}

inline double norm_a_squared(const BumpField& field, const PotentialSpec& potential = {},
                             const QuadratureOptions& opt = {})
{
    return field_bundle(field, potential, opt).norm_a_sq;
}

/// |u|_q for q ∈ {2, p, 2*}.
inline double lebesgue_norm(const BumpField& field, double q, const QuadratureOptions& opt = {})
{
    const NormBundle b = field_bundle(field, {}, opt);
    if (q == 2.0) {
        return std::sqrt(b.l2);
    }
    if (q == b.p) {
        return std::pow(b.lp_p, 1.0 / q);
    }
    if (q == b.crit_exp) {
        return std::pow(b.lcrit, 1.0 / q);
    }
    throw InvalidParams("lebesgue_norm supports q in {2, p, 2*}");
}

/// ∫ u^e1(x - z1) u^e2(x - z2) dx over R³, refined until the relative change
/// drops below rel_tol.
inline double cross_term(const RadialProfile& profile, double exp1, double exp2, const Vec3& z1,
                         const Vec3& z2, const QuadratureOptions& opt = {})
{
    if (!(exp1 >= 1.0 && exp2 >= 1.0)) {
        throw InvalidParams("cross_term exponents must be >= 1");
    }
    const double dist = norm(z2 - z1);
    if (dist < 1e-12) {
        const double e = exp1 + exp2;
        return radial_integral(profile, [e](double, double u, double) { return std::pow(std::abs(u), e); });
    }
    const double T = opt.truncation;
    const double rho_hi = std::sqrt(0.25 * (dist + T) * (dist + T) - 0.25 * dist * dist);
    auto at_level = [&](int level) {
        double sum = 0.0;
        detail::cylinder_nodes(z1, z2 - z1, {-0.5 * T, 0.0, dist, dist + 0.5 * T}, rho_hi,
                               opt.base_panel * std::ldexp(1.0, -level), [&](const Vec3& x, double wt) {
                                   const double r1 = norm(x - z1);
                                   const double r2 = norm(x - z2);
                                   if (r1 + r2 > dist + T) {
                                       return;
                                   }
                                   sum += wt * std::pow(std::max(profile.value(r1), 0.0), exp1)
                                          * std::pow(std::max(profile.value(r2), 0.0), exp2);
                               });
        return sum;
    };
    double prev = at_level(0);
    double change = 0.0;
    for (int level = 1; level <= opt.max_level; ++level) {
        const double next = at_level(level);
        change = std::abs(next - prev);
        prev = next;
        if (change <= opt.rel_tol * std::abs(next)) {
            return next;
        }
    }
    if (change > opt.fail_tol * std::abs(prev)) {
        throw QuadratureNotConverged("cross_term refinement disagrees by "
                                     + std::to_string(change / std::abs(prev)) + " relative");
    }
    return prev;
}

} // namespace critbound

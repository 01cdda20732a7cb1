#pragma once

// Functionals E, E_ε, E_∞, E_{ε,∞} and projections onto their Nehari manifolds.
//
// All four share the form  ½‖u‖² - (1/p)|u|_p^p - (ε/2*)|u|_{2*}^{2*}; they
// differ only in whether ‖·‖ carries a(x) and whether ε vanishes, which is
// decided by the NormBundle handed in.

#include <array>
#include <cmath>
#include <cstddef>

#include "critbound/errors.hpp"
#include "critbound/params.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

/// The integrals a functional needs. Exponents travel with the numbers so a
/// bundle can be rescaled without outside context.
struct NormBundle {
    double norm_a_sq = 0.0; ///< ∫|∇u|² + a u²
    double lp_p = 0.0;      ///< ∫|u|^p
    double lcrit = 0.0;     ///< ∫|u|^(2*)
    double l2 = 0.0;        ///< ∫u²
    double p = 4.0;
    double crit_exp = 6.0;

    /// Bundle of λu.
    [[nodiscard]] NormBundle scaled(double lambda) const
    {
        const double a = std::abs(lambda);
        NormBundle out = *this;
        out.norm_a_sq *= a * a;
        out.l2 *= a * a;
        out.lp_p *= std::pow(a, p);
        out.lcrit *= std::pow(a, crit_exp);
        return out;
    }

    [[nodiscard]] bool is_zero() const
    {
        return norm_a_sq == 0.0 && lp_p == 0.0 && lcrit == 0.0 && l2 == 0.0;
    }
};

inline NormBundle bundle_from_radial(const RadialNorms& n, const ProblemParams& params)
{
    return NormBundle{n.h1_sq(), n.lp_p, n.lcrit, n.l2_sq, params.p, params.crit_exp()};
}

/// Bundle of a radial profile on R^N with a ≡ 1.
inline NormBundle bundle_of(const RadialProfile& profile)
{
    return bundle_from_radial(radial_norms(profile), profile.params());
}

/// ½‖u‖² - (1/p)|u|_p^p - (ε/2*)|u|_{2*}^{2*}.
inline double energy(const NormBundle& b, double eps)
{
    return 0.5 * b.norm_a_sq - b.lp_p / b.p - eps * b.lcrit / b.crit_exp;
}

/// (½ - 1/p)‖u‖² + ε(1/p - 1/2*)|u|_{2*}^{2*}; equals energy() on the manifold.
inline double energy_on_nehari(const NormBundle& b, double eps)
{
    return (0.5 - 1.0 / b.p) * b.norm_a_sq + eps * (1.0 / b.p - 1.0 / b.crit_exp) * b.lcrit;
}

/// E(t u) from the bundle of u.
inline double energy_along_ray(const NormBundle& b, double eps, double t)
{
    return 0.5 * t * t * b.norm_a_sq - std::pow(t, b.p) * b.lp_p / b.p
           - eps * std::pow(t, b.crit_exp) * b.lcrit / b.crit_exp;
}

/// ‖u‖² - t^(p-2)|u|_p^p - ε t^(2*-2)|u|_{2*}^{2*}; strictly decreasing in t.
inline double nehari_defect(const NormBundle& b, double eps, double t)
{
    return b.norm_a_sq - std::pow(t, b.p - 2.0) * b.lp_p
           - eps * std::pow(t, b.crit_exp - 2.0) * b.lcrit;
}

struct NehariProjection {
    double t = 0.0;
    double energy_at_t = 0.0;
    NormBundle source;
    double eps = 0.0;

    /// Bundle of t·u, which lies on the manifold.
    [[nodiscard]] NormBundle projected() const { return source.scaled(t); }
    [[nodiscard]] double relative_residual() const
    {
        return std::abs(nehari_defect(source, eps, t)) / source.norm_a_sq;
    }
};

/// The unique t > 0 with t·u on the Nehari manifold of the ε-functional.
inline NehariProjection project_to_nehari(const NormBundle& b, double eps)
{
    const bool has_p = b.lp_p > 0.0;
    const bool has_crit = eps > 0.0 && b.lcrit > 0.0;
    if (!has_p && !has_crit) {
        throw DegenerateFunction("Nehari projection of a function with vanishing L^p norms");
    }
    if (!(b.norm_a_sq > 0.0)) {
        throw DegenerateFunction("Nehari projection needs a positive quadratic part");
    }
    NehariProjection out;
    out.source = b;
    out.eps = eps;

    const double t0 = has_p ? std::pow(b.norm_a_sq / b.lp_p, 1.0 / (b.p - 2.0))
                            : std::pow(b.norm_a_sq / (eps * b.lcrit), 1.0 / (b.crit_exp - 2.0));
    if (!has_crit || !has_p) {
        out.t = t0;
        out.energy_at_t = energy_along_ray(b, eps, out.t);
        return out;
    }

    double lo = t0 / 8.0;
    double hi = 8.0 * t0;
    while (nehari_defect(b, eps, lo) <= 0.0) {
        lo /= 8.0;
    }
    while (nehari_defect(b, eps, hi) >= 0.0) {
        hi *= 8.0;
    }
    const double tol = 1e-12 * b.norm_a_sq;
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = nehari_defect(b, eps, t);
        if (std::abs(g) <= tol) {
            break;
        }
        (g > 0.0 ? lo : hi) = t;
        const double dg = -(b.p - 2.0) * std::pow(t, b.p - 3.0) * b.lp_p
                          - eps * (b.crit_exp - 2.0) * std::pow(t, b.crit_exp - 3.0) * b.lcrit;
        double next = t - g / dg;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == t) {
            break;
        }
        t = next;
    }
    out.t = t;
    out.energy_at_t = energy_along_ray(b, eps, t);
    return out;
}

/// True iff E(t* u) beats every sample of E(t u) on 64 log-spaced t in [t*/10, 10 t*].
inline bool verify_max_along_ray(const NormBundle& b, double eps, double t_star)
{
    constexpr int samples = 64;
    const double peak = energy_along_ray(b, eps, t_star);
    for (int k = 0; k < samples; ++k) {
        const double x = -1.0 + 2.0 * k / (samples - 1.0);
        const double t = t_star * std::pow(10.0, x);
        if (t != t_star && energy_along_ray(b, eps, t) >= peak) {
            return false;
        }
    }
    return true;
}

} // namespace critbound

#pragma once

// Two-bump min-max data: ψ_ρ[s,y] = ϑ[(1-s) w(· - ρe₁) + s w(· - ρy)] for s in
// [0,1] and y on Σ = ∂B₂(e₁), the levels A (max over all of [0,1]×Σ) and B
// (max over s = 1), a β-zero point on the axis y = -e₁, and the ordering
// B < Ĉ ≤ A < 2m_ε, m < A < 2m.
//
// Ĉ is the smallest energy over the β-zero candidates that were found, so it
// only bounds the constrained infimum C_{0,ε} from above.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "critbound/barycenter.hpp"
#include "critbound/energy_levels.hpp"
#include "critbound/errors.hpp"
#include "critbound/fields.hpp"
#include "critbound/geometry.hpp"
#include "critbound/nehari.hpp"
#include "critbound/parallel.hpp"
#include "critbound/potential.hpp"

namespace critbound {

/// A point of Σ with its chart coordinates: polar angle from the +e₁ axis
/// about the center e₁, azimuth in the (e₂, e₃) plane.
struct SigmaPoint {
    Vec3 y{};
    double azimuth = 0.0;
    double polar = 0.0;
};

inline SigmaPoint sigma_point(double azimuth, double polar)
{
    const Vec3 dir{std::cos(polar), std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth)};
    SigmaPoint p;
    p.azimuth = azimuth;
    p.polar = polar;
    p.y = e1 + (2.0 / norm(dir)) * dir;
    return p;
}

/// n_azimuth × n_polar interior chart points plus the two poles 3e₁ and -e₁.
inline std::vector<SigmaPoint> sigma_grid(int n_azimuth, int n_polar)
{
    if (n_azimuth < 1 || n_polar < 0) {
        throw InvalidParams("sigma grid needs n_azimuth >= 1 and n_polar >= 0");
    }
    std::vector<SigmaPoint> out;
    out.push_back(sigma_point(0.0, 0.0));
    for (int k = 1; k <= n_polar; ++k) {
        const double polar = M_PI * k / (n_polar + 1.0);
        for (int j = 0; j < n_azimuth; ++j) {
            out.push_back(sigma_point(2.0 * M_PI * j / n_azimuth, polar));
        }
    }
    out.push_back(sigma_point(0.0, M_PI));
    out.back().y = {-1.0, 0.0, 0.0};
    return out;
}

/// ψ_ρ[s,y] with the cutoff iff the domain is exterior.
inline BumpField make_psi(const ProfilePtr& w, double s, const Vec3& y, double rho, const DomainSpec& domain = {})
{
    if (!(s >= 0.0 && s <= 1.0) || !(rho > 0.0)) {
        throw InvalidParams("make_psi needs s in [0,1] and rho > 0");
    }
    BumpField f;
    f.terms = {{w, rho * e1, 1.0 - s}, {w, rho * y, s}};
    f.domain = domain;
    if (domain.is_exterior()) {
        f.cutoff = cutoff_for(domain);
    }
    return f;
}

struct ScanPoint {
    double s = 0.0;
    SigmaPoint y;
    double t = 0.0;      ///< Nehari scale: t·ψ on the manifold
    double energy = 0.0; ///< E_ε(t·ψ)
    Vec3 beta{};
    NormBundle bundle;   ///< of ψ itself, so energy is recomputable
    double nehari_residual = 0.0;
};

struct ScanOptions {
    int s_count = 41;
    int n_azimuth = 16;
    int n_polar = 8;
    bool refine = true;       ///< golden-section in s around the grid maximum
    bool compute_beta = true;
    QuadratureOptions quadrature;
    BarycenterOptions barycenter;
};

struct ScanResult {
    double A = 0.0;
    double B = 0.0;
    double A_grid = 0.0;
    double s_at_max = 0.0;
    SigmaPoint y_at_max;
    double max_nehari_residual = 0.0;
    std::vector<ScanPoint> scan; ///< y-major, s-minor
};

namespace detail {

inline ScanPoint scan_point(const FieldQuadrature& fq, double s, const SigmaPoint& y, double eps)
{
    const std::vector<double> c{1.0 - s, s};
    ScanPoint pt;
    pt.s = s;
    pt.y = y;
    pt.bundle = fq.bundle(c);
    const NehariProjection proj = project_to_nehari(pt.bundle, eps);
    pt.t = proj.t;
    pt.energy = proj.energy_at_t;
    pt.nehari_residual = proj.relative_residual();
    return pt;
}

/// Maximizes f on [a, b] by golden-section search; returns the argmax.
template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-8)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// E_ε(t·ψ_ρ[s,y]) over the s grid × Σ grid. w is the ground state of the
/// limit problem; eps enters only the functional.
inline ScanResult scan_levels(const ProfilePtr& w, double rho, double eps, const DomainSpec& domain = {},
                              const PotentialSpec& potential = {}, const ScanOptions& opt = {})
{
    if (opt.s_count < 2) {
        throw InvalidParams("scan needs at least two s values");
    }
    const std::vector<SigmaPoint> sigma = sigma_grid(opt.n_azimuth, opt.n_polar);
    const auto ns = static_cast<std::size_t>(opt.s_count);
    ScanResult out;
    out.scan.resize(sigma.size() * ns);
    parallel_for(sigma.size(), [&](std::size_t j) {
        const BumpField geom = make_psi(w, 0.5, sigma[j].y, rho, domain);
        const FieldQuadrature fq(geom, potential, opt.quadrature);
        std::optional<BarycenterMap> bmap;
        if (opt.compute_beta) {
            bmap.emplace(geom, opt.barycenter);
        }
        for (std::size_t i = 0; i < ns; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(ns - 1);
            ScanPoint pt = detail::scan_point(fq, s, sigma[j], eps);
            if (bmap) {
                const std::vector<double> c{1.0 - s, s};
                if (!bmap->evaluate(c, &pt.beta)) {
                    pt.beta = barycenter(make_psi(w, s, sigma[j].y, rho, domain), opt.barycenter);
                }
            }
            out.scan[j * ns + i] = pt;
        }
    });
    out.A_grid = -std::numeric_limits<double>::infinity();
    out.B = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k < out.scan.size(); ++k) {
        const ScanPoint& pt = out.scan[k];
        out.max_nehari_residual = std::max(out.max_nehari_residual, pt.nehari_residual);
        if (pt.energy > out.A_grid) {
            out.A_grid = pt.energy;
            best = k;
        }
        if (k % ns == ns - 1) {
            out.B = std::max(out.B, pt.energy);
        }
    }
    out.A = out.A_grid;
    out.s_at_max = out.scan[best].s;
    out.y_at_max = out.scan[best].y;
    if (opt.refine) {
        const double h = 1.0 / static_cast<double>(ns - 1);
        const double a = std::max(0.0, out.s_at_max - h);
        const double b = std::min(1.0, out.s_at_max + h);
        const FieldQuadrature fq(make_psi(w, 0.5, out.y_at_max.y, rho, domain), potential, opt.quadrature);
        auto f = [&](double s) { return detail::scan_point(fq, s, out.y_at_max, eps).energy; };
        const double s_ref = detail::golden_max(f, a, b);
        const double e_ref = f(s_ref);
        if (e_ref > out.A) {
            out.A = e_ref;
            out.s_at_max = s_ref;
        }
    }
    return out;
}

/// A β-zero candidate: a field with β ≈ 0 whose Nehari-projected energy bounds
/// C_{0,ε} from above.
struct BetaZeroCandidate {
    std::string label;
    double energy = 0.0;
    double beta_norm = 0.0;
    bool accepted = false; ///< |β| within beta_tolerance
};

/// Extra candidate fields to try, for a given ρ.
using CandidateFamily = std::function<std::vector<std::pair<std::string, BumpField>>(double rho)>;

struct BetaZeroOptions {
    int precondition_azimuth = 8;
    int precondition_polar = 4;
    double s_tolerance = 1e-10;
    int max_bisection = 80;
    double beta_tolerance = 0.25; ///< accepted |β| for hook candidates (one lattice step)
    QuadratureOptions quadrature;
    BarycenterOptions barycenter;
    std::vector<CandidateFamily> candidates;
};

struct BetaZeroResult {
    double s_star = 0.0;
    double s_lo = 0.0;
    double s_hi = 1.0;
    double beta_lo = 0.0; ///< β₁ at s_lo (> 0)
    double beta_hi = 0.0; ///< β₁ at s_hi (< 0)
    double precondition_min = 0.0; ///< min over sampled y of β(ψ[1,y])·y / |y|
    double t = 0.0;
    double energy = 0.0; ///< E_ε at the projected axis zero
    double nehari_residual = 0.0;
    std::vector<BetaZeroCandidate> candidates;
    double c_hat = 0.0; ///< min energy over accepted candidates, axis zero included
};

/// Bisects s ↦ β₁(ψ_ρ[s,-e₁]) for its sign change after confirming
/// β(ψ_ρ[1,y])·y > 0 on sampled y. Throws NoSignChange when either fails,
/// which signals ρ too small.
inline BetaZeroResult find_beta_zero(const ProfilePtr& w, double rho, double eps, const DomainSpec& domain = {},
                                     const PotentialSpec& potential = {}, const BetaZeroOptions& opt = {})
{
    BetaZeroResult out;
    const std::vector<SigmaPoint> sigma = sigma_grid(opt.precondition_azimuth, opt.precondition_polar);
    std::vector<double> proj(sigma.size(), 0.0);
    parallel_for(sigma.size(), [&](std::size_t j) {
        const Vec3& y = sigma[j].y;
        const Vec3 b = barycenter(make_psi(w, 1.0, y, rho, domain), opt.barycenter);
        proj[j] = dot(b, y) / norm(y);
    });
    out.precondition_min = *std::min_element(proj.begin(), proj.end());
    if (!(out.precondition_min > 0.0)) {
        throw NoSignChange("beta(psi[1,y]).y <= 0 on a sampled y; rho too small");
    }

    const Vec3 axis{-1.0, 0.0, 0.0};
    const BumpField geom = make_psi(w, 0.5, axis, rho, domain);
    const BarycenterMap bmap(geom, opt.barycenter);
    auto beta1 = [&](double s) {
        const std::vector<double> c{1.0 - s, s};
        Vec3 b{};
        if (!bmap.evaluate(c, &b)) {
            b = barycenter(make_psi(w, s, axis, rho, domain), opt.barycenter);
        }
        return b[0];
    };
    double lo = 0.0;
    double hi = 1.0;
    double f_lo = beta1(lo);
    double f_hi = beta1(hi);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        throw NoSignChange("beta_1 along the axis does not change sign: " + std::to_string(f_lo) + ", "
                           + std::to_string(f_hi));
    }
    for (int it = 0; it < opt.max_bisection && hi - lo > opt.s_tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = beta1(mid);
        if (f == 0.0) {
            lo = hi = mid;
            f_lo = f_hi = 0.0;
            break;
        }
        if (f > 0.0) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
            f_hi = f;
        }
    }
    out.s_lo = lo;
    out.s_hi = hi;
    out.beta_lo = f_lo;
    out.beta_hi = f_hi;
    out.s_star = 0.5 * (lo + hi);

    const FieldQuadrature fq(geom, potential, opt.quadrature);
    const ScanPoint pt = detail::scan_point(fq, out.s_star, sigma_point(0.0, M_PI), eps);
    out.t = pt.t;
    out.energy = pt.energy;
    out.nehari_residual = pt.nehari_residual;
    out.candidates.push_back({"axis s*", pt.energy, std::abs(0.5 * (f_lo + f_hi)), true});
    out.c_hat = pt.energy;

    for (const auto& family : opt.candidates) {
        for (const auto& [label, field] : family(rho)) {
            BetaZeroCandidate c;
            c.label = label;
            c.beta_norm = norm(barycenter(field, opt.barycenter));
            c.energy = project_to_nehari(field_bundle(field, potential, opt.quadrature), eps).energy_at_t;
            c.accepted = c.beta_norm <= opt.beta_tolerance;
            if (c.accepted) {
                out.c_hat = std::min(out.c_hat, c.energy);
            }
            out.candidates.push_back(c);
        }
    }
    return out;
}

inline constexpr const char* chain_header =
    "C_hat is the least energy over the beta-zero candidates found; it bounds C_{0,eps} from above "
    "and is not the constrained infimum.";

/// ρ ≥ ρ̄, the separation the two-bump estimates are taken to need. A failing
/// entry marks every later chain entry as outside the hypothesis.
inline LedgerCheck rho_threshold_check(double rho, double rho_bar)
{
    return make_check("rho>=rho_bar", rho_bar, rho, false,
                      rho < rho_bar ? "rho below threshold: the chain is a diagnostic only" : "");
}

/// The min-max ordering with numeric margins: (i) B < Ĉ, (ii) Ĉ ≤ A,
/// (iii) A < 2m_ε, (iv) m < A and A < 2m. Failures are recorded, not thrown.
inline EnergyLedger inequality_chain_report(const ScanResult& scan, const BetaZeroResult& zero, double m,
                                            double m_eps, double eps)
{
    EnergyLedger L;
    L.m = m;
    L.m_eps[eps] = m_eps;
    L.add(make_check("(i) B<C_hat", scan.B, zero.c_hat, true, chain_header));
    L.add(make_check("(ii) C_hat<=A", zero.c_hat, scan.A, false,
                     "A includes the axis point s = 1/2 whenever the beta zero sits there"));
    L.add(make_check("(iii) A<2m_eps", scan.A, 2.0 * m_eps, true));
    L.add(make_check("(iv) m<A", m, scan.A, true));
    L.add(make_check("(iv) A<2m", scan.A, 2.0 * m, true));
    return L;
}

} // namespace critbound

#pragma once

// The levels m, m_ε, S and (1/N) S^(N/2) ε^(-(N-2)/2), and the orderings
// between them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/nehari.hpp"
#include "critbound/parallel.hpp"
#include "critbound/params.hpp"
#include "critbound/quadrature.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

/// One numeric claim lhs < rhs (or lhs ≤ rhs), with its evidence.
struct LedgerCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;

    [[nodiscard]] double margin() const { return rhs - lhs; }
};

inline LedgerCheck make_check(std::string name, double lhs, double rhs, bool strict,
                              std::string note = {})
{
    LedgerCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.pass = strict ? lhs < rhs : lhs <= rhs;
    c.note = std::move(note);
    return c;
}

inline LedgerCheck skipped_check(std::string name, std::string note)
{
    LedgerCheck c;
    c.name = std::move(name);
    c.pass = true;
    c.skipped = true;
    c.note = std::move(note);
    return c;
}

struct EnergyLedger {
    double m = 0.0;
    std::map<double, double> m_eps;
    double S = 0.0;
    std::map<double, double> crit_level;
    std::vector<LedgerCheck> checks;
    double fit_slope = 0.0;     ///< least-squares slope of m_ε against ε
    double fit_intercept = 0.0; ///< its value at ε = 0
    double extrapolated_m = 0.0;

    void add(LedgerCheck c) { checks.push_back(std::move(c)); }

    [[nodiscard]] bool all_pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

// ---------------------------------------------------------------------------
// Bubble and Sobolev constant
// ---------------------------------------------------------------------------

/// C = (N(N-2))^((N-2)/4), so that C (1+r²)^(-(N-2)/2) solves -ΔU = U^(2*-1).
inline double bubble_constant(int N) { return std::pow(N * (N - 2.0), 0.25 * (N - 2)); }

/// Amplitude factor turning the unit bubble into a solution of -ΔU = ε U^(2*-1).
inline double critical_bubble_amplitude(int N, double eps) { return std::pow(eps, -0.25 * (N - 2)); }

/// n^((N-2)/2) Ū(n r) sampled on the default radial grid. It carries no decay
/// constants, so it evaluates to 0 past r_max.
inline RadialProfile bubble_profile(int N, double scale, double r_max = 35.0,
                                    std::size_t nodes = 4000)
{
    if (N < 3 || !(scale > 0.0)) {
        throw InvalidParams("bubble_profile needs N >= 3 and scale > 0");
    }
    const double C = bubble_constant(N) * std::pow(scale, 0.5 * (N - 2));
    const double q = 2.0 * N / (N - 2.0);
    std::vector<double> r = make_radial_grid(r_max, nodes);
    std::vector<double> u(r.size()), du(r.size()), d2u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = scale * r[i];
        const double base = 1.0 + x * x;
        u[i] = C * std::pow(base, -0.5 * (N - 2));
        du[i] = -C * (N - 2) * scale * x * std::pow(base, -0.5 * N);
        const double f = std::pow(u[i], q - 1.0);
        d2u[i] = (i == 0) ? -f / N : -(N - 1) * du[i] / r[i] - f;
    }
    ProblemParams params;
    params.N = N;
    params.p = 1.0 + N / (N - 2.0);
    return RadialProfile(std::move(r), std::move(u), std::move(du), std::move(d2u), params);
}

/// ∫|∇U|² / (∫|U|^(2*))^(2/2*) for radial U on R^N, by exp-sinh quadrature on [0, ∞).
template <class F, class DF>
double rayleigh_quotient(int N, F&& u, DF&& du)
{
    const double q = 2.0 * N / (N - 2.0);
    const double omega = unit_sphere_area(N);
    // Integrands decay at least like r^(-2); the far tail past 1e100 is dropped
    // because the quadrature probes radii where the powers overflow.
    const double grad = omega * quad::integrate_half_line([&](double r) {
        if (r > 1e100) {
            return 0.0;
        }
        const double d = du(r);
        return d * d * std::pow(r, N - 1);
    });
    const double crit = omega * quad::integrate_half_line([&](double r) {
        if (r > 1e100) {
            return 0.0;
        }
        return std::pow(std::abs(u(r)), q) * std::pow(r, N - 1);
    });
    if (!(grad > 0.0 && crit > 0.0) || !std::isfinite(grad) || !std::isfinite(crit)) {
        throw QuadratureNotConverged("Rayleigh quotient integrals did not converge");
    }
    return grad / std::pow(crit, 2.0 / q);
}

/// ∫|∇Ū|² and ∫Ū^(2*) of the unit bubble.
struct BubbleIntegrals {
    double grad_sq = 0.0;
    double crit = 0.0;
};

inline BubbleIntegrals bubble_integrals(int N)
{
    const double C = bubble_constant(N);
    const double q = 2.0 * N / (N - 2.0);
    const double omega = unit_sphere_area(N);
    BubbleIntegrals b;
    b.grad_sq = omega * quad::integrate_half_line([&](double r) {
        if (r > 1e100) {
            return 0.0;
        }
        const double d = C * (N - 2) * r * std::pow(1.0 + r * r, -0.5 * N);
        return d * d * std::pow(r, N - 1);
    });
    b.crit = omega * quad::integrate_half_line([&](double r) {
        if (r > 1e100) {
            return 0.0;
        }
        return std::pow(C * std::pow(1.0 + r * r, -0.5 * (N - 2)), q) * std::pow(r, N - 1);
    });
    return b;
}

/// Best Sobolev constant, as the Rayleigh quotient of the bubble.
inline double sobolev_constant(int N)
{
    if (N < 3) {
        throw InvalidParams("sobolev_constant needs N >= 3");
    }
    const BubbleIntegrals b = bubble_integrals(N);
    const double q = 2.0 * N / (N - 2.0);
    return b.grad_sq / std::pow(b.crit, 2.0 / q);
}

/// (1/N) S^(N/2) ε^(-(N-2)/2).
inline double critical_level(int N, double eps, double S)
{
    if (!(eps > 0.0)) {
        throw InvalidParams("critical_level needs eps > 0");
    }
    return std::pow(S, 0.5 * N) * std::pow(eps, -0.5 * (N - 2)) / N;
}

inline double critical_level(int N, double eps) { return critical_level(N, eps, sobolev_constant(N)); }

/// The same level as the minimum of ½∫|∇(tŪ)|² - (ε/2*)∫(tŪ)^(2*) over the
/// constraint ∫|∇(tŪ)|² = ε∫(tŪ)^(2*).
inline double critical_level_by_scaling(int N, double eps)
{
    const BubbleIntegrals b = bubble_integrals(N);
    const double q = 2.0 * N / (N - 2.0);
    const double t = std::pow(b.grad_sq / (eps * b.crit), 1.0 / (q - 2.0));
    return (0.5 - 1.0 / q) * t * t * b.grad_sq;
}

// ---------------------------------------------------------------------------
// Ground-state levels
// ---------------------------------------------------------------------------

struct GroundStateLevel {
    std::shared_ptr<const RadialProfile> profile;
    NormBundle bundle;
    double energy = 0.0;
};

/// m_ε = E_{ε,∞}(w_ε); with ε = 0 this is m.
inline GroundStateLevel compute_m_eps(const ProblemParams& params, const ShootingOptions& opt = {})
{
    auto profile = std::make_shared<const RadialProfile>(shoot_ground_state(params, opt));
    GroundStateLevel out;
    out.profile = profile;
    out.bundle = bundle_of(*profile);
    out.energy = energy(out.bundle, params.eps);
    return out;
}

/// Shot ground state with the identities it must satisfy.
struct GroundStateReport {
    std::shared_ptr<const RadialProfile> profile;
    ShootingReport shooting;
    RadialNorms norms;
    double energy = 0.0;          ///< E_{ε,∞}(w_ε)
    double nehari_residual = 0.0; ///< relative
    double ode_residual = 0.0;    ///< sup-norm relative
    double identity_gap = 0.0;    ///< |E - ((1/2-1/p)‖w‖² + ε(1/p-1/2*)|w|_{2*}^{2*})| / E
    double energy_refined = 0.0;  ///< same level with twice the nodes
    double grid_stability = 0.0;  ///< |energy_refined - energy| / energy
};

inline GroundStateReport ground_state_report(const ProblemParams& params, const ShootingOptions& opt = {})
{
    GroundStateReport rep;
    rep.profile = std::make_shared<const RadialProfile>(shoot_ground_state(params, opt, &rep.shooting));
    rep.norms = radial_norms(*rep.profile);
    const NormBundle b = bundle_of(*rep.profile);
    rep.energy = energy(b, params.eps);
    rep.nehari_residual = nehari_residual(*rep.profile);
    rep.ode_residual = ode_residual(*rep.profile);
    const double p = params.p;
    const double q = params.crit_exp();
    const double on_nehari = (0.5 - 1.0 / p) * rep.norms.h1_sq() + params.eps * (1.0 / p - 1.0 / q) * rep.norms.lcrit;
    rep.identity_gap = std::abs(rep.energy - on_nehari) / rep.energy;
    ShootingOptions fine = opt;
    fine.nodes = 2 * opt.nodes;
    const RadialProfile w2 = shoot_ground_state(params, fine);
    rep.energy_refined = energy(bundle_of(w2), params.eps);
    rep.grid_stability = std::abs(rep.energy_refined - rep.energy) / rep.energy;
    return rep;
}

/// Value at ε = 0 of the polynomial through (ε_k, m_k): repeated linear
/// extrapolation in Neville's scheme.
inline double richardson_to_zero(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> p = y;
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) {
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        }
    }
    return p[0];
}

/// Least-squares line through (x_k, y_k): {slope, intercept}.
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

struct LevelOrderingOptions {
    ShootingOptions shooting;
    double extrapolation_tolerance = 0.01; ///< relative distance of the extrapolated m_ε to m
};

inline std::string eps_tag(double eps)
{
    std::ostringstream os;
    os << "[eps=" << eps << "]";
    return os.str();
}

/// For each ε: m_ε ≤ m, m_ε below the concentration level, and the Nehari
/// bound m ≤ m_ε + (ε/2*)|t_ε w_ε|^(2*); across the list, m_ε nonincreasing and
/// extrapolating to m.
inline EnergyLedger verify_level_ordering(const ProblemParams& params, std::vector<double> eps_list,
                                          const LevelOrderingOptions& opt = {})
{
    if (eps_list.empty()) {
        throw InvalidParams("verify_level_ordering needs at least one eps");
    }
    std::sort(eps_list.begin(), eps_list.end());
    EnergyLedger ledger;
    ledger.S = sobolev_constant(params.N);

    std::vector<double> all{0.0};
    all.insert(all.end(), eps_list.begin(), eps_list.end());
    std::vector<GroundStateLevel> levels(all.size());
    parallel_for(all.size(), [&](std::size_t i) {
        levels[i] = compute_m_eps(params.with_eps(all[i]), opt.shooting);
    });
    ledger.m = levels[0].energy;
    const double q = params.crit_exp();

    std::vector<double> ms;
    for (std::size_t i = 1; i < all.size(); ++i) {
        const double eps = all[i];
        const double me = levels[i].energy;
        const double crit = critical_level(params.N, eps, ledger.S);
        ledger.m_eps[eps] = me;
        ledger.crit_level[eps] = crit;
        ms.push_back(me);
        const std::string tag = eps_tag(eps);
        ledger.add(make_check("m_eps<=m " + tag, me, ledger.m, false));
        ledger.add(make_check("m_eps<crit_level " + tag, me, crit, true,
                              crit < ledger.m ? "concentration level below m" : ""));
        const NormBundle& b = levels[i].bundle;
        const double t = std::pow(b.norm_a_sq / b.lp_p, 1.0 / (params.p - 2.0));
        const double bound = me + eps / q * std::pow(t, q) * b.lcrit;
        ledger.add(make_check("m<=m_eps+eps/2*|t w_eps|^2* " + tag, ledger.m, bound, false));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < ms.size(); ++i) {
        monotone &= ms[i] <= ms[i - 1];
    }
    ledger.add(make_check("m_eps nonincreasing in eps", monotone ? 0.0 : 1.0, 0.0, false));

    if (eps_list.size() < 2) {
        ledger.add(skipped_check("extrapolation m_eps -> m", "needs at least two eps values"));
        ledger.extrapolated_m = ms.front();
    } else {
        const auto [slope, intercept] = linear_fit(eps_list, ms);
        ledger.fit_slope = slope;
        ledger.fit_intercept = intercept;
        ledger.extrapolated_m = richardson_to_zero(eps_list, ms);
        std::ostringstream note;
        note.precision(10);
        note << "richardson=" << ledger.extrapolated_m << " linear_intercept=" << intercept
             << " slope=" << slope;
        ledger.add(make_check("extrapolation m_eps -> m",
                              std::abs(ledger.extrapolated_m - ledger.m) / ledger.m,
                              opt.extrapolation_tolerance, false, note.str()));
    }
    return ledger;
}

/// Smallest ε on the grid where shooting no longer resolves a ground state.
inline std::optional<double> empirical_eps_threshold(const ProblemParams& params,
                                                     const std::vector<double>& eps_grid,
                                                     const ShootingOptions& opt = {})
{
    for (double eps : eps_grid) {
        try {
            shoot_ground_state(params.with_eps(eps), opt);
        } catch (const NoGroundState&) {
            return eps;
        } catch (const TruncationTooSmall&) {
            return eps;
        } catch (const NoPlateaus&) {
            return eps;
        }
    }
    return std::nullopt;
}

} // namespace critbound

#pragma once

// Interaction of two ground-state bumps at distance 2ρ: the scale δ_ρ, the
// constant c₁ = lim δ_ρ⁻¹ ∫ w^(p-1)(x - ρe₁) w(x - ρy) dx, the exponential
// limit it comes from, and the two-bump norm expansion built on it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/fields.hpp"
#include "critbound/parallel.hpp"
#include "critbound/quadrature.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

/// δ_ρ = (ρ^((N-1)/2) e^(2ρ))⁻¹.
inline double delta_rho(double rho, int N)
{
    if (!(rho > 0.0)) {
        throw InvalidParams("delta_rho needs rho > 0");
    }
    return 1.0 / (std::pow(rho, 0.5 * (N - 1)) * std::exp(2.0 * rho));
}

/// (max - min) / |mean| over the last three entries (all of them if fewer).
inline double plateau_drift(const std::vector<double>& v)
{
    if (v.empty()) {
        return 0.0;
    }
    const std::size_t k0 = v.size() >= 3 ? v.size() - 3 : 0;
    double lo = v[k0];
    double hi = v[k0];
    double mean = 0.0;
    for (std::size_t k = k0; k < v.size(); ++k) {
        lo = std::min(lo, v[k]);
        hi = std::max(hi, v[k]);
        mean += v[k];
    }
    mean /= static_cast<double>(v.size() - k0);
    return (hi - lo) / std::abs(mean);
}

/// γ ∫ h(|x|) e^(-α x·ẑ) dx for radial h in R³: 4πγ ∫ h(r) r² sinh(αr)/(αr) dr.
inline double exponential_moment(const std::function<double(double)>& h, double alpha, double gamma,
                                 double r_hi)
{
    std::vector<double> breaks = quad::uniform_breaks(0.0, r_hi, static_cast<std::size_t>(std::ceil(4.0 * r_hi)));
    const double s = quad::integrate_panels<8>(
        [&](double r) {
            const double ar = alpha * r;
            const double shc = ar < 1e-8 ? 1.0 : std::sinh(ar) / ar;
            return h(r) * r * r * shc;
        },
        breaks);
    return 4.0 * M_PI * gamma * s;
}

/// ∫_{R³} g(|x - D e₁|) h(|x|) dx for radial g, h, in bipolar coordinates:
/// (2π/D) ∫ h(r₂) r₂ ∫_{|D-r₂|}^{D+r₂} g(r₁) r₁ dr₁ dr₂. Independent of the
/// cylinder rules the field quadrature uses.
inline double bipolar_integral(const std::function<double(double)>& g,
                               const std::function<double(double)>& h, double D, double r_hi)
{
    if (!(D > 0.0)) {
        throw InvalidParams("bipolar_integral needs a positive distance");
    }
    auto inner = [&](double a, double b) {
        const double width = b - a;
        if (width <= 0.0) {
            return 0.0;
        }
        const auto panels = static_cast<std::size_t>(std::ceil(4.0 * width)) + 1;
        std::vector<double> br = quad::uniform_breaks(a, b, panels);
        return quad::integrate_panels<8>([&](double r) { return g(r) * r; }, br);
    };
    std::vector<double> breaks = quad::uniform_breaks(0.0, r_hi, static_cast<std::size_t>(std::ceil(4.0 * r_hi)));
    if (D < r_hi) {
        breaks.push_back(D);
        std::sort(breaks.begin(), breaks.end());
    }
    const double s = quad::integrate_panels<8>(
        [&](double r2) { return h(r2) * r2 * inner(std::abs(D - r2), D + r2); }, breaks);
    return 2.0 * M_PI / D * s;
}

struct InteractionReport {
    std::vector<double> rho_list;
    std::vector<double> raw_integrals;
    std::vector<double> delta;
    std::vector<double> normalized; ///< raw / δ_ρ
    double c1_estimate = 0.0;       ///< normalized value at the largest ρ
    double plateau_drift = 0.0;     ///< over the last three ρ
    double target = 0.0;            ///< exponential-limit oracle for the plateau
    double gap = 0.0;               ///< |c1_estimate - target| / target
    double gamma_half = 0.0;        ///< γ(1/2)
};

/// Right side of the exponential limit for c₁: decay_c · 2^(-(N-1)/2) ·
/// ∫ w^e₁(x) e^(-x₁) dx, with the bump carrying exponent e₂ = 1 as the decaying
/// factor.
inline double c1_oracle(const RadialProfile& w, double exp_h = -1.0)
{
    const ProblemParams& pp = w.params();
    if (pp.N != 3) {
        throw InvalidParams("c1_oracle is implemented for N = 3");
    }
    if (!w.has_decay()) {
        throw InvalidParams("c1_oracle needs a profile with decay constants");
    }
    const double e = exp_h > 0.0 ? exp_h : pp.p - 1.0;
    const double r_hi = w.grid().back();
    const double moment = exponential_moment(
        [&](double r) { return std::pow(std::max(w.value(r), 0.0), e); }, 1.0, 1.0, r_hi);
    return w.decay_c() * std::pow(2.0, -0.5 * (pp.N - 1)) * moment;
}

/// Coefficient of δ_ρ in the expansion of ‖ψ‖²/|ψ|_p² around its main term.
inline double gamma_function(double s, double c1, double lp_norm, double p)
{
    if (!(s >= 0.0 && s <= 1.0) || !(lp_norm > 0.0)) {
        throw InvalidParams("gamma_function needs s in [0,1] and |w|_p > 0");
    }
    const double q = 1.0 - s;
    const double sp = std::pow(q, p) + std::pow(s, p);
    const double s2 = q * q + s * s;
    const double bracket = 1.0 - (p - 1.0) / p * s2 / sp * (std::pow(q, p - 2.0) + std::pow(s, p - 2.0));
    return 2.0 * s * q * c1 / (std::pow(sp, 2.0 / p) * lp_norm * lp_norm) * bracket;
}

/// δ_ρ⁻¹ ∫ w^e₁(x - ρe₁) w^e₂(x + ρe₁) dx over rho_list (centers 2ρ apart).
/// Throws PlateauNotReached when the last three values drift by more than
/// max_drift.
inline InteractionReport estimate_c1(const RadialProfile& w, const std::vector<double>& rho_list,
                                     double exp1 = -1.0, double exp2 = 1.0,
                                     const QuadratureOptions& opt = {}, double max_drift = 0.05)
{
    const ProblemParams& pp = w.params();
    if (rho_list.empty()) {
        throw InvalidParams("estimate_c1 needs at least one rho");
    }
    for (std::size_t i = 1; i < rho_list.size(); ++i) {
        if (!(rho_list[i] > rho_list[i - 1])) {
            throw InvalidParams("rho_list must be increasing");
        }
    }
    const double e1 = exp1 > 0.0 ? exp1 : pp.p - 1.0;
    InteractionReport rep;
    rep.rho_list = rho_list;
    rep.raw_integrals.assign(rho_list.size(), 0.0);
    parallel_for(rho_list.size(), [&](std::size_t i) {
        const double rho = rho_list[i];
        rep.raw_integrals[i] = cross_term(w, e1, exp2, {rho, 0.0, 0.0}, {-rho, 0.0, 0.0}, opt);
    });
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
        rep.delta.push_back(delta_rho(rho_list[i], pp.N));
        rep.normalized.push_back(rep.raw_integrals[i] / rep.delta.back());
    }
    rep.c1_estimate = rep.normalized.back();
    rep.plateau_drift = plateau_drift(rep.normalized);
    if (w.has_decay()) {
        // the decaying factor is whichever bump carries exponent 1
        const double h_exp = exp2 == 1.0 ? e1 : exp2;
        rep.target = c1_oracle(w, h_exp);
        rep.gap = std::abs(rep.c1_estimate - rep.target) / rep.target;
    }
    const RadialNorms n = radial_norms(w);
    rep.gamma_half = gamma_function(0.5, rep.c1_estimate, std::pow(n.lp_p, 1.0 / pp.p), pp.p);
    if (rep.plateau_drift > max_drift) {
        throw PlateauNotReached("normalized interaction drifts by " + std::to_string(rep.plateau_drift)
                                + " over the last three rho values");
    }
    return rep;
}

/// Decay triple of g: g(x) ≈ γ e^(-α|x|) |x|^(-b).
struct DecayTriple {
    double alpha = 1.0;
    double b = 0.0;
    double gamma = 1.0;
};

struct BLReport {
    std::vector<double> rho_list;
    std::vector<double> lhs; ///< (∫ g(x + ρz) h(x) dx) e^(α|ρz|) |ρz|^b
    double target = 0.0;     ///< γ ∫ h e^(-α x·ẑ)
    double gap = 0.0;        ///< relative, at the largest ρ
    double drift = 0.0;      ///< over the last three ρ
};

/// Left side of the exponential limit over rho_list against its right side,
/// for radial g and h in R³ (so only |z| enters). h is integrated over
/// [0, h_radius]; g is evaluated wherever the bipolar integral needs it.
inline BLReport bl_limit_check(const std::function<double(double)>& g, const DecayTriple& decay,
                               const std::function<double(double)>& h, double h_radius, const Vec3& z,
                               const std::vector<double>& rho_list, double max_drift = 0.05)
{
    const double zn = norm(z);
    if (!(zn > 0.0) || rho_list.empty()) {
        throw InvalidParams("bl_limit_check needs z != 0 and a nonempty rho_list");
    }
    BLReport rep;
    rep.rho_list = rho_list;
    rep.lhs.assign(rho_list.size(), 0.0);
    parallel_for(rho_list.size(), [&](std::size_t i) {
        const double D = rho_list[i] * zn;
        rep.lhs[i] = bipolar_integral(g, h, D, h_radius) * std::exp(decay.alpha * D) * std::pow(D, decay.b);
    });
    rep.target = exponential_moment(h, decay.alpha, decay.gamma, h_radius);
    rep.gap = std::abs(rep.lhs.back() - rep.target) / std::abs(rep.target);
    rep.drift = plateau_drift(rep.lhs);
    if (rep.drift > max_drift) {
        throw PlateauNotReached("exponential-limit sequence drifts by " + std::to_string(rep.drift));
    }
    return rep;
}

/// (a+b)^p - a^p - b^p - (p-1)(a^(p-1) b + a b^(p-1)), in long double.
inline long double power_inequality_slack(double a, double b, double p)
{
    const long double A = a;
    const long double B = b;
    const long double P = p;
    return std::pow(A + B, P) - std::pow(A, P) - std::pow(B, P)
           - (P - 1) * (std::pow(A, P - 1) * B + A * std::pow(B, P - 1));
}

/// (a+b)^p ≥ a^p + b^p + (p-1)(a^(p-1) b + a b^(p-1)) up to an absolute slack.
inline bool power_inequality(double a, double b, double p, double abs_slack = 1e-12)
{
    return power_inequality_slack(a, b, p) >= -static_cast<long double>(abs_slack);
}

/// Allowed o(δ_ρ) slack, in units of c₁δ_ρ, below and above the main terms.
struct ExpansionBrackets {
    double below = 0.5;
    double above = 2.0;
};

struct TwoBumpRow {
    double s = 0.0;
    double norm_sq = 0.0;      ///< ‖ψ‖_a² by quadrature
    double norm_main = 0.0;    ///< [(1-s)² + s²]‖w‖² + 2s(1-s)c₁δ_ρ
    double lp_p = 0.0;         ///< |ψ|_p^p by quadrature
    double lp_main = 0.0;      ///< [(1-s)^p + s^p]|w|_p^p + (p-1)[(1-s)^(p-1)s + (1-s)s^(p-1)]c₁δ_ρ
    double cross_part = 0.0;   ///< ‖ψ‖² minus its self parts
    double cross_expected = 0.0; ///< 2s(1-s)·(pair H¹ product)
    bool norm_in_bracket = false;
    bool lp_lower_bound = false;

    [[nodiscard]] double norm_residual_over_delta(double delta) const { return (norm_sq - norm_main) / delta; }
    [[nodiscard]] double lp_residual_over_delta(double delta) const { return (lp_p - lp_main) / delta; }
};

struct TwoBumpReport {
    double rho = 0.0;
    double delta = 0.0;
    double c1 = 0.0;
    double w_norm_sq = 0.0;
    double w_lp_p = 0.0;
    double gamma_half = 0.0;
    std::vector<TwoBumpRow> rows;

    [[nodiscard]] bool all_pass() const
    {
        return std::all_of(rows.begin(), rows.end(),
                           [](const TwoBumpRow& r) { return r.norm_in_bracket && r.lp_lower_bound; });
    }
};

/// ψ = ϑ[(1-s) w(x - ρe₁) + s w(x + ρe₁)] against the main terms of its norm
/// expansion, for each s in s_list.
inline TwoBumpReport two_bump_expansion_check(const ProfilePtr& w, double rho, const std::vector<double>& s_list,
                                              double c1, const DomainSpec& domain = {},
                                              const PotentialSpec& potential = {},
                                              const ExpansionBrackets& brackets = {},
                                              const QuadratureOptions& opt = {})
{
    const ProblemParams& pp = w->params();
    TwoBumpReport rep;
    rep.rho = rho;
    rep.delta = delta_rho(rho, pp.N);
    rep.c1 = c1;
    const RadialNorms n = radial_norms(*w);
    rep.w_norm_sq = n.h1_sq();
    rep.w_lp_p = n.lp_p;
    rep.gamma_half = gamma_function(0.5, c1, std::pow(n.lp_p, 1.0 / pp.p), pp.p);

    BumpField field;
    field.terms = {{w, {rho, 0.0, 0.0}, 0.5}, {w, {-rho, 0.0, 0.0}, 0.5}};
    field.domain = domain;
    if (domain.is_exterior()) {
        field.cutoff = cutoff_for(domain);
    }
    const FieldQuadrature fq(field, potential, opt);
    const double p = pp.p;
    const double cd = c1 * rep.delta;
    for (double s : s_list) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw InvalidParams("two-bump weights need s in [0,1]");
        }
        const double q = 1.0 - s;
        const std::vector<double> c{q, s};
        const NormBundle b = fq.bundle(c);
        const NormBundle self = fq.self_bundle(c);
        TwoBumpRow row;
        row.s = s;
        row.norm_sq = b.norm_a_sq;
        row.norm_main = (q * q + s * s) * rep.w_norm_sq + 2.0 * s * q * cd;
        row.lp_p = b.lp_p;
        row.lp_main = (std::pow(q, p) + std::pow(s, p)) * rep.w_lp_p
                      + (p - 1.0) * (std::pow(q, p - 1.0) * s + q * std::pow(s, p - 1.0)) * cd;
        row.cross_part = b.norm_a_sq - self.norm_a_sq;
        row.cross_expected = 2.0 * s * q * fq.pair_h1();
        row.norm_in_bracket = row.norm_sq >= row.norm_main - brackets.below * cd
                              && row.norm_sq <= row.norm_main + brackets.above * cd;
        row.lp_lower_bound = row.lp_p >= row.lp_main - brackets.below * cd;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace critbound

#pragma once

// Domains (R^N or the exterior of a centered ball), the collar cutoff ϑ, and
// radial potentials a(x) = 1 + perturbation.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/geometry.hpp"
#include "critbound/quadrature.hpp"

namespace critbound {

enum class DomainKind { WholeSpace, Exterior };

struct DomainSpec {
    DomainKind kind = DomainKind::WholeSpace;
    double hole_radius = 0.0; ///< R₀; the hole is the closed ball B_{R₀}(0)

    static DomainSpec whole_space() { return {}; }
    static DomainSpec exterior(double r0) { return {DomainKind::Exterior, r0}; }

    [[nodiscard]] bool is_exterior() const { return kind == DomainKind::Exterior; }

    /// Radius r with the complement of Ω inside B_{r-1}(0).
    [[nodiscard]] double collar_radius() const { return is_exterior() ? hole_radius + 1.0 : 0.0; }

    void validate() const
    {
        if (is_exterior() && !(hole_radius > 0.0)) {
            throw InvalidParams("exterior domain needs hole_radius > 0");
        }
    }
};

/// ϑ(x) = smoothstep((|x| - inner_radius) / transition_width).
struct CutoffSpec {
    double inner_radius = 1.0;
    double transition_width = 1.0;

    [[nodiscard]] double outer_radius() const { return inner_radius + transition_width; }

    [[nodiscard]] double radial_value(double r) const
    {
        return quad::smoothstep((r - inner_radius) / transition_width);
    }
    [[nodiscard]] double radial_derivative(double r) const
    {
        return quad::smoothstep_derivative((r - inner_radius) / transition_width) / transition_width;
    }
};

inline CutoffSpec cutoff_for(const DomainSpec& domain)
{
    domain.validate();
    return CutoffSpec{domain.hole_radius, 1.0};
}

inline double cutoff_value(const CutoffSpec& spec, const Vec3& x) { return spec.radial_value(norm(x)); }

/// ∇ϑ(x).
inline Vec3 cutoff_gradient(const CutoffSpec& spec, const Vec3& x)
{
    const double r = norm(x);
    if (r == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    return (spec.radial_derivative(r) / r) * x;
}

enum class PerturbationKind { None, Gaussian, CompactBump, Tabulated };
enum class SignClass { Below, Above, Mixed };

inline std::string to_string(SignClass c)
{
    switch (c) {
    case SignClass::Below: return "below";
    case SignClass::Above: return "above";
    default: return "mixed";
    }
}

/// a(x) = 1 + g(|x - center|).
///
/// gaussian:      g(r) = α exp(-r²/(2σ²))
/// compact bump:  g(r) = α exp(1 - 1/(1 - (r/R)²)) for r < R, else 0
/// tabulated:     a(r) piecewise linear through (r_k, a_k), a = 1 past the table
struct PotentialSpec {
    PerturbationKind kind = PerturbationKind::None;
    double amplitude = 0.0;
    double width = 1.0; ///< σ for gaussian, R for compact bump
    Vec3 center{0.0, 0.0, 0.0};
    std::vector<double> table_r;
    std::vector<double> table_a;

    static PotentialSpec constant() { return {}; }
    static PotentialSpec gaussian(double alpha, double sigma, Vec3 c = {0.0, 0.0, 0.0})
    {
        PotentialSpec s;
        s.kind = PerturbationKind::Gaussian;
        s.amplitude = alpha;
        s.width = sigma;
        s.center = c;
        return s;
    }
    static PotentialSpec compact_bump(double alpha, double radius, Vec3 c = {0.0, 0.0, 0.0})
    {
        PotentialSpec s;
        s.kind = PerturbationKind::CompactBump;
        s.amplitude = alpha;
        s.width = radius;
        s.center = c;
        return s;
    }
    static PotentialSpec tabulated(std::vector<double> r, std::vector<double> a,
                                   Vec3 c = {0.0, 0.0, 0.0})
    {
        PotentialSpec s;
        s.kind = PerturbationKind::Tabulated;
        s.table_r = std::move(r);
        s.table_a = std::move(a);
        s.center = c;
        return s;
    }

    [[nodiscard]] bool is_constant() const
    {
        return kind == PerturbationKind::None
               || (kind != PerturbationKind::Tabulated && amplitude == 0.0);
    }

    /// a - 1 as a function of the distance to the center.
    [[nodiscard]] double radial_excess(double r) const
    {
        switch (kind) {
        case PerturbationKind::None: return 0.0;
        case PerturbationKind::Gaussian: return amplitude * std::exp(-r * r / (2.0 * width * width));
        case PerturbationKind::CompactBump: {
            if (r >= width) {
                return 0.0;
            }
            const double x = r / width;
            return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
        }
        case PerturbationKind::Tabulated: {
            if (r >= table_r.back()) {
                return table_a.back() - 1.0;
            }
            if (r <= table_r.front()) {
                return table_a.front() - 1.0;
            }
            auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
            const auto k = static_cast<std::size_t>(std::distance(table_r.begin(), it)) - 1;
            const double t = (r - table_r[k]) / (table_r[k + 1] - table_r[k]);
            return (1.0 - t) * table_a[k] + t * table_a[k + 1] - 1.0;
        }
        }
        return 0.0;
    }

    [[nodiscard]] double excess(const Vec3& x) const { return radial_excess(norm(x - center)); }
    [[nodiscard]] double value(const Vec3& x) const { return 1.0 + excess(x); }
    [[nodiscard]] double radial_value(double r) const { return 1.0 + radial_excess(r); }

    /// Radius past which |a - 1| < 1e-17 |α| (exactly 0 for compact kinds).
    [[nodiscard]] double support_radius() const
    {
        switch (kind) {
        case PerturbationKind::None: return 0.0;
        case PerturbationKind::Gaussian: return width * std::sqrt(2.0 * std::log(1e17));
        case PerturbationKind::CompactBump: return width;
        case PerturbationKind::Tabulated: return table_r.back();
        }
        return 0.0;
    }

    /// Radii where the perturbation is not smooth; quadrature panels break there.
    [[nodiscard]] std::vector<double> breakpoints() const
    {
        switch (kind) {
        case PerturbationKind::Gaussian: {
            std::vector<double> b;
            for (double k = 1.0; k * width < support_radius(); k += 1.0) {
                b.push_back(k * width);
            }
            return b;
        }
        case PerturbationKind::CompactBump: return {0.5 * width};
        case PerturbationKind::Tabulated: return table_r;
        default: return {};
        }
    }

    [[nodiscard]] SignClass sign_class() const
    {
        bool pos = false;
        bool neg = false;
        if (kind == PerturbationKind::Tabulated) {
            for (double a : table_a) {
                pos |= a > 1.0;
                neg |= a < 1.0;
            }
        } else if (kind != PerturbationKind::None) {
            pos = amplitude > 0.0;
            neg = amplitude < 0.0;
        }
        if (pos && neg) {
            return SignClass::Mixed;
        }
        return neg ? SignClass::Below : SignClass::Above;
    }

    /// inf a over R^N.
    [[nodiscard]] double a0() const
    {
        switch (kind) {
        case PerturbationKind::None: return 1.0;
        case PerturbationKind::Gaussian:
        case PerturbationKind::CompactBump: return std::min(1.0, 1.0 + amplitude);
        case PerturbationKind::Tabulated:
            return std::min(1.0, *std::min_element(table_a.begin(), table_a.end()));
        }
        return 1.0;
    }

    /// ω ∫_0^R |a - 1| r^(N-1) e^(2r) dr over the support (finite for every kind here).
    [[nodiscard]] double weighted_excess(int N) const
    {
        const double R = support_radius();
        if (R == 0.0) {
            return 0.0;
        }
        std::vector<double> breaks{0.0};
        for (double b : breakpoints()) {
            if (b > 0.0 && b < R) {
                breaks.push_back(b);
            }
        }
        breaks.push_back(R);
        std::vector<double> fine;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            for (int k = 0; k < 16; ++k) {
                fine.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * k / 16.0);
            }
        }
        fine.push_back(R);
        return quad::integrate_panels<8>(
            [&](double r) { return std::abs(radial_excess(r)) * std::pow(r, N - 1) * std::exp(2.0 * r); },
            fine);
    }

    void validate(int N = 3) const
    {
        if (kind == PerturbationKind::Tabulated) {
            if (table_r.size() < 2 || table_r.size() != table_a.size()) {
                throw InvalidParams("tabulated potential needs matching r and a columns of length >= 2");
            }
            for (std::size_t k = 1; k < table_r.size(); ++k) {
                if (!(table_r[k] > table_r[k - 1])) {
                    throw InvalidParams("tabulated potential radii must increase");
                }
            }
            if (std::abs(table_a.back() - 1.0) > 1e-12) {
                throw InvalidParams("tabulated potential must end at a = 1");
            }
        }
        if ((kind == PerturbationKind::Gaussian || kind == PerturbationKind::CompactBump)
            && !(width > 0.0)) {
            throw InvalidParams("potential width must be positive");
        }
        if (!(a0() > 0.0)) {
            throw InvalidParams("potential must satisfy a >= a0 > 0, got inf a = "
                                + std::to_string(a0()));
        }
        if (sign_class() == SignClass::Above && !std::isfinite(weighted_excess(N))) {
            throw InvalidParams("above-class potential fails the weighted integrability");
        }
    }
};

} // namespace critbound

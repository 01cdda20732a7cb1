#pragma once

// Barycenter β(u) = ∫ û x / ∫ û with û = [μ(u) - ½ max μ(u)]⁺ and μ(u)(x) the
// average of |u| over B₁(x), sampled on the lattice spacing·Z³.
//
// Fields here are nonnegative, so μ is linear in the bump coefficients: the
// per-bump averages are tabulated once per geometry and any coefficient vector
// is then a weighted sum. The scale factor drops out before μ is formed, which
// makes β(tu) = β(u) exact.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/fields.hpp"
#include "critbound/geometry.hpp"
#include "critbound/parallel.hpp"
#include "critbound/quadrature.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

struct BarycenterOptions {
    double spacing = 0.25;
    double max_floor = 1e-14; ///< DegenerateField below this max μ
    /// Initial lattice cover: nodes where the bump's own ball average exceeds
    /// this fraction of its peak. Widened automatically when too small.
    double cover_fraction = 0.125;
};

/// (1/|B₁|) ∫_{B₁(x)} w(|y - z|) dy as a function of d = |x - z|, via the
/// area of the sphere of radius r about z inside B₁(x).
inline double radial_ball_average(const RadialProfile& w, double d)
{
    const auto& g = quad::gauss_rule<8>();
    auto panel = [&](double a, double b, auto&& area) {
        double s = 0.0;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < 8; ++k) {
            const double r = mid + half * g.x[k];
            s += g.w[k] * std::abs(w.value(r)) * area(r);
        }
        return s * half;
    };
    auto full = [](double r) { return 4.0 * M_PI * r * r; };
    auto cap = [d](double r) { return M_PI * r * (1.0 - (r - d) * (r - d)) / d; };
    double sum = 0.0;
    if (d < 1e-12) {
        sum += panel(0.0, 0.5, full) + panel(0.5, 1.0, full);
    } else {
        const double k = std::abs(1.0 - d);
        if (d < 1.0) {
            sum += panel(0.0, 0.5 * k, full) + panel(0.5 * k, k, full);
        }
        const double hi = d + 1.0;
        for (int j = 0; j < 4; ++j) {
            sum += panel(k + (hi - k) * j / 4.0, k + (hi - k) * (j + 1) / 4.0, cap);
        }
    }
    return sum / (4.0 * M_PI / 3.0);
}

namespace detail {

/// Product rule on B₁(0): 8 Gauss radii × (6 Gauss polar × 12 azimuth) sphere.
struct BallRule {
    std::vector<Vec3> x;
    std::vector<double> w;

    BallRule()
    {
        const auto& gr = quad::gauss_rule<8>();
        const auto& gp = quad::gauss_rule<6>();
        for (std::size_t i = 0; i < 8; ++i) {
            const double s = 0.5 * (1.0 + gr.x[i]);
            const double ws = 0.5 * gr.w[i] * s * s;
            for (std::size_t j = 0; j < 6; ++j) {
                const double ct = gp.x[j];
                const double st = std::sqrt(1.0 - ct * ct);
                for (int k = 0; k < 12; ++k) {
                    const double phi = 2.0 * M_PI * (k + 0.5) / 12.0;
                    x.push_back({s * ct, s * st * std::cos(phi), s * st * std::sin(phi)});
                    w.push_back(ws * gp.w[j] * (2.0 * M_PI / 12.0));
                }
            }
        }
    }
};

inline const BallRule& ball_rule()
{
    static const BallRule rule;
    return rule;
}

} // namespace detail

/// Per-bump ball averages of ϑ·w_k(· - z_k) on a lattice patch around the
/// centers of one geometry.
class BarycenterMap {
public:
    BarycenterMap(const BumpField& geometry, const BarycenterOptions& opt = {})
        : BarycenterMap(geometry, opt, opt.cover_fraction)
    {
    }

    BarycenterMap(const BumpField& geometry, const BarycenterOptions& opt, double cover_fraction)
        : opt_(opt), cutoff_(geometry.cutoff)
    {
        geometry.validate();
        if (geometry.terms.empty()) {
            throw DegenerateField("barycenter of a field without terms");
        }
        if (!(opt.spacing > 0.0) || !(cover_fraction > 0.0 && cover_fraction < 1.0)) {
            throw InvalidParams("barycenter needs spacing > 0 and cover_fraction in (0,1)");
        }
        for (const auto& t : geometry.terms) {
            terms_.push_back({t.profile, t.center});
        }
        peak_.resize(terms_.size());
        cover_.resize(terms_.size());
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const RadialProfile& w = *terms_[k].profile;
            peak_[k] = radial_ball_average(w, 0.0);
            cover_[k] = radius_below(w, cover_fraction * peak_[k]);
        }
        build_nodes();
    }

    /// β of scale · ϑ Σ c_k w_k for nonnegative c (one entry per geometry term).
    [[nodiscard]] Vec3 operator()(const std::vector<double>& coeffs) const
    {
        Vec3 beta{};
        if (!evaluate(coeffs, &beta)) {
            throw DegenerateField("barycenter lattice cover too small");
        }
        return beta;
    }

    /// False when the lattice cover cannot be shown to contain {μ > ½ max μ}.
    bool evaluate(const std::vector<double>& coeffs, Vec3* beta, double* max_mu = nullptr) const
    {
        if (coeffs.size() != terms_.size()) {
            throw InvalidParams("coefficient count does not match the barycenter geometry");
        }
        double bound = 0.0; // sup of μ outside the cover
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            if (coeffs[k] < 0.0) {
                throw InvalidParams("barycenter needs nonnegative coefficients");
            }
            bound += coeffs[k] * outside_[k];
        }
        const std::size_t n = nodes_.size();
        std::vector<double> mu(n, 0.0);
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < terms_.size(); ++k) {
                s += coeffs[k] * mu_[i * terms_.size() + k];
            }
            mu[i] = s;
            mx = std::max(mx, s);
        }
        if (max_mu) {
            *max_mu = mx;
        }
        if (!(mx >= opt_.max_floor)) {
            throw DegenerateField("max of the ball average is below " + std::to_string(opt_.max_floor));
        }
        const double tau = 0.5 * mx;
        if (!(bound < tau)) {
            return false;
        }
        long double m0 = 0.0L;
        long double mx1 = 0.0L;
        long double my1 = 0.0L;
        long double mz1 = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = mu[i] - tau;
            if (u > 0.0) {
                m0 += u;
                mx1 += u * nodes_[i][0];
                my1 += u * nodes_[i][1];
                mz1 += u * nodes_[i][2];
            }
        }
        *beta = {static_cast<double>(mx1 / m0), static_cast<double>(my1 / m0), static_cast<double>(mz1 / m0)};
        return true;
    }

    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }

private:
    struct Term {
        ProfilePtr profile;
        Vec3 center;
    };

    BarycenterOptions opt_;
    std::optional<CutoffSpec> cutoff_;
    std::vector<Term> terms_;
    std::vector<double> peak_, cover_;
    std::vector<double> outside_; ///< per-term sup of its μ outside the cover
    std::vector<Vec3> nodes_;
    std::vector<double> mu_; ///< node-major, one entry per term

    /// Smallest d with ball average ≤ level (the average decreases in d).
    static double radius_below(const RadialProfile& w, double level)
    {
        double lo = 0.0;
        double hi = 1.0;
        while (radial_ball_average(w, hi) > level) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e3) {
                throw DegenerateField("ball average does not decay");
            }
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (radial_ball_average(w, mid) > level ? lo : hi) = mid;
        }
        return hi;
    }

    void build_nodes()
    {
        const double h = opt_.spacing;
        // union of lattice balls of radius cover_k about each center
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const Vec3& z = terms_[k].center;
            const double R = cover_[k];
            const long i0 = static_cast<long>(std::floor((z[0] - R) / h));
            const long i1 = static_cast<long>(std::ceil((z[0] + R) / h));
            const long j0 = static_cast<long>(std::floor((z[1] - R) / h));
            const long j1 = static_cast<long>(std::ceil((z[1] + R) / h));
            const long l0 = static_cast<long>(std::floor((z[2] - R) / h));
            const long l1 = static_cast<long>(std::ceil((z[2] + R) / h));
            for (long i = i0; i <= i1; ++i) {
                for (long j = j0; j <= j1; ++j) {
                    for (long l = l0; l <= l1; ++l) {
                        const Vec3 x{i * h, j * h, l * h};
                        if (norm(x - z) > R) {
                            continue;
                        }
                        bool seen = false;
                        for (std::size_t q = 0; q < k && !seen; ++q) {
                            seen = norm(x - terms_[q].center) <= cover_[q];
                        }
                        if (!seen) {
                            nodes_.push_back(x);
                        }
                    }
                }
            }
        }
        const std::size_t K = terms_.size();
        mu_.assign(nodes_.size() * K, 0.0);
        parallel_for(nodes_.size(), [&](std::size_t i) {
            for (std::size_t k = 0; k < K; ++k) {
                mu_[i * K + k] = ball_average(k, nodes_[i]);
            }
        });
        // an uncovered node is farther than cover_k from every center k, and
        // the average decreases with distance (the cutoff only lowers it)
        outside_.assign(K, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            outside_[k] = radial_ball_average(*terms_[k].profile, cover_[k]);
        }
    }

    [[nodiscard]] double ball_average(std::size_t k, const Vec3& x) const
    {
        const Term& t = terms_[k];
        const bool touches_cutoff = cutoff_ && norm(x) < cutoff_->outer_radius() + 1.0;
        if (!touches_cutoff) {
            return radial_ball_average(*t.profile, norm(x - t.center));
        }
        const auto& rule = detail::ball_rule();
        double s = 0.0;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const Vec3 y = x + rule.x[q];
            s += rule.w[q] * cutoff_value(*cutoff_, y) * std::abs(t.profile->value(norm(y - t.center)));
        }
        return s / (4.0 * M_PI / 3.0);
    }
};

struct BarycenterResult {
    Vec3 beta{};
    double max_mu = 0.0;
    std::size_t nodes = 0;
};

/// β of a nonnegative bump field; the lattice cover widens until it provably
/// holds the whole support of û.
inline BarycenterResult barycenter_detail(const BumpField& field, const BarycenterOptions& opt = {})
{
    std::vector<double> c;
    for (const auto& t : field.terms) {
        c.push_back(t.coeff);
    }
    if (field.scale == 0.0 || std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
        throw DegenerateField("barycenter of the zero field");
    }
    double frac = opt.cover_fraction;
    for (int attempt = 0; attempt < 12; ++attempt, frac *= 0.5) {
        const BarycenterMap map(field, opt, frac);
        BarycenterResult out;
        if (map.evaluate(c, &out.beta, &out.max_mu)) {
            out.max_mu *= std::abs(field.scale);
            out.nodes = map.node_count();
            return out;
        }
    }
    throw DegenerateField("barycenter lattice cover did not close");
}

inline Vec3 barycenter(const BumpField& field, const BarycenterOptions& opt = {})
{
    return barycenter_detail(field, opt).beta;
}

} // namespace critbound

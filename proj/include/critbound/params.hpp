#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "critbound/errors.hpp"

namespace critbound {

/// Scalar data of  -Δu + a(x)u = u^(p-1) + ε u^(2*-1)  in R^N.
struct ProblemParams {
    int N = 3;
    double p = 4.0;
    double eps = 0.0;
    double a_infty = 1.0;

    [[nodiscard]] double crit_exp() const { return 2.0 * N / (N - 2.0); }

    /// Throws InvalidParams unless 2 < p < 2*, ε ≥ 0, a_∞ > 0 and N ≥ 3.
    void validate() const
    {
        if (N < 3) {
            throw InvalidParams("dimension N must be >= 3, got " + std::to_string(N));
        }
        if (!(p > 2.0 && p < crit_exp())) {
            throw InvalidParams("exponent p must satisfy 2 < p < 2N/(N-2), got "
                                + std::to_string(p));
        }
        if (!(eps >= 0.0)) {
            throw InvalidParams("eps must be >= 0");
        }
        if (!(a_infty > 0.0)) {
            throw InvalidParams("a_infty must be > 0");
        }
    }

    [[nodiscard]] ProblemParams with_eps(double e) const
    {
        ProblemParams out = *this;
        out.eps = e;
        return out;
    }
};

/// Reduction of a problem with limit potential a_∞ ≠ 1 to the normalized one.
///
/// If v solves  -Δv + a_∞ v = v^(p-1) + ε v^(2*-1)  then with  λ = √a_∞,
/// u(y) = λ^(-2/(p-2)) v(y/λ)  solves  -Δu + u = u^(p-1) + ε' u^(2*-1)  where
/// ε' = ε λ^(2(2*-p)/(p-2)).
struct PotentialRescaling {
    double length_scale;    ///< x = y / λ
    double amplitude_scale; ///< v = amplitude_scale * u
    ProblemParams normalized;

    /// Maps a radius of the normalized problem back to the original variables.
    [[nodiscard]] double original_radius(double r_normalized) const
    {
        return r_normalized / length_scale;
    }
    [[nodiscard]] double original_value(double u_normalized) const
    {
        return amplitude_scale * u_normalized;
    }
};

inline PotentialRescaling normalize_limit_potential(const ProblemParams& params)
{
    params.validate();
    const double lam = std::sqrt(params.a_infty);
    const double q = params.crit_exp();
    PotentialRescaling out{};
    out.length_scale = lam;
    out.amplitude_scale = std::pow(lam, 2.0 / (params.p - 2.0));
    out.normalized = params;
    out.normalized.a_infty = 1.0;
    out.normalized.eps = params.eps * std::pow(lam, 2.0 * (q - params.p) / (params.p - 2.0));
    return out;
}

/// Surface area of the unit sphere in R^N.
inline double unit_sphere_area(int N)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

inline double unit_ball_volume(int N) { return unit_sphere_area(N) / N; }

} // namespace critbound

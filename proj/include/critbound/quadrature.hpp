#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace critbound::quad {

/// Gauss–Legendre rule on [-1, 1] with K points, unpacked from boost's half rule.
template <std::size_t K>
struct GaussRule {
    std::array<double, K> x{};
    std::array<double, K> w{};

    GaussRule()
    {
        using G = boost::math::quadrature::gauss<double, K>;
        const auto& ab = G::abscissa();
        const auto& wt = G::weights();
        std::size_t idx = 0;
        // boost stores the non-negative half; the zero node (odd K) comes first.
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0.0) {
                x[idx] = 0.0;
                w[idx] = wt[i];
                ++idx;
            } else {
                x[idx] = ab[i];
                w[idx] = wt[i];
                ++idx;
                x[idx] = -ab[i];
                w[idx] = wt[i];
                ++idx;
            }
        }
    }
};

template <std::size_t K>
const GaussRule<K>& gauss_rule()
{
    static const GaussRule<K> rule;
    return rule;
}

/// Composite K-point Gauss–Legendre over [a, b] split at the given breakpoints.
template <std::size_t K = 8, class F>
double integrate_panels(F&& f, const std::vector<double>& breaks)
{
    const auto& g = gauss_rule<K>();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            s += g.w[k] * f(mid + half * g.x[k]);
        }
        sum += half * s;
    }
    return sum;
}

inline std::vector<double> uniform_breaks(double a, double b, std::size_t panels)
{
    std::vector<double> out(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    }
    out.back() = b;
    return out;
}

template <std::size_t K = 8, class F>
double integrate_uniform(F&& f, double a, double b, std::size_t panels)
{
    return integrate_panels<K>(std::forward<F>(f), uniform_breaks(a, b, panels));
}

/// ∫_0^∞ f(r) dr for smooth integrands with algebraic or exponential tails.
template <class F>
double integrate_half_line(F&& f, double tol = 1e-13)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(std::forward<F>(f), 0.0,
                                std::numeric_limits<double>::infinity(), tol);
}

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 clamped to [0, 1], and its derivative.
inline double smoothstep(double t)
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

inline double smoothstep_derivative(double t)
{
    if (t <= 0.0 || t >= 1.0) {
        return 0.0;
    }
    const double s = t * (1.0 - t);
    return 30.0 * s * s;
}

} // namespace critbound::quad

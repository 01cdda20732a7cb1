#pragma once

// Reference values computed by routes the library does not use: closed
// forms, composite Simpson on mapped variables, brute-force sampling.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "critbound/radial_core.hpp"

namespace oracle {

/// N(N-2)/4 · |S^N|^(2/N), |S^N| the area of the unit sphere in R^(N+1).
inline double sobolev_closed_form(int N)
{
    const double area = 2.0 * std::pow(M_PI, 0.5 * (N + 1)) / std::tgamma(0.5 * (N + 1));
    return 0.25 * N * (N - 2.0) * std::pow(area, 2.0 / N);
}

/// Composite Simpson with n (even) panels on [a, b].
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b, int n)
{
    const long double h = (b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
    }
    return s * h / 3.0L;
}

/// Rayleigh quotient of U = (λ + r^κ)^(-(N-2)/κ) in R^N, integrated in
/// x = r/(1+r) on [0,1] by Simpson.
inline double family_quotient(int N, double lambda, double kappa, int panels = 20000)
{
    const long double q = 2.0L * N / (N - 2.0L);
    const long double beta = (N - 2.0L) / kappa;
    auto mapped = [&](auto&& g) {
        return [&, g](long double x) -> long double {
            if (x <= 0.0L) {
                return 0.0L;
            }
            x = std::min(x, 1.0L - 1e-12L); // the mapped gradient integrand has a finite limit at 1
            const long double r = x / (1.0L - x);
            return g(r) / ((1.0L - x) * (1.0L - x));
        };
    };
    auto grad = [&](long double r) {
        const long double rk = std::pow(r, static_cast<long double>(kappa));
        const long double du = (N - 2.0L) * rk / r * std::pow(lambda + rk, -beta - 1.0L);
        return du * du * std::pow(r, N - 1.0L);
    };
    auto crit = [&](long double r) {
        const long double u = std::pow(lambda + std::pow(r, static_cast<long double>(kappa)), -beta);
        return std::pow(u, q) * std::pow(r, N - 1.0L);
    };
    const long double G = simpson(mapped(grad), 0.0L, 1.0L, panels);
    const long double C = simpson(mapped(crit), 0.0L, 1.0L, panels);
    const long double omega = 2.0L * std::pow(static_cast<long double>(M_PI), 0.5L * N) / std::tgamma(0.5L * N);
    return static_cast<double>(omega * G / std::pow(omega * C, 2.0L / q));
}

struct FamilyMinimum {
    double value = 0.0;
    double lambda = 0.0;
    double kappa = 0.0;
};

/// Minimum of family_quotient over λ ∈ {0.5, 2}, κ ∈ [1.2, 3.5]: golden
/// section in κ at each λ.
inline FamilyMinimum minimize_family(int N)
{
    FamilyMinimum best{INFINITY, 0.0, 0.0};
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (double lambda : {0.5, 2.0}) {
        double a = 1.2;
        double b = 3.5;
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double fc = family_quotient(N, lambda, c);
        double fd = family_quotient(N, lambda, d);
        for (int it = 0; it < 32; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = family_quotient(N, lambda, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = family_quotient(N, lambda, d);
            }
        }
        const double k = 0.5 * (a + b);
        const double v = family_quotient(N, lambda, k);
        if (v < best.value) {
            best = {v, lambda, k};
        }
    }
    return best;
}

/// Decay constant read directly as the mean of w(r) e^r r^((N-1)/2) on [lo, hi].
inline double decay_c(const critbound::RadialProfile& w, double lo, double hi)
{
    const int N = w.params().N;
    double s = 0.0;
    int n = 0;
    for (double r = lo; r <= hi; r += 0.05, ++n) {
        s += w.value(r) * std::exp(r) * std::pow(r, 0.5 * (N - 1));
    }
    return s / n;
}

/// Leading coefficient of δ_ρ⁻¹ ∫ w^e(x - ρe₁) w(x + ρe₁) dx in R³:
/// c · 2^(-1) · 4π ∫ w^e(r) r sinh(r) dr.
inline double c1_limit(const critbound::RadialProfile& w, double c, double e)
{
    const double r_hi = w.grid().back();
    const long double m = simpson(
        [&](long double r) {
            const double v = std::max(w.value(static_cast<double>(r)), 0.0);
            return std::pow(static_cast<long double>(v), static_cast<long double>(e)) * r * std::sinh(r);
        },
        0.0L, r_hi, 20000);
    return c * 0.5 * 4.0 * M_PI * static_cast<double>(m);
}

} // namespace oracle

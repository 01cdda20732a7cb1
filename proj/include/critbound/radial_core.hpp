#pragma once

// Radial reductions of  -Δu + u = u^(p-1) + ε u^(2*-1)  solved by shooting.
//
// The outward shot is bisected on u(0) until the undershoot/overshoot bracket
// collapses to double precision. Past the radius where the two bracketing
// trajectories separate, the solution is replaced by an inward integration of
// the full equation started on the decaying Bessel mode r^(-ν) K_ν(r),
// ν = (N-2)/2, at r_max; the inward direction is stable for that mode. The
// amplitude of the tail is matched to the outward value.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "critbound/errors.hpp"
#include "critbound/params.hpp"
#include "critbound/quadrature.hpp"

namespace critbound {

/// A radially symmetric function sampled on 0 = r_0 < r_1 < ... < r_M.
///
/// Values and first derivatives are interpolated by cubic Hermite pieces; the
/// derivative itself is interpolated from (u', u''), so both are fourth order.
/// Profiles are immutable after construction.
class RadialProfile {
public:
    RadialProfile() = default;

    RadialProfile(std::vector<double> grid, std::vector<double> values,
                  std::vector<double> derivs, std::vector<double> second,
                  ProblemParams params)
        : grid_(std::move(grid)),
          values_(std::move(values)),
          derivs_(std::move(derivs)),
          second_(std::move(second)),
          params_(params)
    {
        if (grid_.size() < 2 || values_.size() != grid_.size()
            || derivs_.size() != grid_.size()) {
            throw InvalidParams("RadialProfile: grid/values/derivs size mismatch");
        }
        if (grid_.front() != 0.0) {
            throw InvalidParams("RadialProfile: grid must start at r = 0");
        }
        for (std::size_t i = 1; i < grid_.size(); ++i) {
            if (!(grid_[i] > grid_[i - 1])) {
                throw InvalidParams("RadialProfile: grid must be strictly increasing");
            }
        }
        if (second_.empty()) {
            second_ = finite_difference(grid_, derivs_);
        }
        if (second_.size() != grid_.size()) {
            throw InvalidParams("RadialProfile: second-derivative size mismatch");
        }
        detect_exponential_map();
    }

    [[nodiscard]] const std::vector<double>& grid() const { return grid_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const std::vector<double>& derivs() const { return derivs_; }
    [[nodiscard]] const std::vector<double>& second_derivs() const { return second_; }
    [[nodiscard]] const ProblemParams& params() const { return params_; }
    [[nodiscard]] double r_max() const { return grid_.back(); }
    [[nodiscard]] std::size_t size() const { return grid_.size(); }

    [[nodiscard]] bool has_decay() const { return decay_c_.has_value(); }
    [[nodiscard]] double decay_c() const { return decay_c_.value_or(0.0); }
    [[nodiscard]] double decay_c_prime() const { return decay_c_prime_.value_or(0.0); }

    [[nodiscard]] RadialProfile with_decay(double c, double c_prime) const
    {
        RadialProfile out = *this;
        out.decay_c_ = c;
        out.decay_c_prime_ = c_prime;
        return out;
    }

    /// λ·u, with decay constants scaled alongside.
    [[nodiscard]] RadialProfile scaled(double lambda) const
    {
        RadialProfile out = *this;
        for (auto* v : {&out.values_, &out.derivs_, &out.second_}) {
            for (double& x : *v) {
                x *= lambda;
            }
        }
        if (decay_c_) {
            out.decay_c_ = *decay_c_ * lambda;
            out.decay_c_prime_ = *decay_c_prime_ * lambda;
        }
        return out;
    }

    /// u(r). Exact at nodes; beyond r_max follows c e^(-r) r^(-(N-1)/2).
    [[nodiscard]] double value(double r) const
    {
        r = std::abs(r);
        if (r >= grid_.back()) {
            if (r == grid_.back()) {
                return values_.back();
            }
            return tail_value(r);
        }
        const std::size_t i = locate(r);
        return hermite(i, r, values_, derivs_, true);
    }

    /// u'(r).
    [[nodiscard]] double derivative(double r) const
    {
        r = std::abs(r);
        if (r >= grid_.back()) {
            if (r == grid_.back()) {
                return derivs_.back();
            }
            return tail_derivative(r);
        }
        const std::size_t i = locate(r);
        return hermite(i, r, derivs_, second_, false);
    }

    /// u''(r) from the derivative interpolant.
    [[nodiscard]] double second_derivative(double r) const
    {
        r = std::abs(r);
        if (r >= grid_.back()) {
            const double h = 1e-4 * std::max(1.0, r);
            return (tail_derivative(r + h) - tail_derivative(r - h)) / (2.0 * h);
        }
        const std::size_t i = locate(r);
        return hermite_slope(i, r, derivs_, second_);
    }

    /// Value and derivative in one lookup.
    [[nodiscard]] std::pair<double, double> value_and_derivative(double r) const
    {
        r = std::abs(r);
        if (r >= grid_.back()) {
            return {tail_value(r), tail_derivative(r)};
        }
        const std::size_t i = locate(r);
        return {hermite(i, r, values_, derivs_, true), hermite(i, r, derivs_, second_, false)};
    }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> derivs_;
    std::vector<double> second_;
    ProblemParams params_{};
    std::optional<double> decay_c_;
    std::optional<double> decay_c_prime_;
    double map_kappa_ = 0.0; ///< nonzero if the grid is r_max (e^(κx)-1)/(e^κ-1)
    double map_scale_ = 0.0;

    static std::vector<double> finite_difference(const std::vector<double>& r,
                                                 const std::vector<double>& f)
    {
        const std::size_t n = r.size();
        std::vector<double> out(n, 0.0);
        if (n < 3) {
            return out;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = r[i] - r[i - 1];
            const double h1 = r[i + 1] - r[i];
            out[i] = (f[i + 1] - f[i]) / h1 * h0 / (h0 + h1)
                     + (f[i] - f[i - 1]) / h0 * h1 / (h0 + h1);
        }
        out[0] = (f[1] - f[0]) / (r[1] - r[0]);
        out[n - 1] = (f[n - 1] - f[n - 2]) / (r[n - 1] - r[n - 2]);
        return out;
    }

    void detect_exponential_map()
    {
        // Recognize grids built by make_radial_grid so lookups are O(1).
        const std::size_t m = grid_.size() - 1;
        if (m < 4) {
            return;
        }
        const double rmax = grid_.back();
        const double ratio = (grid_[m] - grid_[m - 1]) / (grid_[1] - grid_[0]);
        if (!(ratio > 1.0)) {
            return;
        }
        const double kappa = std::log(ratio) * static_cast<double>(m) / static_cast<double>(m - 1);
        const double scale = rmax / std::expm1(kappa);
        for (std::size_t i : {std::size_t{1}, m / 3, m / 2, m - 1}) {
            const double x = static_cast<double>(i) / static_cast<double>(m);
            if (std::abs(scale * std::expm1(kappa * x) - grid_[i]) > 1e-9 * rmax) {
                return;
            }
        }
        map_kappa_ = kappa;
        map_scale_ = scale;
    }

    [[nodiscard]] std::size_t locate(double r) const
    {
        const std::size_t last = grid_.size() - 2;
        if (map_kappa_ > 0.0) {
            const double x = std::log1p(r / map_scale_) / map_kappa_;
            auto i = static_cast<std::ptrdiff_t>(x * static_cast<double>(grid_.size() - 1));
            i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(last));
            auto idx = static_cast<std::size_t>(i);
            while (idx > 0 && grid_[idx] > r) {
                --idx;
            }
            while (idx < last && grid_[idx + 1] <= r) {
                ++idx;
            }
            return idx;
        }
        auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
        auto idx = static_cast<std::size_t>(std::distance(grid_.begin(), it));
        return std::min(idx == 0 ? 0 : idx - 1, last);
    }

    /// Cubic Hermite on [r_i, r_i+1]; `limit` applies Fritsch–Carlson scaling
    /// when the end slopes would let a monotone piece overshoot.
    [[nodiscard]] double hermite(std::size_t i, double r, const std::vector<double>& f,
                                 const std::vector<double>& df, bool limit) const
    {
        const double h = grid_[i + 1] - grid_[i];
        const double t = (r - grid_[i]) / h;
        double m0 = df[i] * h;
        double m1 = df[i + 1] * h;
        const double delta = f[i + 1] - f[i];
        if (limit && delta != 0.0) {
            const double a = m0 / delta;
            const double b = m1 / delta;
            if (a >= 0.0 && b >= 0.0 && a * a + b * b > 9.0) {
                const double tau = 3.0 / std::sqrt(a * a + b * b);
                m0 *= tau;
                m1 *= tau;
            }
        }
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * f[i] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * f[i + 1]
               + (t3 - t2) * m1;
    }

    [[nodiscard]] double hermite_slope(std::size_t i, double r, const std::vector<double>& f,
                                       const std::vector<double>& df) const
    {
        const double h = grid_[i + 1] - grid_[i];
        const double t = (r - grid_[i]) / h;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * f[i] + (3 * t2 - 4 * t + 1) * df[i] * h
                + (-6 * t2 + 6 * t) * f[i + 1] + (3 * t2 - 2 * t) * df[i + 1] * h)
               / h;
    }

    [[nodiscard]] double tail_value(double r) const
    {
        if (!decay_c_) {
            return 0.0;
        }
        return *decay_c_ * std::exp(-r) * std::pow(r, -0.5 * (params_.N - 1));
    }

    [[nodiscard]] double tail_derivative(double r) const
    {
        if (!decay_c_) {
            return 0.0;
        }
        return -*decay_c_ * std::exp(-r) * std::pow(r, -0.5 * (params_.N - 1))
               * (1.0 + 0.5 * (params_.N - 1) / r);
    }
};

/// Free-function form of RadialProfile::value.
inline double eval_profile(const RadialProfile& profile, double r) { return profile.value(r); }

/// Nodes r_max (e^(κ i/M) - 1)/(e^κ - 1): dense near the origin, coarser in the tail.
inline std::vector<double> make_radial_grid(double r_max, std::size_t nodes, double kappa = 2.0)
{
    std::vector<double> r(nodes);
    const double m = static_cast<double>(nodes - 1);
    const double scale = r_max / std::expm1(kappa);
    for (std::size_t i = 0; i < nodes; ++i) {
        r[i] = scale * std::expm1(kappa * static_cast<double>(i) / m);
    }
    r.front() = 0.0;
    r.back() = r_max;
    return r;
}

// ---------------------------------------------------------------------------
// Radial integrals
// ---------------------------------------------------------------------------

/// ω_N ∫_0^{r_max} F(r, u, u') r^(N-1) dr by 4-point Gauss on every grid cell.
template <class F>
double radial_integral(const RadialProfile& profile, F&& integrand)
{
    const auto& g = quad::gauss_rule<4>();
    const auto& r = profile.grid();
    const int N = profile.params().N;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double half = 0.5 * (r[i + 1] - r[i]);
        const double mid = 0.5 * (r[i + 1] + r[i]);
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            const double x = mid + half * g.x[k];
            const auto [u, du] = profile.value_and_derivative(x);
            s += g.w[k] * integrand(x, u, du) * std::pow(x, N - 1);
        }
        sum += half * s;
    }
    return unit_sphere_area(N) * sum;
}

/// The integrals entering the functionals, for a radial u on R^N.
struct RadialNorms {
    double grad_sq = 0.0; ///< ∫|∇u|²
    double l2_sq = 0.0;   ///< ∫u²
    double lp_p = 0.0;    ///< ∫|u|^p
    double lcrit = 0.0;   ///< ∫|u|^(2*)

    [[nodiscard]] double h1_sq() const { return grad_sq + l2_sq; }
};

inline RadialNorms radial_norms(const RadialProfile& profile)
{
    const double p = profile.params().p;
    const double q = profile.params().crit_exp();
    RadialNorms n;
    n.grad_sq = radial_integral(profile, [](double, double, double du) { return du * du; });
    n.l2_sq = radial_integral(profile, [](double, double u, double) { return u * u; });
    n.lp_p = radial_integral(profile, [p](double, double u, double) { return std::pow(std::abs(u), p); });
    n.lcrit = radial_integral(profile, [q](double, double u, double) { return std::pow(std::abs(u), q); });
    return n;
}

/// |‖u‖² - |u|_p^p - ε|u|_{2*}^{2*}| / ‖u‖².
inline double nehari_residual(const RadialProfile& profile)
{
    const RadialNorms n = radial_norms(profile);
    const double eps = profile.params().eps;
    return std::abs(n.h1_sq() - n.lp_p - eps * n.lcrit) / n.h1_sq();
}

/// sup over cell midpoints of |-u'' - (N-1)u'/r + u - f(u)| divided by sup |u|.
inline double ode_residual(const RadialProfile& profile)
{
    const auto& pr = profile.params();
    const double q = pr.crit_exp();
    const auto& r = profile.grid();
    double worst = 0.0;
    double umax = 0.0;
    for (double v : profile.values()) {
        umax = std::max(umax, std::abs(v));
    }
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double x = 0.5 * (r[i] + r[i + 1]);
        const double u = profile.value(x);
        const double du = profile.derivative(x);
        const double d2u = profile.second_derivative(x);
        const double f = std::pow(std::abs(u), pr.p - 2.0) * u + pr.eps * std::pow(std::abs(u), q - 2.0) * u;
        const double res = -d2u - (pr.N - 1) * du / x + u - f;
        worst = std::max(worst, std::abs(res));
    }
    return worst / umax;
}

// ---------------------------------------------------------------------------
// Decay constants
// ---------------------------------------------------------------------------

struct DecayConstants {
    double c = 0.0;
    double c_prime = 0.0;
    double plateau_variation = 0.0; ///< (max-min)/mean of u e^r r^((N-1)/2) on the window
    double window_lo = 0.0;
    double window_hi = 0.0;
};

struct DecayFitOptions {
    double cut_threshold = 1e-12;
    double decayed_threshold = 1e-10;
    double plateau_tolerance = 0.02;
};

/// Reads c off the plateau of u e^r r^((N-1)/2) on [r_cut/2, r_cut], r_cut the
/// last radius with u > 1e-12. The derivative constant is the 1/r-extrapolated
/// limit of u' e^r r^((N-1)/2) on the same window, since that product carries
/// an O(1/r) correction even for the exact Bessel tail.
inline DecayConstants extract_decay_constants(const RadialProfile& profile,
                                              const DecayFitOptions& opt = {})
{
    const auto& r = profile.grid();
    const auto& u = profile.values();
    const auto& du = profile.derivs();
    const double b = 0.5 * (profile.params().N - 1);

    const double peak = *std::max_element(u.begin(), u.end());
    const double scale = peak > 0.0 ? peak : 1.0;
    std::size_t cut = 0;
    bool decayed = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (u[i] > opt.cut_threshold * scale) {
            cut = i;
        }
        if (u[i] < opt.decayed_threshold * scale && u[i] >= 0.0) {
            decayed = true;
        }
    }
    if (!decayed || cut < 8) {
        throw NoPlateaus("profile does not decay below threshold before r_max");
    }
    const double r_cut = r[cut];
    DecayConstants out;
    out.window_lo = 0.5 * r_cut;
    out.window_hi = r_cut;

    // Trapezoid averages on the (nonuniform) window nodes.
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = -gmin;
    double area = 0.0;
    double span = 0.0;
    double s_x = 0.0, s_y = 0.0, s_xx = 0.0, s_xy = 0.0, s_w = 0.0;
    std::size_t count = 0;
    double prev_r = 0.0, prev_g = 0.0;
    for (std::size_t i = 0; i <= cut; ++i) {
        if (r[i] < out.window_lo) {
            continue;
        }
        const double weight = std::exp(r[i]) * std::pow(r[i], b);
        const double g = u[i] * weight;
        const double gp = du[i] * weight;
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
        if (count > 0) {
            area += 0.5 * (g + prev_g) * (r[i] - prev_r);
            span += r[i] - prev_r;
        }
        const double x = 1.0 / r[i];
        s_w += 1.0;
        s_x += x;
        s_y += gp;
        s_xx += x * x;
        s_xy += x * gp;
        prev_r = r[i];
        prev_g = g;
        ++count;
    }
    if (count < 8 || !(span > 0.0)) {
        throw NoPlateaus("decay fit window holds too few nodes");
    }
    out.c = area / span;
    out.plateau_variation = (gmax - gmin) / std::abs(out.c);
    if (!(out.c > 0.0) || out.plateau_variation > opt.plateau_tolerance) {
        throw NoPlateaus("decay plateau varies by " + std::to_string(out.plateau_variation)
                         + " on [" + std::to_string(out.window_lo) + ", "
                         + std::to_string(out.window_hi) + "]");
    }
    const double det = s_w * s_xx - s_x * s_x;
    out.c_prime = (s_xx * s_y - s_x * s_xy) / det;
    return out;
}

// ---------------------------------------------------------------------------
// Shooting
// ---------------------------------------------------------------------------

struct ShootingOptions {
    double r_max = 35.0;
    std::size_t nodes = 4000;
    double grid_kappa = 2.0;
    double rel_tol = 1e-12;
    int max_bisection = 200;
    double r_start = 1e-4;
    bool allow_large_eps = false;
    /// Relative separation of the bracketing shots that ends the outward branch.
    double split_tolerance = 1e-7;
    double decayed_threshold = 1e-10;
    double max_nehari_residual = 1e-5;
    double max_ode_residual = 1e-4;
};

/// Diagnostics of a shot, kept next to the profile.
struct ShootingReport {
    double amplitude = 0.0;
    int bisection_steps = 0;
    double r_match = 0.0;
    double derivative_mismatch = 0.0; ///< relative jump of u' where the tail is glued
    double tail_amplitude = 0.0;
};

namespace detail {

using OdeState = std::array<double, 2>;

struct RadialOde {
    int N;
    double p;
    double eps;
    double q;

    [[nodiscard]] double nonlinearity(double u) const
    {
        const double au = std::abs(u);
        double f = std::pow(au, p - 2.0) * u;
        if (eps != 0.0) {
            f += eps * std::pow(au, q - 2.0) * u;
        }
        return f;
    }

    void operator()(const OdeState& y, OdeState& dy, double r) const
    {
        dy[0] = y[1];
        dy[1] = -(N - 1) * y[1] / r + y[0] - nonlinearity(y[0]);
    }
};

enum class ShotOutcome { Undershoot, Overshoot, Reached };

inline auto make_stepper(double rel_tol, double abs_tol)
{
    namespace ode = boost::numeric::odeint;
    return ode::make_dense_output(abs_tol, rel_tol, ode::runge_kutta_dopri5<OdeState>());
}

inline OdeState series_start(const RadialOde& ode, double a, double r0)
{
    // u = a + c2 r² + c4 r⁴ + O(r⁶) with g(u) = u - f(u):
    // 2N c2 = g(a),  4(N+2) c4 = g'(a) c2.
    const double h = 1e-6 * a;
    const double g = a - ode.nonlinearity(a);
    const double dg = 1.0 - (ode.nonlinearity(a + h) - ode.nonlinearity(a - h)) / (2.0 * h);
    const double c2 = g / (2.0 * ode.N);
    const double c4 = dg * c2 / (4.0 * (ode.N + 2));
    const double r2 = r0 * r0;
    return {a + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r0 + 4.0 * c4 * r2 * r0};
}

/// Radius where the series start is accurate: a small fraction of the core scale.
inline double series_radius(const RadialOde& ode, double a, double r_start)
{
    const double core = std::sqrt(ode.N / std::abs(1.0 - ode.nonlinearity(a) / a));
    return std::min(r_start, 1e-2 * core);
}

/// Integrates outward from amplitude a, sampling u at the requested nodes
/// until the trajectory crosses zero, turns upward, or reaches the end.
inline ShotOutcome shoot(const RadialOde& ode, double a, const ShootingOptions& opt,
                         std::span<const double> nodes, std::vector<double>* u_out,
                         std::vector<double>* du_out, double r_end)
{
    auto stepper = make_stepper(opt.rel_tol, 1e-14 * a);
    const double r0 = series_radius(ode, a, opt.r_start);
    OdeState y = series_start(ode, a, r0);
    stepper.initialize(y, r0, 0.1 * r0);
    std::size_t next = 0;
    while (next < nodes.size() && nodes[next] < r0) {
        if (u_out) {
            const OdeState s0 = series_start(ode, a, nodes[next]);
            u_out->push_back(s0[0]);
            du_out->push_back(s0[1]);
        }
        ++next;
    }
    while (stepper.current_time() < r_end) {
        stepper.do_step(ode);
        const double t = stepper.current_time();
        if (u_out) {
            while (next < nodes.size() && nodes[next] <= t) {
                OdeState s{};
                stepper.calc_state(nodes[next], s);
                u_out->push_back(s[0]);
                du_out->push_back(s[1]);
                ++next;
            }
        }
        const OdeState& cur = stepper.current_state();
        if (cur[0] < 0.0) {
            return ShotOutcome::Overshoot;
        }
        if (cur[1] > 0.0) {
            return ShotOutcome::Undershoot;
        }
    }
    return ShotOutcome::Reached;
}

/// r^(-ν) K_ν(r) and its derivative, ν = (N-2)/2.
inline std::pair<double, double> bessel_tail(int N, double r)
{
    const double nu = 0.5 * (N - 2);
    const double rn = std::pow(r, -nu);
    return {rn * std::cyl_bessel_k(nu, r), -rn * std::cyl_bessel_k(nu + 1.0, r)};
}

/// Inward integration of the full equation from r_max on amplitude A of the
/// decaying mode, sampled at the given (descending) nodes.
inline void integrate_tail(const RadialOde& ode, double amplitude, double r_max, double r_stop,
                           const ShootingOptions& opt, std::span<const double> nodes_desc,
                           std::vector<double>& u, std::vector<double>& du, OdeState& at_stop)
{
    const auto [k, dk] = bessel_tail(ode.N, r_max);
    OdeState y{amplitude * k, amplitude * dk};
    auto stepper = make_stepper(opt.rel_tol, 1e-300);
    stepper.initialize(y, r_max, -1e-3);
    std::size_t next = 0;
    u.clear();
    du.clear();
    while (next < nodes_desc.size() && nodes_desc[next] >= r_max) {
        u.push_back(y[0]);
        du.push_back(y[1]);
        ++next;
    }
    while (stepper.current_time() > r_stop) {
        stepper.do_step(ode);
        const double t = stepper.current_time();
        while (next < nodes_desc.size() && nodes_desc[next] >= std::max(t, r_stop)) {
            OdeState s{};
            stepper.calc_state(nodes_desc[next], s);
            u.push_back(s[0]);
            du.push_back(s[1]);
            ++next;
        }
    }
    stepper.calc_state(r_stop, at_stop);
}

} // namespace detail

/// Positive decreasing solution of the radial problem (P_{ε,∞}) with a_∞ = 1.
///
/// Throws NoGroundState when no undershoot/overshoot bracket exists and
/// TruncationTooSmall when r_max does not let the tail decay below 1e-10.
inline RadialProfile shoot_ground_state(const ProblemParams& params,
                                        const ShootingOptions& opt = {},
                                        ShootingReport* report = nullptr)
{
    params.validate();
    if (params.a_infty != 1.0) {
        throw InvalidParams("shoot_ground_state expects a_infty = 1; "
                            "reduce with normalize_limit_potential first");
    }
    if (!opt.allow_large_eps && params.eps > 1.0) {
        throw InvalidParams("eps outside [0, 1]; set allow_large_eps to override");
    }
    const detail::RadialOde ode{params.N, params.p, params.eps, params.crit_exp()};

    // Equilibrium u_eq with f(u_eq) = u_eq; amplitudes just above it undershoot.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ode.nonlinearity(mid) < mid ? lo : hi) = mid;
    }
    const double u_eq = hi;

    const std::span<const double> none{};
    auto classify = [&](double a) {
        return detail::shoot(ode, a, opt, none, nullptr, nullptr, opt.r_max);
    };

    double a_lo = u_eq * (1.0 + 1e-3);
    if (classify(a_lo) != detail::ShotOutcome::Undershoot) {
        throw NoGroundState("amplitude just above the equilibrium does not undershoot");
    }
    double a_hi = 2.0 * a_lo;
    while (classify(a_hi) != detail::ShotOutcome::Overshoot) {
        a_lo = a_hi;
        a_hi *= 2.0;
        if (a_hi > 1e8) {
            throw NoGroundState("no overshooting amplitude found (eps too large?)");
        }
    }
    int steps = 0;
    for (; steps < opt.max_bisection; ++steps) {
        const double mid = 0.5 * (a_lo + a_hi);
        if (mid <= a_lo || mid >= a_hi) {
            break;
        }
        const auto outcome = classify(mid);
        if (outcome == detail::ShotOutcome::Overshoot) {
            a_hi = mid;
        } else {
            a_lo = mid;
        }
    }

    // Stretch the grid until the first cell resolves the core scale
    // sqrt(N / |1 - f(a)/a|) at least 600 times over.
    const double core = std::sqrt(params.N / std::abs(1.0 - ode.nonlinearity(a_lo) / a_lo));
    double kappa = opt.grid_kappa;
    const double m = static_cast<double>(opt.nodes - 1);
    while (kappa < 10.0 && opt.r_max * kappa / (m * std::expm1(kappa)) > core / 600.0) {
        kappa += 0.25;
    }
    const std::vector<double> grid = make_radial_grid(opt.r_max, opt.nodes, kappa);
    std::vector<double> u_lo, du_lo, u_hi, du_hi;
    detail::shoot(ode, a_lo, opt, grid, &u_lo, &du_lo, opt.r_max);
    detail::shoot(ode, a_hi, opt, grid, &u_hi, &du_hi, opt.r_max);

    // Outward branch is trusted until the bracketing shots separate.
    const std::size_t common = std::min(u_lo.size(), u_hi.size());
    std::size_t split = common;
    for (std::size_t i = 0; i < common; ++i) {
        const double gap = std::abs(u_hi[i] - u_lo[i]);
        if (gap > opt.split_tolerance * std::abs(u_lo[i]) || u_lo[i] <= 0.0) {
            split = i;
            break;
        }
    }
    if (split < 16) {
        throw NoGroundState("bracketing shots separate immediately");
    }
    // Back off one unit of radius from the split to stay in the accurate zone.
    std::size_t match = split - 1;
    while (match > 8 && grid[match] > grid[split - 1] - 1.0) {
        --match;
    }
    const double r_match = grid[match];
    if (r_match >= opt.r_max - 1.0) {
        throw TruncationTooSmall("outward shot reaches r_max before separating");
    }
    const double target = u_lo[match];

    std::vector<double> nodes_desc;
    for (std::size_t i = grid.size(); i-- > match;) {
        nodes_desc.push_back(grid[i]);
    }
    std::vector<double> tail_u, tail_du;
    detail::OdeState at_match{};
    auto tail_at = [&](double amp) {
        detail::integrate_tail(ode, amp, opt.r_max, r_match, opt, nodes_desc, tail_u, tail_du,
                               at_match);
        return at_match[0];
    };
    double amp0 = target / detail::bessel_tail(params.N, r_match).first;
    double f0 = tail_at(amp0) - target;
    double amp1 = amp0 * (1.0 + 1e-3);
    double f1 = tail_at(amp1) - target;
    for (int it = 0; it < 30 && std::abs(f1) > 1e-15 * target && f1 != f0; ++it) {
        const double amp2 = amp1 - f1 * (amp1 - amp0) / (f1 - f0);
        amp0 = amp1;
        f0 = f1;
        amp1 = amp2;
        f1 = tail_at(amp1) - target;
    }
    tail_at(amp1);

    const double u_end = amp1 * detail::bessel_tail(params.N, opt.r_max).first;
    if (u_end > opt.decayed_threshold * a_lo) {
        throw TruncationTooSmall("solution has not decayed below threshold at r_max = "
                                 + std::to_string(opt.r_max));
    }

    std::vector<double> values(grid.size()), derivs(grid.size()), second(grid.size());
    for (std::size_t i = 0; i < match; ++i) {
        values[i] = u_lo[i];
        derivs[i] = du_lo[i];
    }
    // tail_u holds nodes from r_max down to r_match.
    for (std::size_t k = 0; k < tail_u.size(); ++k) {
        const std::size_t i = grid.size() - 1 - k;
        values[i] = tail_u[k];
        derivs[i] = tail_du[k];
    }
    derivs[0] = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = values[i];
        const double f = ode.nonlinearity(v);
        second[i] = (i == 0) ? (v - f) / params.N : -(params.N - 1) * derivs[i] / grid[i] + v - f;
    }

    if (report) {
        report->amplitude = a_lo;
        report->bisection_steps = steps;
        report->r_match = r_match;
        report->derivative_mismatch = std::abs(at_match[1] - du_lo[match]) / std::abs(du_lo[match]);
        report->tail_amplitude = amp1;
    }

    RadialProfile profile(grid, std::move(values), std::move(derivs), std::move(second), params);
    // Past the existence range the bracket collapses onto a concentrating
    // spike that the grid cannot carry; refuse it rather than return noise.
    const double neh = nehari_residual(profile);
    const double ode_res = ode_residual(profile);
    if (neh > opt.max_nehari_residual || ode_res > opt.max_ode_residual) {
        throw NoGroundState("shot does not resolve a ground state (Nehari residual "
                            + std::to_string(neh) + ", ODE residual " + std::to_string(ode_res)
                            + "); eps is likely beyond the solvable range");
    }
    const DecayConstants dc = extract_decay_constants(profile);
    return profile.with_decay(dc.c, dc.c_prime);
}

} // namespace critbound

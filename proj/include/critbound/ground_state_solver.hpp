#pragma once

// Radial minimization of E_ε on its Nehari manifold for a(x) = a(|x|), plus the
// ground-state and nonexistence diagnostics built on the bump fields.
//
// Discretization: continuous piecewise-linear elements on a radial grid, every
// integral by 4-point Gauss per element, so the discrete energy, its gradient
// and the H¹ Gram matrix are mutually consistent. Steps follow the H¹ (Sobolev)
// gradient and are retracted to the manifold by the scalar Nehari projection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "critbound/errors.hpp"
#include "critbound/fields.hpp"
#include "critbound/nehari.hpp"
#include "critbound/parallel.hpp"
#include "critbound/params.hpp"
#include "critbound/potential.hpp"
#include "critbound/quadrature.hpp"
#include "critbound/radial_core.hpp"

namespace critbound {

/// Discrete radial functional on nodes r_0 < ... < r_M. Dirichlet nodes are
/// held at zero: r_M always, r_0 = R₀ on an exterior domain.
class RadialFunctional {
public:
    RadialFunctional(const PotentialSpec& potential, const DomainSpec& domain,
                     const ProblemParams& params, double r_max = 35.0, std::size_t nodes = 4000)
        : params_(params), domain_(domain)
    {
        params.validate();
        potential.validate(params.N);
        domain.validate();
        if (norm(potential.center) > 0.0) {
            throw InvalidParams("the radial solver needs a potential centered at the origin");
        }
        const double r0 = domain.is_exterior() ? domain.hole_radius : 0.0;
        const std::vector<double> base = make_radial_grid(r_max - r0, nodes);
        r_.resize(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            r_[i] = r0 + base[i];
        }
        first_free_ = domain.is_exterior() ? 1 : 0;
        last_free_ = r_.size() - 2;

        const auto& g = quad::gauss_rule<4>();
        const double omega = unit_sphere_area(params.N);
        const std::size_t M = r_.size() - 1;
        diag_.assign(r_.size(), 0.0);
        off_.assign(M, 0.0);
        stiff_.assign(M, 0.0);
        qw_.resize(4 * M);
        qa_.resize(4 * M);
        phi_.resize(4 * M);
        for (std::size_t e = 0; e < M; ++e) {
            const double h = r_[e + 1] - r_[e];
            for (std::size_t k = 0; k < 4; ++k) {
                const double t = 0.5 * (1.0 + g.x[k]);
                const double r = r_[e] + h * t;
                const double w = omega * 0.5 * h * g.w[k] * std::pow(r, params.N - 1);
                const double a = potential.radial_value(r);
                qw_[4 * e + k] = w;
                qa_[4 * e + k] = w * a;
                phi_[4 * e + k] = t;
                stiff_[e] += w / (h * h);
                // ∫ u'² + a u² on the element: u' = (u_{e+1} - u_e)/h, u = (1-t)u_e + t u_{e+1}
                diag_[e] += w * (1.0 / (h * h) + a * (1 - t) * (1 - t));
                diag_[e + 1] += w * (1.0 / (h * h) + a * t * t);
                off_[e] += w * (-1.0 / (h * h) + a * t * (1 - t));
            }
        }
    }

    [[nodiscard]] const std::vector<double>& grid() const { return r_; }
    [[nodiscard]] const ProblemParams& params() const { return params_; }
    [[nodiscard]] std::size_t size() const { return r_.size(); }
    [[nodiscard]] bool is_free(std::size_t i) const { return i >= first_free_ && i <= last_free_; }

    /// Nodal values of a profile with Dirichlet nodes zeroed.
    [[nodiscard]] std::vector<double> sample(const RadialProfile& profile) const
    {
        std::vector<double> u(r_.size(), 0.0);
        for (std::size_t i = first_free_; i <= last_free_; ++i) {
            u[i] = std::max(profile.value(r_[i]), 0.0);
        }
        return u;
    }

    /// ‖u‖_a² summed per element in difference form. The nodal form
    /// uᵀGu cancels terms of size 1/h² and leaves a noise floor that stalls
    /// the line search near convergence.
    [[nodiscard]] double quadratic(const std::vector<double>& u) const
    {
        long double s = 0.0L;
        for (std::size_t e = 0; e + 1 < r_.size(); ++e) {
            const double du = u[e + 1] - u[e];
            s += stiff_[e] * du * du;
            for (std::size_t k = 0; k < 4; ++k) {
                const double t = phi_[4 * e + k];
                const double v = (1 - t) * u[e] + t * u[e + 1];
                s += qa_[4 * e + k] * v * v;
            }
        }
        return static_cast<double>(s);
    }

    [[nodiscard]] NormBundle bundle(const std::vector<double>& u) const
    {
        NormBundle b;
        b.p = params_.p;
        b.crit_exp = params_.crit_exp();
        b.norm_a_sq = quadratic(u);
        long double l2 = 0.0L;
        long double lp = 0.0L;
        long double lc = 0.0L;
        for (std::size_t e = 0; e + 1 < r_.size(); ++e) {
            for (std::size_t k = 0; k < 4; ++k) {
                const double t = phi_[4 * e + k];
                const double v = std::abs((1 - t) * u[e] + t * u[e + 1]);
                const double w = qw_[4 * e + k];
                l2 += w * v * v;
                lp += w * std::pow(v, b.p);
                lc += w * std::pow(v, b.crit_exp);
            }
        }
        b.l2 = static_cast<double>(l2);
        b.lp_p = static_cast<double>(lp);
        b.lcrit = static_cast<double>(lc);
        return b;
    }

    [[nodiscard]] double energy(const std::vector<double>& u) const
    {
        return critbound::energy(bundle(u), params_.eps);
    }

    /// ∂E/∂u_i; zero on Dirichlet nodes.
    [[nodiscard]] std::vector<double> gradient(const std::vector<double>& u) const
    {
        const double p = params_.p;
        const double q = params_.crit_exp();
        std::vector<double> g(r_.size(), 0.0);
        for (std::size_t e = 0; e + 1 < r_.size(); ++e) {
            const double flux = stiff_[e] * (u[e + 1] - u[e]);
            g[e] -= flux;
            g[e + 1] += flux;
            for (std::size_t k = 0; k < 4; ++k) {
                const double t = phi_[4 * e + k];
                const double v = (1 - t) * u[e] + t * u[e + 1];
                const double av = std::abs(v);
                const double f = std::pow(av, p - 2.0) * v + params_.eps * std::pow(av, q - 2.0) * v;
                const double w = qa_[4 * e + k] * v - qw_[4 * e + k] * f;
                g[e] += w * (1 - t);
                g[e + 1] += w * t;
            }
        }
        for (std::size_t i = 0; i < r_.size(); ++i) {
            if (!is_free(i)) {
                g[i] = 0.0;
            }
        }
        return g;
    }

    /// Solves G v = g on the free nodes, G the Gram matrix of ‖·‖_a.
    [[nodiscard]] std::vector<double> riesz(const std::vector<double>& g) const
    {
        const std::size_t lo = first_free_;
        const std::size_t n = last_free_ - lo + 1;
        std::vector<double> c(n), d(n), v(r_.size(), 0.0);
        // Thomas algorithm on the tridiagonal (off_, diag_, off_) restricted to free nodes.
        double prev_c = 0.0;
        double prev_d = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = lo + k;
            const double sub = k > 0 ? off_[i - 1] : 0.0;
            const double sup = k + 1 < n ? off_[i] : 0.0;
            const double denom = diag_[i] - sub * prev_c;
            c[k] = sup / denom;
            d[k] = (g[i] - sub * prev_d) / denom;
            prev_c = c[k];
            prev_d = d[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            v[lo + k] = d[k] - (k + 1 < n ? c[k] * v[lo + k + 1] : 0.0);
        }
        return v;
    }

    /// Profile through the nodal values; zero inside the hole.
    [[nodiscard]] RadialProfile to_profile(const std::vector<double>& u) const
    {
        std::vector<double> r, v, dv;
        if (r_.front() > 0.0) {
            r.push_back(0.0);
            v.push_back(0.0);
            dv.push_back(0.0);
        }
        for (std::size_t i = 0; i < r_.size(); ++i) {
            r.push_back(r_[i]);
            v.push_back(u[i]);
            double slope;
            if (i == 0) {
                slope = r_[0] == 0.0 ? 0.0 : (u[1] - u[0]) / (r_[1] - r_[0]);
            } else if (i + 1 == r_.size()) {
                slope = (u[i] - u[i - 1]) / (r_[i] - r_[i - 1]);
            } else {
                slope = (u[i + 1] - u[i - 1]) / (r_[i + 1] - r_[i - 1]);
            }
            dv.push_back(slope);
        }
        return RadialProfile(std::move(r), std::move(v), std::move(dv), {}, params_);
    }

private:
    ProblemParams params_;
    DomainSpec domain_;
    std::vector<double> r_;
    std::size_t first_free_ = 0;
    std::size_t last_free_ = 0;
    std::vector<double> diag_, off_; // Gram matrix, only for the Riesz solve
    std::vector<double> stiff_;
    std::vector<double> qw_, qa_, phi_;
};

enum class SolverStatus { Converged, LineSearchStalled, NonconvergedAfterMaxIters };

inline std::string to_string(SolverStatus s)
{
    switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::LineSearchStalled: return "line_search_stalled";
    default: return "nonconverged_after_max_iters";
    }
}

struct SolverOptions {
    double r_max = 35.0;
    std::size_t nodes = 4000;
    double gradient_tol = 1e-6;
    int max_iters = 2000;
    double armijo_c1 = 1e-4;
    double step_shrink = 0.5;
    double min_step = 1e-12;
};

struct RunLogRow {
    int iter = 0;
    double energy = 0.0;
    double gradient_norm = 0.0;
    double t = 0.0; ///< Nehari scale applied after the step
};

struct MinimizationResult {
    std::vector<double> nodal;
    std::shared_ptr<const RadialProfile> profile;
    double energy = 0.0;
    double gradient_norm = 0.0;
    double max_nehari_residual = 0.0;
    double max_energy_increase = 0.0;
    SolverStatus status = SolverStatus::NonconvergedAfterMaxIters;
    std::vector<RunLogRow> log;
};

/// Projected H¹-gradient descent on the discrete Nehari manifold. Returns the
/// best iterate; the status flags a stalled line search or the iteration cap.
inline MinimizationResult minimize_on_nehari_radial(const PotentialSpec& potential,
                                                    const DomainSpec& domain,
                                                    const ProblemParams& params,
                                                    const RadialProfile& init,
                                                    const SolverOptions& opt = {})
{
    const RadialFunctional F(potential, domain, params, opt.r_max, opt.nodes);
    const double eps = params.eps;
    std::vector<double> u = F.sample(init);

    auto retract = [&](std::vector<double>& v, double* t_out) {
        const NehariProjection proj = project_to_nehari(F.bundle(v), eps);
        for (double& x : v) {
            x *= proj.t;
        }
        if (t_out) {
            *t_out = proj.t;
        }
        return proj;
    };

    MinimizationResult out;
    double t = 0.0;
    retract(u, &t);
    double E = F.energy(u);
    out.status = SolverStatus::NonconvergedAfterMaxIters;
    for (int it = 0; it <= opt.max_iters; ++it) {
        const std::vector<double> g = F.gradient(u);
        const std::vector<double> v = F.riesz(g);
        double gv = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            gv += g[i] * v[i];
        }
        const double gnorm = std::sqrt(std::max(gv, 0.0));
        out.log.push_back({it, E, gnorm, t});
        out.max_nehari_residual =
            std::max(out.max_nehari_residual, std::abs(nehari_defect(F.bundle(u), eps, 1.0)) / F.quadratic(u));
        out.gradient_norm = gnorm;
        if (gnorm < opt.gradient_tol) {
            out.status = SolverStatus::Converged;
            break;
        }
        if (it == opt.max_iters) {
            break;
        }
        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(u.size());
        double t_trial = 0.0;
        double E_trial = 0.0;
        while (alpha >= opt.min_step) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                trial[i] = std::max(u[i] - alpha * v[i], 0.0);
            }
            try {
                retract(trial, &t_trial);
                E_trial = F.energy(trial);
                if (E_trial <= E - opt.armijo_c1 * alpha * gv) {
                    accepted = true;
                    break;
                }
            } catch (const DegenerateFunction&) {
            }
            alpha *= opt.step_shrink;
        }
        if (!accepted) {
            out.status = SolverStatus::LineSearchStalled;
            break;
        }
        out.max_energy_increase = std::max(out.max_energy_increase, E_trial - E);
        u.swap(trial);
        E = E_trial;
        t = t_trial;
    }
    out.energy = E;
    out.nodal = u;
    out.profile = std::make_shared<const RadialProfile>(F.to_profile(u));
    return out;
}

// ---------------------------------------------------------------------------
// Ground-state criterion with the ground state of the limit problem
// ---------------------------------------------------------------------------

struct Criterion1824Row {
    Vec3 z{};
    double lhs = 0.0;       ///< ‖w_z / |w_z|_p‖_a²
    double rhs = 0.0;       ///< ‖w‖² / |w|_p²
    bool satisfied = false; ///< lhs < rhs beyond the noise floor
    bool equality = false;  ///< |lhs - rhs| within the noise floor
    double energy_sw = 0.0; ///< E(s w_z) with s w_z on the Nehari manifold of E
    double m = 0.0;
};

struct Criterion1824Report {
    std::vector<Criterion1824Row> rows;
    double m = 0.0;
};

/// Evaluates ‖w_z‖_a² / |w_z|_p² against ‖w‖² / |w|_p² for every z, with
/// w_z = ϑ w(· - z), and the implied energy E(s w_z) against m.
inline Criterion1824Report check_condition_18_24(const PotentialSpec& potential,
                                                 const DomainSpec& domain,
                                                 const ProblemParams& params,
                                                 const std::vector<Vec3>& z_grid,
                                                 const QuadratureOptions& qopt = {},
                                                 double noise_floor = 1e-12)
{
    if (z_grid.empty()) {
        throw InvalidParams("check_condition_18_24 needs at least one z");
    }
    const auto w = std::make_shared<const RadialProfile>(shoot_ground_state(params.with_eps(0.0)));
    const NormBundle self = bundle_of(*w);
    const double p = params.p;
    const double rhs = self.norm_a_sq / std::pow(self.lp_p, 2.0 / p);
    Criterion1824Report report;
    report.m = (0.5 - 1.0 / p) * self.norm_a_sq;
    report.rows.resize(z_grid.size());
    parallel_for(z_grid.size(), [&](std::size_t i) {
        const BumpField f = single_bump(w, z_grid[i], domain);
        const NormBundle b = field_bundle(f, potential, qopt);
        Criterion1824Row row;
        row.z = z_grid[i];
        row.lhs = b.norm_a_sq / std::pow(b.lp_p, 2.0 / p);
        row.rhs = rhs;
        row.equality = std::abs(row.lhs - rhs) <= noise_floor * rhs;
        row.satisfied = !row.equality && row.lhs < rhs;
        row.energy_sw = (0.5 - 1.0 / p) * std::pow(row.lhs, p / (p - 2.0));
        row.m = report.m;
        report.rows[i] = row;
    });
    return report;
}

// ---------------------------------------------------------------------------
// Translated-bump sequence for potentials above a_∞
// ---------------------------------------------------------------------------

struct NonexistenceRow {
    int n = 0;
    double t = 0.0;
    double energy = 0.0;
    double gap = 0.0; ///< energy - m_ε
};

struct NonexistenceReport {
    double m_eps = 0.0;
    std::vector<NonexistenceRow> rows;

    [[nodiscard]] bool strictly_decreasing() const
    {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!(rows[i].energy < rows[i - 1].energy)) {
                return false;
            }
        }
        return true;
    }
};

/// E_ε(t_n ϑ w_ε(· - n e₁)) for each n, with m_ε evaluated by the same
/// projection of w_ε's own norms.
inline NonexistenceReport nonexistence_diagnostic(const PotentialSpec& potential,
                                                  const DomainSpec& domain,
                                                  const ProblemParams& params,
                                                  const std::vector<int>& n_list,
                                                  const QuadratureOptions& qopt = {})
{
    if (potential.sign_class() == SignClass::Below || potential.sign_class() == SignClass::Mixed) {
        throw InvalidParams("nonexistence_diagnostic needs a >= 1");
    }
    const auto w = std::make_shared<const RadialProfile>(shoot_ground_state(params));
    NonexistenceReport report;
    report.m_eps = project_to_nehari(bundle_of(*w), params.eps).energy_at_t;
    report.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        const BumpField f = single_bump(w, {static_cast<double>(n_list[i]), 0.0, 0.0}, domain);
        const NehariProjection proj = project_to_nehari(field_bundle(f, potential, qopt), params.eps);
        report.rows[i] = {n_list[i], proj.t, proj.energy_at_t, proj.energy_at_t - report.m_eps};
    });
    return report;
}

} // namespace critbound

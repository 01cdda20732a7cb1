// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "critbound/barycenter.hpp"
#include "critbound/config.hpp"
#include "critbound/energy_levels.hpp"
#include "critbound/ground_state_solver.hpp"
#include "critbound/interaction.hpp"
#include "critbound/minmax.hpp"
#include "oracles.hpp"

using namespace critbound;

namespace {

struct Line {
    bool pass = true;
    std::ostringstream detail;

    void need(bool ok, const std::string& what)
    {
        pass &= ok;
        if (!ok) {
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Line&)>& body)
{
    Line line;
    line.detail.precision(10);
    try {
        body(line);
    } catch (const std::exception& e) {
        line.pass = false;
        line.detail << " [exception: " << e.what() << "]";
    }
    failures += !line.pass;
    std::printf("criterion %2d %s: %s%s\n", id, line.pass ? "PASS" : "FAIL", title, line.detail.str().c_str());
    std::fflush(stdout);
}

const ExperimentConfig cfg = load_config(CRITBOUND_SOURCE_DIR "/config/defaults.ini");
const ProblemParams limit{3, 4.0, 0.0, 1.0};

ProfilePtr limit_w()
{
    static const ProfilePtr w = std::make_shared<const RadialProfile>(shoot_ground_state(limit));
    return w;
}

double m_level(double eps) { return compute_m_eps(limit.with_eps(eps)).energy; }

} // namespace

int main()
{
    report(1, "ground-state consistency", [](Line& L) {
        const GroundStateReport g = ground_state_report(limit);
        L.detail << " E=" << g.energy << " nehari=" << g.nehari_residual << " identity=" << g.identity_gap
                 << " halving=" << g.grid_stability;
        L.need(g.nehari_residual <= 1e-5, "Nehari residual");
        L.need(g.identity_gap <= 1e-5, "energy identity");
        L.need(g.grid_stability <= 1e-5, "grid halving");
    });

    report(2, "decay law", [](Line& L) {
        const DecayConstants d = extract_decay_constants(*limit_w());
        const double gap = std::abs(d.c_prime + d.c) / d.c;
        L.detail << " c=" << d.c << " c'=" << d.c_prime << " drift=" << d.plateau_variation << " |c'+c|/c=" << gap;
        L.need(d.plateau_variation < 0.02, "plateau drift");
        L.need(gap < 0.02, "c' vs c");
    });

    report(3, "level ordering", [](Line& L) {
        const double m = m_level(0.0);
        std::vector<double> xs, ys;
        L.detail << " m=" << m;
        for (double eps : cfg.eps_list) {
            const double me = m_level(eps);
            const double crit = critical_level(3, eps);
            xs.push_back(eps);
            ys.push_back(me);
            L.detail << " | eps=" << eps << " m_eps=" << me << " margin_crit=" << crit - me;
            L.need(me <= m, "m_eps <= m at eps=" + std::to_string(eps));
            L.need(crit - me > 0.0, "m_eps < crit at eps=" + std::to_string(eps));
        }
        const auto [slope, intercept] = linear_fit(xs, ys);
        const double err = std::abs(intercept - m) / m;
        L.detail << " | linear intercept=" << intercept << " rel_err=" << err;
        L.need(err <= 0.01, "linear extrapolation within 1%");
    });

    report(4, "Sobolev constant", [](Line& L) {
        const double S = sobolev_constant(3);
        const oracle::FamilyMinimum fam = oracle::minimize_family(3);
        const double gap = std::abs(S - fam.value) / fam.value;
        L.detail << " S=" << S << " family_min=" << fam.value << " kappa*=" << fam.kappa << " rel_gap=" << gap
                 << " closed_form=" << oracle::sobolev_closed_form(3);
        L.need(gap <= 1e-4, "two-parameter oracle");
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        int beaten = 0;
        double lowest = INFINITY;
        for (int k = 0; k < 200; ++k) {
            double v = 0.0;
            if (k % 2 == 0) {
                // (1 + r^κ)^(-β) with decay r^(-κβ), κβ > 1/2
                const double kap = 1.0 + 3.0 * U(rng);
                const double beta = (0.6 + 2.4 * U(rng)) / kap;
                v = rayleigh_quotient(
                    3, [&](double r) { return std::pow(1.0 + std::pow(r, kap), -beta); },
                    [&](double r) {
                        return -beta * kap * std::pow(r, kap - 1.0) * std::pow(1.0 + std::pow(r, kap), -beta - 1.0);
                    });
            } else {
                const double a2 = U(rng), b1 = 0.1 + 3.0 * U(rng), b2 = 0.1 + 3.0 * U(rng);
                v = rayleigh_quotient(
                    3, [&](double r) { return std::exp(-b1 * r * r) + a2 * std::exp(-b2 * r * r); },
                    [&](double r) {
                        return -2.0 * r * (b1 * std::exp(-b1 * r * r) + a2 * b2 * std::exp(-b2 * r * r));
                    });
            }
            lowest = std::min(lowest, v);
            beaten += v < S * (1.0 - 1e-9);
        }
        L.detail << " random_min=" << lowest << " beaten=" << beaten;
        L.need(beaten == 0, "no random trial below S");
    });

    report(5, "interaction asymptotics", [](Line& L) {
        const ProfilePtr w = limit_w();
        const InteractionReport rep = estimate_c1(*w, cfg.rho_list, -1.0, 1.0, cfg.quadrature, INFINITY);
        const double c = oracle::decay_c(*w, 12.0, 20.0);
        const double target = oracle::c1_limit(*w, c, w->params().p - 1.0);
        const double gap = std::abs(rep.c1_estimate - target) / target;
        L.detail << " normalized=";
        for (double v : rep.normalized) {
            L.detail << v << " ";
        }
        L.detail << "drift=" << rep.plateau_drift << " c1=" << rep.c1_estimate << " oracle=" << target
                 << " gap=" << gap;
        L.need(rep.plateau_drift < 0.05, "plateau drift");
        L.need(gap <= 0.03, "oracle match");
    });

    report(6, "power inequality", [](Line& L) {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        int violations = 0;
        long double worst = INFINITY;
        for (int i = 0; i < 100000; ++i) {
            const double a = 20.0 * U(rng);
            const double b = 20.0 * U(rng);
            const double p = 2.0 + 4.0 * U(rng); // (2, 2*) for N = 3
            worst = std::min(worst, power_inequality_slack(a, b, p));
            violations += !power_inequality(a, b, p, 1e-12);
        }
        L.detail << " samples=100000 violations=" << violations << " min_slack=" << static_cast<double>(worst);
        L.need(violations == 0, "zero violations");
    });

    report(7, "two-bump expansion", [](Line& L) {
        const ProfilePtr w = limit_w();
        const InteractionReport c1 = estimate_c1(*w, cfg.rho_list, -1.0, 1.0, cfg.quadrature);
        const TwoBumpReport rep = two_bump_expansion_check(w, cfg.two_bump_rho, {0.5}, c1.c1_estimate, {}, {},
                                                           {cfg.bracket_below, cfg.bracket_above}, cfg.quadrature);
        const TwoBumpRow& r = rep.rows.front();
        const double cd = rep.c1 * rep.delta;
        const double lo_n = r.norm_main - cfg.bracket_below * cd, hi_n = r.norm_main + cfg.bracket_above * cd;
        const double lo_p = r.lp_main - cfg.bracket_below * cd, hi_p = r.lp_main + cfg.bracket_above * cd;
        L.detail << " rho=" << rep.rho << " norm=" << r.norm_sq << " in [" << lo_n << ", " << hi_n << "]"
                 << " lp=" << r.lp_p << " in [" << lo_p << ", " << hi_p << "]"
                 << " gamma(1/2)=" << rep.gamma_half;
        L.need(r.norm_sq >= lo_n && r.norm_sq <= hi_n, "norm bracket");
        L.need(r.lp_p >= lo_p && r.lp_p <= hi_p, "lp bracket");
        L.need(rep.gamma_half < 0.0, "gamma(1/2) < 0");
    });

    report(8, "min-max chain", [](Line& L) {
        const ProfilePtr w = limit_w();
        const double eps = cfg.params.eps;
        const double m = m_level(0.0);
        const double me = m_level(eps);
        ScanOptions so;
        so.s_count = cfg.s_count;
        so.n_azimuth = cfg.n_azimuth;
        so.n_polar = cfg.n_polar;
        const ScanResult scan = scan_levels(w, cfg.rho, eps, {}, {}, so);
        const BetaZeroResult zero = find_beta_zero(w, cfg.rho, eps);
        const EnergyLedger chain = inequality_chain_report(scan, zero, m, me, eps);
        L.detail << " grid=" << cfg.s_count << "x" << scan.scan.size() / cfg.s_count << " A=" << scan.A
                 << " B=" << scan.B << " C_hat=" << zero.c_hat << " m=" << m << " m_eps=" << me;
        for (const auto& c : chain.checks) {
            L.detail << " | " << c.name << " margin=" << c.margin();
            L.need(c.pass, c.name);
        }
    });

    report(9, "barycenter properties", [](Line& L) {
        const ProfilePtr w = limit_w();
        BarycenterOptions bo;
        bo.spacing = cfg.lattice_spacing;
        const double h = bo.spacing;
        const BumpField psi = make_psi(w, 0.3, sigma_point(0.5, 2.0).y, cfg.rho);
        const Vec3 b = barycenter(psi, bo);
        bool b3 = true;
        for (double t : {1e-3, 0.7, 4.0, 1e3}) {
            b3 &= barycenter(psi.scaled(t), bo) == b;
        }
        const double b2 = norm(barycenter(single_bump(w, {0.0, 0.0, 0.0}), bo));
        const Vec3 z{0.37, -1.13, 2.71};
        const double b4 = norm(barycenter(single_bump(w, z), bo) - z);
        L.detail << " b3_exact=" << b3 << " |b2|=" << b2 << " |b4|=" << b4;
        L.need(b3, "(b3)");
        L.need(b2 <= 2.0 * h, "(b2)");
        L.need(b4 <= 2.0 * h, "(b4)");
        const Vec3 y = sigma_point(M_PI / 3.0, 2.0 * M_PI / 3.0).y;
        double prev = INFINITY;
        for (double rho : cfg.barycenter_rho_list) {
            const double err = norm(barycenter(single_bump(w, rho * y, DomainSpec::exterior(1.0)), bo) - rho * y);
            L.detail << " | rho=" << rho << " err=" << err << " err/rho=" << err / rho;
            L.need(err <= 2.0 * h, "error within 2h at rho=" + std::to_string(rho));
            L.need(err / rho < prev, "err/rho decreasing");
            prev = err / rho;
        }
    });

    report(10, "nonexistence construction", [](Line& L) {
        const NonexistenceReport rep =
            nonexistence_diagnostic({}, DomainSpec::exterior(1.0), cfg.params, cfg.n_list, cfg.quadrature);
        bool above = true;
        for (const auto& r : rep.rows) {
            L.detail << " n=" << r.n << ":gap=" << r.gap;
            above &= r.gap > 0.0;
        }
        L.need(rep.strictly_decreasing(), "strictly decreasing");
        L.need(above, "all above m_eps");
        L.need(rep.rows.back().gap < 1e-3, "final gap < 1e-3");
    });

    report(11, "condition regimes", [](Line& L) {
        std::vector<Vec3> z = cfg.z_list;
        z.push_back({2.0, 1.0, -1.0});
        const auto flat = check_condition_18_24({}, {}, cfg.params, z, cfg.quadrature);
        double worst = 0.0;
        for (const auto& r : flat.rows) {
            worst = std::max(worst, std::abs(r.lhs - r.rhs) / r.rhs);
        }
        L.detail << " a=1 max_rel_gap=" << worst;
        L.need(worst <= 1e-4, "equality for a = 1");
        const auto below =
            check_condition_18_24(PotentialSpec::gaussian(-0.3, 3.0), {}, cfg.params, z, cfg.quadrature);
        bool all_sat = true;
        for (const auto& r : below.rows) {
            all_sat &= r.satisfied;
        }
        const auto hole = check_condition_18_24({}, DomainSpec::exterior(1.0), cfg.params, z, cfg.quadrature);
        bool all_viol = true;
        for (const auto& r : hole.rows) {
            all_viol &= !r.satisfied && !r.equality && r.lhs > r.rhs;
        }
        L.detail << " below_satisfied=" << all_sat << " hole_violated=" << all_viol;
        L.need(all_sat, "strict satisfaction below");
        L.need(all_viol, "strict violation for the hole");
    });

    report(12, "gradient check", [](Line& L) {
        const ProblemParams pp = cfg.params;
        const PotentialSpec below = PotentialSpec::gaussian(-0.3, 2.0);
        const RadialFunctional F(below, {}, pp, cfg.r_max, cfg.solver_nodes);
        const std::vector<double> u = F.sample(*limit_w());
        const std::vector<double> g = F.gradient(u);
        std::mt19937_64 rng(12);
        std::normal_distribution<double> N01;
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> d(u.size(), 0.0), up = u, um = u;
            double gd = 0.0;
            const double h = 1e-4;
            for (std::size_t i = 0; i < u.size(); ++i) {
                if (F.is_free(i)) {
                    d[i] = N01(rng) * std::max(u[i], 1e-3);
                }
                gd += g[i] * d[i];
                up[i] += h * d[i];
                um[i] -= h * d[i];
            }
            const double fd = (F.energy(up) - F.energy(um)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - gd) / std::abs(gd));
        }
        SolverOptions so;
        so.nodes = cfg.solver_nodes;
        so.gradient_tol = cfg.gradient_tol;
        so.max_iters = cfg.max_iters;
        const MinimizationResult r = minimize_on_nehari_radial(below, {}, pp, *limit_w(), so);
        bool monotone = r.max_energy_increase <= 0.0;
        for (std::size_t i = 1; i < r.log.size(); ++i) {
            monotone &= r.log[i].energy <= r.log[i - 1].energy;
        }
        const double me = m_level(pp.eps);
        L.detail << " fd_rel_err=" << worst << " status=" << to_string(r.status) << " iters=" << r.log.size()
                 << " E=" << r.energy << " m_eps=" << me << " monotone=" << monotone;
        L.need(worst <= 1e-5, "finite differences");
        L.need(monotone, "monotone descent");
        L.need(r.energy < me, "below-class under m_eps");
    });

    std::printf("acceptance: %d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

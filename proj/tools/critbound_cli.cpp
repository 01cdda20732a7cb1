// Batch runner: one subcommand per verification, CSV + text report per run.
//
// Exit status: 0 when every recorded check passes, 2 when one fails (or a
// warning is raised under --strict), 1 on a computational error, 64 on a bad
// command line or config.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "critbound/barycenter.hpp"
#include "critbound/config.hpp"
#include "critbound/energy_levels.hpp"
#include "critbound/ground_state_solver.hpp"
#include "critbound/interaction.hpp"
#include "critbound/io.hpp"
#include "critbound/minmax.hpp"
#include "critbound/parallel.hpp"

namespace fs = std::filesystem;
using namespace critbound;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_check_failed = 2;
constexpr int exit_usage = 64;

struct Outcome {
    std::vector<LedgerCheck> checks;
    std::vector<std::string> warnings;
    std::vector<std::string> files;
    std::ostringstream text;

    void check(LedgerCheck c) { checks.push_back(std::move(c)); }

    void flag(bool ok, std::string name, double value, std::string note = {})
    {
        LedgerCheck c;
        c.name = std::move(name);
        c.lhs = value;
        c.rhs = value;
        c.pass = ok;
        c.note = std::move(note);
        checks.push_back(std::move(c));
    }

    [[nodiscard]] bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const LedgerCheck& c) { return c.pass; });
    }
};

struct Context {
    ExperimentConfig cfg;
    fs::path out;

    [[nodiscard]] ShootingOptions shooting() const
    {
        ShootingOptions o;
        o.r_max = cfg.r_max;
        o.nodes = cfg.shooting_nodes;
        return o;
    }

    [[nodiscard]] ProfilePtr limit_ground_state() const
    {
        return std::make_shared<const RadialProfile>(shoot_ground_state(cfg.params.with_eps(0.0), shooting()));
    }
};

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

CsvWriter open_csv(const Context& ctx, Outcome& o, const std::string& name, const std::vector<std::string>& cols)
{
    o.files.push_back(name);
    return CsvWriter(ctx.out / name, cols);
}

void write_checks_csv(const Context& ctx, Outcome& o, const std::string& name)
{
    CsvWriter csv = open_csv(ctx, o, name, {"check", "lhs", "rhs", "margin", "pass", "skipped", "note"});
    for (const auto& c : o.checks) {
        csv.row({c.name, c.lhs, c.rhs, c.margin(), static_cast<long long>(c.pass), static_cast<long long>(c.skipped),
                 c.note});
    }
}

// ---------------------------------------------------------------------------

Outcome run_ground_state(const Context& ctx)
{
    Outcome o;
    std::vector<double> eps_values{0.0};
    if (ctx.cfg.params.eps > 0.0) {
        eps_values.push_back(ctx.cfg.params.eps);
    }
    CsvWriter summary = open_csv(ctx, o, "ground_state.csv",
                                 {"eps", "amplitude", "norm_sq", "lp_p", "lcrit_q", "energy", "nehari_residual",
                                  "ode_residual", "identity_gap", "energy_refined", "grid_stability"});
    for (double eps : eps_values) {
        const GroundStateReport rep = ground_state_report(ctx.cfg.params.with_eps(eps), ctx.shooting());
        summary.row({eps, rep.shooting.amplitude, rep.norms.h1_sq(), rep.norms.lp_p, rep.norms.lcrit, rep.energy,
                     rep.nehari_residual, rep.ode_residual, rep.identity_gap, rep.energy_refined,
                     rep.grid_stability});
        const std::string tag = eps_tag(eps);
        o.check(make_check("nehari residual " + tag, rep.nehari_residual, 1e-5, false));
        o.check(make_check("energy identity " + tag, rep.identity_gap, 1e-5, false));
        o.check(make_check("grid halving stability " + tag, rep.grid_stability, 1e-5, false));
        o.text << "eps=" << eps << " w(0)=" << fmt(rep.shooting.amplitude) << " energy=" << fmt(rep.energy)
               << " refined=" << fmt(rep.energy_refined) << "\n";

        const std::string name = eps == 0.0 ? "profile_eps0.csv" : "profile_eps.csv";
        CsvWriter prof = open_csv(ctx, o, name, {"r", "u", "du"});
        const auto& r = rep.profile->grid();
        for (std::size_t i = 0; i < r.size(); ++i) {
            prof.row({r[i], rep.profile->values()[i], rep.profile->derivs()[i]});
        }
    }
    return o;
}

Outcome run_decay(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    const DecayConstants d = extract_decay_constants(*w);
    CsvWriter csv = open_csv(ctx, o, "decay.csv",
                             {"c", "c_prime", "plateau_variation", "window_lo", "window_hi", "rel_gap_c_prime"});
    const double gap = std::abs(d.c_prime + d.c) / d.c;
    csv.row({d.c, d.c_prime, d.plateau_variation, d.window_lo, d.window_hi, gap});
    CsvWriter tail = open_csv(ctx, o, "decay_plateau.csv", {"r", "u_er_rN"});
    const double b = 0.5 * (w->params().N - 1);
    for (double r = 1.0; r <= d.window_hi + 1e-12; r += 0.25) {
        tail.row({r, w->value(r) * std::exp(r) * std::pow(r, b)});
    }
    o.check(make_check("plateau drift", d.plateau_variation, 0.02, true));
    o.check(make_check("|c'+c|/c", gap, 0.02, true));
    o.text << "c=" << fmt(d.c) << " c'=" << fmt(d.c_prime) << " window=[" << d.window_lo << ", " << d.window_hi
           << "]\n";
    return o;
}

Outcome run_sobolev(const Context& ctx)
{
    Outcome o;
    const int N = ctx.cfg.params.N;
    const double S = sobolev_constant(N);
    CsvWriter csv = open_csv(ctx, o, "sobolev.csv", {"N", "S"});
    csv.row({static_cast<long long>(N), S});
    CsvWriter lv = open_csv(ctx, o, "critical_level.csv", {"eps", "formula", "by_scaling", "rel_gap"});
    std::vector<double> eps_list = ctx.cfg.eps_list;
    if (ctx.cfg.params.eps > 0.0) {
        eps_list.push_back(ctx.cfg.params.eps);
    }
    std::sort(eps_list.begin(), eps_list.end());
    eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());
    for (double eps : eps_list) {
        const double a = critical_level(N, eps, S);
        const double b = critical_level_by_scaling(N, eps);
        lv.row({eps, a, b, std::abs(a - b) / a});
        o.check(make_check("critical level routes agree " + eps_tag(eps), std::abs(a - b) / a, 1e-8, false));
    }
    o.text << "S=" << fmt(S) << "\n";
    return o;
}

Outcome run_levels(const Context& ctx)
{
    Outcome o;
    LevelOrderingOptions opt;
    opt.shooting = ctx.shooting();
    const EnergyLedger L = verify_level_ordering(ctx.cfg.params, ctx.cfg.eps_list, opt);
    CsvWriter csv = open_csv(ctx, o, "levels.csv", {"eps", "m_eps", "crit_level", "m"});
    for (const auto& [eps, me] : L.m_eps) {
        csv.row({eps, me, L.crit_level.at(eps), L.m});
    }
    for (const auto& c : L.checks) {
        o.check(c);
    }
    o.text << "m=" << fmt(L.m) << " S=" << fmt(L.S) << " richardson=" << fmt(L.extrapolated_m)
           << " linear intercept=" << fmt(L.fit_intercept) << " slope=" << fmt(L.fit_slope) << "\n";
    write_checks_csv(ctx, o, "levels_ledger.csv");
    return o;
}

Outcome run_interaction(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    InteractionReport rep;
    try {
        rep = estimate_c1(*w, ctx.cfg.rho_list, -1.0, 1.0, ctx.cfg.quadrature);
    } catch (const PlateauNotReached& e) {
        o.flag(false, "plateau reached", 0.0, e.what());
        return o;
    }
    CsvWriter csv = open_csv(ctx, o, "interaction.csv", {"rho", "raw", "delta_rho", "normalized", "target", "gap"});
    for (std::size_t i = 0; i < rep.rho_list.size(); ++i) {
        csv.row({rep.rho_list[i], rep.raw_integrals[i], rep.delta[i], rep.normalized[i], rep.target,
                 std::abs(rep.normalized[i] - rep.target) / rep.target});
    }
    const InteractionReport swapped = estimate_c1(*w, ctx.cfg.rho_list, 1.0, w->params().p - 1.0, ctx.cfg.quadrature);
    const double swap_gap = std::abs(swapped.c1_estimate - rep.c1_estimate) / rep.c1_estimate;
    o.check(make_check("plateau drift", rep.plateau_drift, 0.05, true));
    o.check(make_check("c1 vs exponential-limit oracle", rep.gap, 0.03, true));
    o.check(make_check("swapped exponents agree", swap_gap, 1e-3, true));
    o.check(make_check("gamma(1/2) < 0", rep.gamma_half, 0.0, true));
    o.text << "c1=" << fmt(rep.c1_estimate) << " target=" << fmt(rep.target) << " gamma(1/2)=" << fmt(rep.gamma_half)
           << "\n";
    return o;
}

Outcome run_two_bump(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    const InteractionReport c1 = estimate_c1(*w, ctx.cfg.rho_list, -1.0, 1.0, ctx.cfg.quadrature);
    const TwoBumpReport rep =
        two_bump_expansion_check(w, ctx.cfg.two_bump_rho, ctx.cfg.s_list, c1.c1_estimate, ctx.cfg.domain,
                                 ctx.cfg.potential, {ctx.cfg.bracket_below, ctx.cfg.bracket_above}, ctx.cfg.quadrature);
    CsvWriter csv = open_csv(ctx, o, "two_bump.csv",
                             {"s", "norm_sq", "norm_main", "norm_res_over_delta", "lp_p", "lp_main",
                              "lp_res_over_delta", "cross_part", "cross_expected", "norm_in_bracket",
                              "lp_lower_bound"});
    for (const auto& r : rep.rows) {
        csv.row({r.s, r.norm_sq, r.norm_main, r.norm_residual_over_delta(rep.delta), r.lp_p, r.lp_main,
                 r.lp_residual_over_delta(rep.delta), r.cross_part, r.cross_expected,
                 static_cast<long long>(r.norm_in_bracket), static_cast<long long>(r.lp_lower_bound)});
        const std::string tag = "[s=" + fmt(r.s) + "]";
        o.flag(r.norm_in_bracket, "norm within bracket " + tag, r.norm_residual_over_delta(rep.delta),
               "residual / delta_rho");
        o.flag(r.lp_lower_bound, "lp above lower bracket " + tag, r.lp_residual_over_delta(rep.delta),
               "residual / delta_rho");
    }
    o.check(make_check("gamma(1/2) < 0", rep.gamma_half, 0.0, true));
    o.text << "rho=" << rep.rho << " delta=" << fmt(rep.delta) << " c1=" << fmt(rep.c1) << "\n";
    return o;
}

ScanOptions scan_options(const ExperimentConfig& cfg)
{
    ScanOptions so;
    so.s_count = cfg.s_count;
    so.n_azimuth = cfg.n_azimuth;
    so.n_polar = cfg.n_polar;
    so.quadrature = cfg.quadrature;
    so.barycenter.spacing = cfg.lattice_spacing;
    return so;
}

BetaZeroOptions beta_zero_options(const ExperimentConfig& cfg)
{
    BetaZeroOptions bo;
    bo.quadrature = cfg.quadrature;
    bo.barycenter.spacing = cfg.lattice_spacing;
    bo.beta_tolerance = cfg.lattice_spacing;
    return bo;
}

void write_scan_csv(const Context& ctx, Outcome& o, const ScanResult& sc)
{
    CsvWriter csv = open_csv(ctx, o, "scan.csv",
                             {"s", "azimuth", "polar", "t", "energy", "beta_x", "beta_y", "beta_z"});
    for (const auto& pt : sc.scan) {
        csv.row({pt.s, pt.y.azimuth, pt.y.polar, pt.t, pt.energy, pt.beta[0], pt.beta[1], pt.beta[2]});
    }
}

Outcome run_scan(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    const ScanResult sc = scan_levels(w, ctx.cfg.rho, ctx.cfg.params.eps, ctx.cfg.domain, ctx.cfg.potential,
                                      scan_options(ctx.cfg));
    write_scan_csv(ctx, o, sc);
    o.check(make_check("B <= A", sc.B, sc.A, false));
    o.check(make_check("Nehari residual at scan points", sc.max_nehari_residual, 1e-10, true));
    o.text << "A=" << fmt(sc.A) << " (grid " << fmt(sc.A_grid) << ", s=" << fmt(sc.s_at_max) << ") B=" << fmt(sc.B)
           << "\n";
    return o;
}

Outcome run_barycenter(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    BarycenterOptions bo;
    bo.spacing = ctx.cfg.lattice_spacing;
    const double h = bo.spacing;
    const Vec3 b2 = barycenter(single_bump(w, {0.0, 0.0, 0.0}), bo);
    const Vec3 z{0.37, -1.13, 2.71};
    const Vec3 b4 = barycenter(single_bump(w, z), bo);
    BumpField pair = make_psi(w, 0.3, {-1.0, 0.0, 0.0}, ctx.cfg.rho);
    const Vec3 bp = barycenter(pair, bo);
    const Vec3 bp3 = barycenter(pair.scaled(3.0), bo);
    CsvWriter props = open_csv(ctx, o, "barycenter_properties.csv", {"property", "x", "y", "z", "error"});
    props.row({"b2 radial at origin", b2[0], b2[1], b2[2], norm(b2)});
    props.row({"b4 translated", b4[0], b4[1], b4[2], norm(b4 - z)});
    props.row({"b3 scaled by 3", bp3[0], bp3[1], bp3[2], norm(bp3 - bp)});
    o.check(make_check("(b2) |beta(w)|", norm(b2), 2.0 * h, false));
    o.check(make_check("(b4) |beta(w(.-z)) - z|", norm(b4 - z), 2.0 * h, false));
    o.flag(bp3 == bp, "(b3) beta(3u) == beta(u)", norm(bp3 - bp));

    CsvWriter ratio = open_csv(ctx, o, "barycenter_rho.csv", {"rho", "y_x", "y_y", "y_z", "error", "error_over_rho"});
    const Vec3 y = sigma_point(M_PI / 3.0, 2.0 * M_PI / 3.0).y;
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double worst = 0.0;
    for (double rho : ctx.cfg.barycenter_rho_list) {
        const Vec3 b = barycenter(single_bump(w, rho * y, ctx.cfg.domain), bo);
        const double err = norm(b - rho * y);
        ratio.row({rho, y[0], y[1], y[2], err, err / rho});
        decreasing &= err / rho < prev;
        prev = err / rho;
        worst = std::max(worst, err);
    }
    o.check(make_check("|beta(theta w(.-rho y)) - rho y| within 2h", worst, 2.0 * h, false));
    o.flag(decreasing, "error/rho decreasing in rho", prev);
    return o;
}

Outcome run_beta_zero(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    o.check(rho_threshold_check(ctx.cfg.rho, ctx.cfg.rho_bar));
    BetaZeroResult bz;
    try {
        bz = find_beta_zero(w, ctx.cfg.rho, ctx.cfg.params.eps, ctx.cfg.domain, ctx.cfg.potential,
                            beta_zero_options(ctx.cfg));
    } catch (const NoSignChange& e) {
        o.flag(false, "beta zero found", 0.0, e.what());
        return o;
    }
    CsvWriter csv = open_csv(ctx, o, "beta_zero.csv",
                             {"s_star", "s_lo", "s_hi", "beta_lo", "beta_hi", "precondition_min", "t", "energy",
                              "nehari_residual", "c_hat"});
    csv.row({bz.s_star, bz.s_lo, bz.s_hi, bz.beta_lo, bz.beta_hi, bz.precondition_min, bz.t, bz.energy,
             bz.nehari_residual, bz.c_hat});
    const double m = compute_m_eps(ctx.cfg.params.with_eps(0.0), ctx.shooting()).energy;
    if (ctx.cfg.potential.sign_class() == SignClass::Above) {
        // with a >= 1 the certificate sits above m
        o.check(make_check("certificate > m", m, bz.energy, true));
    }
    o.check(make_check("precondition beta(psi[1,y]).y > 0", 0.0, bz.precondition_min, true));
    o.text << chain_header << "\ns*=" << fmt(bz.s_star) << " energy=" << fmt(bz.energy) << "\n";
    return o;
}

Outcome run_chain(const Context& ctx)
{
    Outcome o;
    const ProfilePtr w = ctx.limit_ground_state();
    const double eps = ctx.cfg.params.eps;
    const double m = compute_m_eps(ctx.cfg.params.with_eps(0.0), ctx.shooting()).energy;
    const double m_eps = eps > 0.0 ? compute_m_eps(ctx.cfg.params, ctx.shooting()).energy : m;
    o.check(rho_threshold_check(ctx.cfg.rho, ctx.cfg.rho_bar));
    const ScanResult sc = scan_levels(w, ctx.cfg.rho, eps, ctx.cfg.domain, ctx.cfg.potential, scan_options(ctx.cfg));
    write_scan_csv(ctx, o, sc);
    BetaZeroResult bz;
    try {
        bz = find_beta_zero(w, ctx.cfg.rho, eps, ctx.cfg.domain, ctx.cfg.potential, beta_zero_options(ctx.cfg));
    } catch (const NoSignChange& e) {
        o.flag(false, "beta zero found", 0.0, e.what());
        write_checks_csv(ctx, o, "chain.csv");
        return o;
    }
    const EnergyLedger L = inequality_chain_report(sc, bz, m, m_eps, eps);
    for (const auto& c : L.checks) {
        o.check(c);
    }
    write_checks_csv(ctx, o, "chain.csv");
    o.text << chain_header << "\nA=" << fmt(sc.A) << " B=" << fmt(sc.B) << " C_hat=" << fmt(bz.c_hat)
           << " m=" << fmt(m) << " m_eps=" << fmt(m_eps) << "\n";
    return o;
}

Outcome run_check_18_24(const Context& ctx)
{
    Outcome o;
    const Criterion1824Report rep = check_condition_18_24(ctx.cfg.potential, ctx.cfg.domain, ctx.cfg.params,
                                                          ctx.cfg.z_list, ctx.cfg.quadrature);
    CsvWriter csv = open_csv(ctx, o, "check_18_24.csv",
                             {"z_x", "z_y", "z_z", "lhs", "rhs", "satisfied", "equality", "energy_sw", "m"});
    int sat = 0;
    int eq = 0;
    for (const auto& r : rep.rows) {
        csv.row({r.z[0], r.z[1], r.z[2], r.lhs, r.rhs, static_cast<long long>(r.satisfied),
                 static_cast<long long>(r.equality), r.energy_sw, r.m});
        sat += r.satisfied;
        eq += r.equality;
    }
    const auto n = static_cast<int>(rep.rows.size());
    o.text << "satisfied " << sat << ", equality " << eq << ", violated " << (n - sat - eq) << " of " << n << "\n";
    if (n - sat - eq > 0) {
        o.warnings.push_back("condition violated at " + std::to_string(n - sat - eq) + " sampled z");
    }
    return o;
}

Outcome run_nonexistence(const Context& ctx)
{
    Outcome o;
    if (ctx.cfg.potential.sign_class() != SignClass::Above) {
        o.warnings.push_back("nonexistence diagnostic skipped: potential is not in the a >= 1 class");
        return o;
    }
    if (ctx.cfg.potential.is_constant() && !ctx.cfg.domain.is_exterior()) {
        // a = 1 on R^N: m_eps is attained and every gap is zero by translation
        o.warnings.push_back("nonexistence diagnostic skipped: a = 1 on the whole space attains m_eps");
        return o;
    }
    const NonexistenceReport rep = nonexistence_diagnostic(ctx.cfg.potential, ctx.cfg.domain, ctx.cfg.params,
                                                           ctx.cfg.n_list, ctx.cfg.quadrature);
    CsvWriter csv = open_csv(ctx, o, "nonexistence.csv", {"n", "t", "energy", "gap"});
    bool above = true;
    for (const auto& r : rep.rows) {
        csv.row({static_cast<long long>(r.n), r.t, r.energy, r.gap});
        above &= r.gap > 0.0;
    }
    o.flag(rep.strictly_decreasing(), "strictly decreasing in n", rep.rows.back().energy);
    o.flag(above, "every value > m_eps", rep.rows.back().gap);
    o.check(make_check("final gap < 1e-3", rep.rows.back().gap, 1e-3, true));
    o.text << "m_eps=" << fmt(rep.m_eps) << "\n";
    return o;
}

using Runner = std::function<Outcome(const Context&)>;

const std::vector<std::pair<std::string, Runner>>& runners()
{
    static const std::vector<std::pair<std::string, Runner>> r{
        {"ground-state", run_ground_state}, {"decay", run_decay},
        {"sobolev", run_sobolev},           {"levels", run_levels},
        {"interaction", run_interaction},   {"two-bump", run_two_bump},
        {"scan", run_scan},                 {"barycenter", run_barycenter},
        {"beta-zero", run_beta_zero},       {"chain", run_chain},
        {"check-18-24", run_check_18_24},   {"nonexistence", run_nonexistence},
    };
    return r;
}

void emit_report(const Context& ctx, const std::string& name, Outcome& o)
{
    std::ostringstream rep;
    rep << "# " << name << "\n" << o.text.str();
    for (const auto& c : o.checks) {
        rep << (c.pass ? "PASS " : "FAIL ") << c.name << "  lhs=" << fmt(c.lhs) << " rhs=" << fmt(c.rhs)
            << " margin=" << fmt(c.margin());
        if (!c.note.empty()) {
            rep << "  (" << c.note << ")";
        }
        rep << "\n";
    }
    for (const auto& w : o.warnings) {
        rep << "WARN " << w << "\n";
    }
    write_text(ctx.out / (name + "_report.txt"), rep.str());
    o.files.push_back(name + "_report.txt");
    std::cout << rep.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical checks for bound states of the critical-perturbed Schrödinger problem"};
    std::string config_path;
    std::string out_dir;
    std::size_t threads = 0;
    bool strict = false;
    app.add_option("--config", config_path, "INI config; defaults apply to missing keys")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
    app.add_flag("--strict", strict, "treat warnings as failures");
    std::string command;
    std::vector<std::string> names;
    for (const auto& [name, fn] : runners()) {
        names.push_back(name);
    }
    names.push_back("all");
    app.add_option("command", command, "subcommand")->required()->check(CLI::IsMember(names));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    Context ctx;
    try {
        if (config_path.empty()) {
            for (const fs::path& candidate : {fs::path("config/defaults.ini"), fs::path(CRITBOUND_DEFAULT_CONFIG)}) {
                if (fs::exists(candidate)) {
                    config_path = candidate.string();
                    break;
                }
            }
        }
        if (config_path.empty()) {
            std::cerr << "warning: no defaults.ini found, using compiled defaults\n";
            ctx.cfg = ExperimentConfig{};
        } else {
            ctx.cfg = load_config(config_path);
        }
        ctx.cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    }
    ctx.out = out_dir.empty() ? fs::path(ctx.cfg.output_dir) : fs::path(out_dir);
    thread_count() = threads;

    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = config_path;
    manifest["strict"] = strict;
    bool failed = false;
    try {
        for (const auto& [name, fn] : runners()) {
            if (command != "all" && command != name) {
                continue;
            }
            Outcome o = fn(ctx);
            emit_report(ctx, name, o);
            const bool ok = o.pass() && !(strict && !o.warnings.empty());
            failed |= !ok;
            nlohmann::json entry;
            entry["pass"] = ok;
            entry["files"] = o.files;
            entry["warnings"] = o.warnings;
            int n_fail = 0;
            for (const auto& c : o.checks) {
                n_fail += !c.pass;
            }
            entry["checks"] = o.checks.size();
            entry["failed_checks"] = n_fail;
            manifest["runs"][name] = entry;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    manifest["pass"] = !failed;
    write_json(ctx.out / "manifest.json", manifest);
    std::cout << (failed ? "SUMMARY: FAIL" : "SUMMARY: PASS") << "\n";
    return failed ? exit_check_failed : exit_ok;
}

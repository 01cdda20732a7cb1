#pragma once

// Experiment configuration: INI sections read with boost.property_tree, every
// key optional over the shipped defaults, validated before any computation.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "critbound/errors.hpp"
#include "critbound/fields.hpp"
#include "critbound/geometry.hpp"
#include "critbound/params.hpp"
#include "critbound/potential.hpp"

namespace critbound {

struct ExperimentConfig {
    ProblemParams params{3, 4.0, 0.05, 1.0};
    PotentialSpec potential;
    DomainSpec domain;

    double r_max = 35.0;
    std::size_t shooting_nodes = 4000;

    std::vector<double> eps_list{0.02, 0.05, 0.1};
    std::vector<double> rho_list{3.0, 4.0, 5.0, 6.0};
    double two_bump_rho = 5.0;
    std::vector<double> s_list{0.0, 0.25, 0.5};
    double bracket_below = 0.5;
    double bracket_above = 2.0;

    double rho = 6.0;
    double rho_bar = 3.0;
    int s_count = 41;
    int n_azimuth = 16;
    int n_polar = 8;
    double lattice_spacing = 0.25;
    std::vector<double> barycenter_rho_list{4.0, 6.0, 8.0};

    std::size_t solver_nodes = 4000;
    double gradient_tol = 1e-6;
    int max_iters = 2000;

    std::vector<Vec3> z_list{{0.0, 0.0, 0.0}, {4.0, 0.0, 0.0}, {6.0, 0.0, 0.0}};
    std::vector<int> n_list{4, 6, 8, 10};

    QuadratureOptions quadrature;
    std::string output_dir = "out";

    void validate() const;
};

namespace detail {

inline std::vector<double> parse_reals(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) {
            continue;
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(b), &used);
            if (item.find_first_not_of(" \t", b + used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(key + ": '" + item + "' is not a number");
        }
    }
    return out;
}

inline Vec3 parse_vec3(const std::string& key, const std::string& text)
{
    const std::vector<double> v = parse_reals(key, text);
    if (v.size() != 3) {
        throw ConfigError(key + ": expected three comma-separated components");
    }
    return {v[0], v[1], v[2]};
}

/// "x,y,z; x,y,z; ..."
inline std::vector<Vec3> parse_vec3_list(const std::string& key, const std::string& text)
{
    std::vector<Vec3> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t") != std::string::npos) {
            out.push_back(parse_vec3(key, item));
        }
    }
    return out;
}

template <class T>
void read(const boost::property_tree::ptree& pt, const std::string& key, T& target)
{
    const auto node = pt.get_optional<std::string>(key);
    if (!node) {
        return;
    }
    try {
        target = boost::lexical_cast<T>(*node);
    } catch (const boost::bad_lexical_cast&) {
        throw ConfigError(key + ": cannot parse '" + *node + "'");
    }
}

inline void read_reals(const boost::property_tree::ptree& pt, const std::string& key, std::vector<double>& target)
{
    if (const auto node = pt.get_optional<std::string>(key)) {
        target = parse_reals(key, *node);
    }
}

} // namespace detail

inline void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
    try {
        params.validate();
    } catch (const InvalidParams& e) {
        fail("problem", e.what());
    }
    if (params.a_infty != 1.0) {
        fail("problem.a_infty", "must be 1 (rescale the equation first)");
    }
    try {
        potential.validate(params.N);
    } catch (const InvalidParams& e) {
        fail("potential", e.what());
    }
    try {
        domain.validate();
    } catch (const InvalidParams& e) {
        fail("domain", e.what());
    }
    if (!(r_max > 0.0)) {
        fail("shooting.r_max", "must be positive");
    }
    if (shooting_nodes < 100) {
        fail("shooting.nodes", "must be at least 100");
    }
    for (double e : eps_list) {
        if (!(e > 0.0)) {
            fail("levels.eps_list", "entries must be positive");
        }
    }
    if (rho_list.empty()) {
        fail("interaction.rho_list", "must not be empty");
    }
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
        if (!(rho_list[i] > 0.0) || (i > 0 && !(rho_list[i] > rho_list[i - 1]))) {
            fail("interaction.rho_list", "must be positive and increasing");
        }
    }
    for (double s : s_list) {
        if (!(s >= 0.0 && s <= 1.0)) {
            fail("interaction.s_list", "entries must lie in [0,1]");
        }
    }
    if (!(two_bump_rho > 0.0)) {
        fail("interaction.two_bump_rho", "must be positive");
    }
    if (!(bracket_below >= 0.0) || !(bracket_above >= 0.0)) {
        fail("interaction.bracket_*", "must be nonnegative");
    }
    if (!(rho > 0.0)) {
        fail("minmax.rho", "must be positive");
    }
    if (!(rho_bar > 0.0)) {
        fail("minmax.rho_bar", "must be positive");
    }
    if (s_count < 2) {
        fail("minmax.s_count", "must be at least 2");
    }
    if (n_azimuth < 1 || n_polar < 0) {
        fail("minmax.n_azimuth/n_polar", "need n_azimuth >= 1 and n_polar >= 0");
    }
    if (!(lattice_spacing > 0.0)) {
        fail("minmax.lattice_spacing", "must be positive");
    }
    if (solver_nodes < 100) {
        fail("solver.nodes", "must be at least 100");
    }
    if (!(gradient_tol > 0.0) || max_iters < 1) {
        fail("solver", "gradient_tol > 0 and max_iters >= 1 required");
    }
    if (z_list.empty()) {
        fail("check_18_24.z_list", "must not be empty");
    }
    if (n_list.empty()) {
        fail("nonexistence.n_list", "must not be empty");
    }
    for (int n : n_list) {
        if (n < 1) {
            fail("nonexistence.n_list", "entries must be positive");
        }
    }
    if (!(quadrature.rel_tol > 0.0) || quadrature.max_level < 1) {
        fail("quadrature", "rel_tol > 0 and max_level >= 1 required");
    }
}

/// Reads an INI file over the defaults. Unknown kinds and malformed numbers
/// raise ConfigError naming the offending key.
inline ExperimentConfig load_config(const std::string& path)
{
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(path, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("cannot read config: ") + e.what());
    }
    ExperimentConfig c;
    using detail::read;
    using detail::read_reals;
    read(pt, "problem.N", c.params.N);
    read(pt, "problem.p", c.params.p);
    read(pt, "problem.eps", c.params.eps);
    read(pt, "problem.a_infty", c.params.a_infty);

    std::string kind = "none";
    read(pt, "potential.kind", kind);
    double amplitude = 0.0;
    double width = 1.0;
    read(pt, "potential.amplitude", amplitude);
    read(pt, "potential.width", width);
    Vec3 center{0.0, 0.0, 0.0};
    if (const auto v = pt.get_optional<std::string>("potential.center")) {
        center = detail::parse_vec3("potential.center", *v);
    }
    if (kind == "none") {
        c.potential = PotentialSpec::constant();
    } else if (kind == "gaussian") {
        c.potential = PotentialSpec::gaussian(amplitude, width, center);
    } else if (kind == "compact_bump") {
        c.potential = PotentialSpec::compact_bump(amplitude, width, center);
    } else if (kind == "tabulated") {
        std::vector<double> r;
        std::vector<double> a;
        read_reals(pt, "potential.table_r", r);
        read_reals(pt, "potential.table_a", a);
        c.potential = PotentialSpec::tabulated(r, a, center);
    } else {
        throw ConfigError("potential.kind: unknown kind '" + kind + "'");
    }

    std::string dkind = "whole";
    read(pt, "domain.kind", dkind);
    double hole = 1.0;
    read(pt, "domain.hole_radius", hole);
    if (dkind == "whole") {
        c.domain = DomainSpec::whole_space();
    } else if (dkind == "exterior") {
        c.domain = DomainSpec::exterior(hole);
    } else {
        throw ConfigError("domain.kind: unknown kind '" + dkind + "'");
    }

    read(pt, "shooting.r_max", c.r_max);
    read(pt, "shooting.nodes", c.shooting_nodes);
    read_reals(pt, "levels.eps_list", c.eps_list);
    read_reals(pt, "interaction.rho_list", c.rho_list);
    read(pt, "interaction.two_bump_rho", c.two_bump_rho);
    read_reals(pt, "interaction.s_list", c.s_list);
    read(pt, "interaction.bracket_below", c.bracket_below);
    read(pt, "interaction.bracket_above", c.bracket_above);
    read(pt, "minmax.rho", c.rho);
    read(pt, "minmax.rho_bar", c.rho_bar);
    read(pt, "minmax.s_count", c.s_count);
    read(pt, "minmax.n_azimuth", c.n_azimuth);
    read(pt, "minmax.n_polar", c.n_polar);
    read(pt, "minmax.lattice_spacing", c.lattice_spacing);
    read_reals(pt, "minmax.barycenter_rho_list", c.barycenter_rho_list);
    read(pt, "solver.nodes", c.solver_nodes);
    read(pt, "solver.gradient_tol", c.gradient_tol);
    read(pt, "solver.max_iters", c.max_iters);
    if (const auto v = pt.get_optional<std::string>("check_18_24.z_list")) {
        c.z_list = detail::parse_vec3_list("check_18_24.z_list", *v);
    }
    if (const auto v = pt.get_optional<std::string>("nonexistence.n_list")) {
        c.n_list.clear();
        for (double n : detail::parse_reals("nonexistence.n_list", *v)) {
            if (n != std::floor(n)) {
                throw ConfigError("nonexistence.n_list: entries must be integers");
            }
            c.n_list.push_back(static_cast<int>(n));
        }
    }
    read(pt, "quadrature.rel_tol", c.quadrature.rel_tol);
    read(pt, "quadrature.fail_tol", c.quadrature.fail_tol);
    read(pt, "quadrature.max_level", c.quadrature.max_level);
    read(pt, "quadrature.truncation", c.quadrature.truncation);
    read(pt, "output.dir", c.output_dir);
    c.validate();
    return c;
}

} // namespace critbound

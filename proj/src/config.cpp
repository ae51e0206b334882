#include "susy2d/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace susy2d {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"chart", {"kind", "d", "beta"}},
        {"superpotential",
         {"superpotential", "m", "hbar", "alpha", "delta", "d", "kappa", "c1", "c2", "c3", "c4", "omega"}},
        {"grid", {"n1", "n2", "q1min", "q1max", "q2min", "q2max", "stencil_order"}},
        {"tolerances", {"adjointness", "nilpotency", "nilpotency_dag", "block_leakage", "norm_gap", "residual", "scale"}},
        {"spectrum", {"k", "k_fermionic", "cover", "pair_tol", "solver_tol", "max_iter"}},
        {"zero_modes", {"sectors"}},
        {"limit_sweep", {"mode", "betas", "ds", "window_lo", "window_hi", "samples"}},
        {"run", {"seed", "trials"}},
    };
    return keys;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + s + "' is not a finite decimal");
    }
}

long long to_int(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + s + "' is not an integer");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(to_double(key, p));
    }
    if (out.empty()) throw ConfigError(key + ": empty sequence");
    return out;
}

void apply_override(pt::ptree& tree, const std::string& ov) {
    auto eq = ov.find('=');
    auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override '" + ov + "' is not of the form section.key=value");
    std::string path = boost::trim_copy(ov.substr(0, eq));
    tree.put(pt::ptree::path_type(path, '.'), boost::trim_copy(ov.substr(eq + 1)));
}

RunConfig from_tree(const pt::ptree& tree) {
    for (const auto& [sec, body] : tree) {
        auto it = known_keys().find(sec);
        if (it == known_keys().end()) throw ConfigError("unknown section [" + sec + "]");
        if (!body.data().empty()) throw ConfigError("key '" + sec + "' outside a section");
        for (const auto& [key, _] : body)
            if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + sec + "]");
    }
    auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
        auto s = tree.get_child_optional(pt::ptree::path_type(sec, '.'));
        if (!s) return std::nullopt;
        auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!v) return std::nullopt;
        return boost::trim_copy(*v);
    };
    auto num = [&](const std::string& sec, const std::string& key, double& out) {
        if (auto v = get(sec, key)) out = to_double(sec + "." + key, *v);
    };
    auto integer = [&](const std::string& sec, const std::string& key, auto& out) {
        if (auto v = get(sec, key)) out = static_cast<std::remove_reference_t<decltype(out)>>(to_int(sec + "." + key, *v));
    };

    RunConfig c;
    std::string kind = get("chart", "kind").value_or("elliptic-trig");
    try {
        c.chart.kind = chart_kind_from_name(kind);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("chart.kind: ") + e.what());
    }
    c.chart.d = 1.0;
    c.chart.beta = 0.0;
    auto chart_d = get("chart", "d"), sp_d = get("superpotential", "d");
    if (chart_d) c.chart.d = to_double("chart.d", *chart_d);
    num("chart", "beta", c.chart.beta);

    c.superpotential = get("superpotential", "superpotential").value_or("two-center-simple");
    static const std::set<std::string> kinds = {"two-center-simple", "two-center-general", "kepler-polar",
                                                "kepler-parabolic", "oscillator", "zero"};
    if (!kinds.count(c.superpotential)) throw ConfigError("unknown superpotential '" + c.superpotential + "'");
    num("superpotential", "m", c.params.m);
    num("superpotential", "hbar", c.params.hbar);
    num("superpotential", "alpha", c.params.alpha);
    num("superpotential", "delta", c.params.delta);
    c.params.d = c.chart.d;
    if (sp_d) {
        c.params.d = to_double("superpotential.d", *sp_d);
        if (!chart_d) c.chart.d = c.params.d;
        else if (c.params.d != c.chart.d) throw ConfigError("superpotential.d differs from chart.d");
    }
    num("superpotential", "kappa", c.consts.kappa);
    num("superpotential", "c1", c.consts.c1);
    num("superpotential", "c2", c.consts.c2);
    num("superpotential", "c3", c.consts.c3);
    num("superpotential", "c4", c.consts.c4);
    num("superpotential", "omega", c.omega);
    try {
        c.params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("superpotential: ") + e.what());
    }
    if (c.chart.is_elliptic() && !(c.chart.d > 0.0)) throw ConfigError("chart.d must be > 0");
    if (!(c.omega > 0.0)) throw ConfigError("superpotential.omega must be > 0");

    c.bounds = default_bounds(c.chart);
    num("grid", "q1min", c.bounds.q1min);
    num("grid", "q1max", c.bounds.q1max);
    num("grid", "q2min", c.bounds.q2min);
    num("grid", "q2max", c.bounds.q2max);
    integer("grid", "n1", c.n1);
    integer("grid", "n2", c.n2);
    integer("grid", "stencil_order", c.stencil_order);
    if (c.n1 > 128 || c.n2 > 128 || c.n1 < 8 || c.n2 < 8) throw ConfigError("grid: n1, n2 must lie in [8, 128]");
    if (c.stencil_order != 2 && c.stencil_order != 4 && c.stencil_order != 5)
        throw ConfigError("grid.stencil_order must be 2, 4 or 5");

    num("tolerances", "adjointness", c.tol.adjointness);
    num("tolerances", "nilpotency", c.tol.nilpotency);
    num("tolerances", "nilpotency_dag", c.tol.nilpotency_dag);
    num("tolerances", "block_leakage", c.tol.block_leakage);
    num("tolerances", "norm_gap", c.tol.norm_gap);
    num("tolerances", "residual", c.tol.residual);
    num("tolerances", "scale", c.tol_scale);
    if (!(c.tol_scale > 0.0)) throw ConfigError("tolerances.scale must be > 0");

    integer("spectrum", "k", c.k);
    integer("spectrum", "k_fermionic", c.k_fermionic);
    if (auto v = get("spectrum", "cover")) {
        if (*v == "double") c.double_cover = true;
        else if (*v == "single") c.double_cover = false;
        else throw ConfigError("spectrum.cover must be single or double");
    }
    num("spectrum", "pair_tol", c.pair_tol);
    num("spectrum", "solver_tol", c.solver_tol);
    integer("spectrum", "max_iter", c.max_iter);

    if (auto v = get("zero_modes", "sectors")) {
        c.sectors.clear();
        for (double s : to_list("zero_modes.sectors", *v)) {
            if (s != 0.0 && s != 1.0 && s != 2.0) throw ConfigError("zero_modes.sectors: sector must be 0, 1 or 2");
            c.sectors.push_back(int(s));
        }
    }

    c.mode = get("limit_sweep", "mode").value_or("polar");
    if (c.mode != "polar" && c.mode != "parabolic") throw ConfigError("limit_sweep.mode must be polar or parabolic");
    if (auto v = get("limit_sweep", "betas")) c.betas = to_list("limit_sweep.betas", *v);
    if (auto v = get("limit_sweep", "ds")) c.ds = to_list("limit_sweep.ds", *v);
    num("limit_sweep", "window_lo", c.window_lo);
    num("limit_sweep", "window_hi", c.window_hi);
    integer("limit_sweep", "samples", c.samples);
    if (c.samples < 4) throw ConfigError("limit_sweep.samples must be >= 4");

    integer("run", "trials", c.trials);
    if (c.trials < 1) throw ConfigError("run.trials must be >= 1");
    if (auto v = get("run", "seed")) {
        long long s = to_int("run.seed", *v);
        if (s < 0) throw ConfigError("run.seed must be >= 0");
        c.seed = std::uint64_t(s);
    }
    return c;
}

}  // namespace

Bounds default_bounds(const Chart& chart) {
    const double tau = 2.0 * std::numbers::pi;
    switch (chart.kind) {
        case ChartKind::Cartesian: return {-6.0, 6.0, -6.0, 6.0};
        case ChartKind::Polar: return {0.0, 6.0, 0.0, tau};
        case ChartKind::Parabolic: return {-3.0, 3.0, 0.1, 3.0};
        case ChartKind::EllipticAlgebraic: return {1.05 * chart.d, 4.0 * chart.d, -0.95 * chart.d, 0.95 * chart.d};
        case ChartKind::EllipticTrig: return {chart.beta - 2.25, chart.beta + 2.25, 0.0, tau};
    }
    return {};
}

RunConfig parse_config_text(const std::string& ini, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    std::istringstream is(ini);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& ov : overrides) apply_override(tree, ov);
    return from_tree(tree);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides);
}

std::shared_ptr<const Grid> make_grid(const RunConfig& cfg) {
    return std::make_shared<const Grid>(build_grid(cfg.chart, cfg.bounds, cfg.n1, cfg.n2));
}

Superpotential make_superpotential(const RunConfig& cfg) {
    const std::string& s = cfg.superpotential;
    if (s == "two-center-simple") return two_center_simple(cfg.chart, cfg.params);
    if (s == "two-center-general") return two_center_general(cfg.chart, cfg.params, cfg.consts);
    if (s == "kepler-polar") return kepler_polar(cfg.chart, cfg.params);
    if (s == "kepler-parabolic") return kepler_parabolic(cfg.chart, cfg.params);
    if (s == "oscillator") return oscillator(cfg.chart, cfg.params, cfg.omega);
    return zero_superpotential(cfg.chart, cfg.params);
}

}  // namespace susy2d

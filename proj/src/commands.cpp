#include "susy2d/commands.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "susy2d/analytics.hpp"
#include "susy2d/bessel.hpp"
#include "susy2d/operators.hpp"
#include "susy2d/spectra.hpp"

namespace susy2d {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json base(const std::string& command) { return json{{"schema", 1}, {"command", command}}; }

}  // namespace

json grid_json(const Grid& g) {
    return {{"chart", chart_kind_name(g.chart.kind)},
            {"d", g.chart.d},
            {"beta", g.chart.beta},
            {"n1", g.n1},
            {"n2", g.n2},
            {"q1min", g.bounds.q1min},
            {"q1max", g.bounds.q1max},
            {"q2min", g.bounds.q2min},
            {"q2max", g.bounds.q2max},
            {"periodic2", g.periodic2},
            {"seam", g.seam},
            {"cover", g.cover}};
}

json params_json(const RunConfig& cfg) {
    const PhysicalParams& p = cfg.params;
    json j{{"superpotential", cfg.superpotential}, {"m", p.m}, {"hbar", p.hbar}, {"alpha", p.alpha},
           {"delta", p.delta}, {"d", p.d}};
    if (cfg.superpotential == "two-center-general")
        j["constants"] = {{"kappa", cfg.consts.kappa}, {"c1", cfg.consts.c1}, {"c2", cfg.consts.c2},
                          {"c3", cfg.consts.c3}, {"c4", cfg.consts.c4}};
    if (cfg.superpotential == "oscillator") j["omega"] = cfg.omega;
    return j;
}

CommandResult cmd_verify_algebra(const RunConfig& cfg) {
    auto grid = make_grid(cfg);
    Superpotential W = make_superpotential(cfg);
    DiscretizationOptions disc;
    disc.stencil_order = cfg.stencil_order;
    SuperchargePair qp = supercharges(W, grid, disc);
    AlgebraReport r = algebra_report(qp.Q, qp.Qdag, cfg.trials, cfg.seed);
    const double s = cfg.tol_scale;
    json tol{{"adjointness", cfg.tol.adjointness * s},
             {"nilpotency", cfg.tol.nilpotency * s},
             {"nilpotency_dag", cfg.tol.nilpotency_dag * s},
             {"block_leakage", cfg.tol.block_leakage * s}};
    bool pass = r.adjointness <= cfg.tol.adjointness * s && r.nilpotency <= cfg.tol.nilpotency * s &&
                r.nilpotency_dag <= cfg.tol.nilpotency_dag * s && r.block_leakage <= cfg.tol.block_leakage * s;
    json j = base("verify-algebra");
    j["adjointness"] = r.adjointness;
    j["nilpotency"] = r.nilpotency;
    j["nilpotency_dag"] = r.nilpotency_dag;
    j["block_leakage"] = r.block_leakage;
    j["tolerances"] = tol;
    j["pass"] = pass;
    j["grid"] = grid_json(*grid);
    j["params"] = params_json(cfg);
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    std::ostringstream msg;
    msg << "verify-algebra: adjointness " << r.adjointness << ", nilpotency " << r.nilpotency << ", nilpotency_dag "
        << r.nilpotency_dag << ", block_leakage " << r.block_leakage << (pass ? " (pass)" : " (FAIL)");
    return {pass ? 0 : 1, dump(j), msg.str()};
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
    if (cfg.k < 1 || cfg.k > 40) return {2, "", "spectrum: k must lie in [1, 40]"};
    if (cfg.k_fermionic < 0 || cfg.k_fermionic > 40) return {2, "", "spectrum: k_fermionic must lie in [0, 40]"};
    auto grid = make_grid(cfg);
    Superpotential W = make_superpotential(cfg);
    SpectrumOptions opt;
    opt.k = cfg.k;
    opt.k_fermionic = cfg.k_fermionic;
    opt.disc.stencil_order = cfg.stencil_order;
    opt.double_cover = cfg.double_cover;
    opt.pair_tol = cfg.pair_tol * cfg.tol_scale;
    opt.solver.tol = cfg.solver_tol;
    opt.solver.max_iter = cfg.max_iter;
    opt.solver.seed = cfg.seed;
    SpectrumReport rep = compute_spectrum(W, grid, opt);
    PairingSummary ps = pairing_report(rep, opt.pair_tol);
    json j = base("spectrum");
    j.update(spectrum_json(rep));
    j["pairing_complete"] = ps.complete();
    j["unmatched"] = json::array();
    for (const auto& u : ps.unmatched) j["unmatched"].push_back({{"value", u.value}, {"class", seam_class_name(u.cls)}});
    j["pair_tol"] = opt.pair_tol;
    j["grid"] = grid_json(*grid);
    j["params"] = params_json(cfg);
    j["cover"] = cfg.double_cover ? "double" : "single";
    bool ok = ps.complete() && rep.converged;
    std::ostringstream msg;
    msg << "spectrum: zero_modes [" << rep.zero_modes[0] << ", " << rep.zero_modes[1] << ", " << rep.zero_modes[2]
        << "], pairing " << (ps.complete() ? "complete" : "incomplete") << (rep.converged ? "" : ", not converged");
    return {ok ? 0 : 1, dump(j), msg.str()};
}

CommandResult cmd_zero_modes(const RunConfig& cfg) {
    if (!cfg.chart.is_elliptic()) return {2, "", "zero-modes: needs an elliptic or elliptic-trig chart"};
    if (cfg.superpotential != "two-center-simple")
        return {2, "", "zero-modes: closed forms exist for two-center-simple only"};
    auto grid = make_grid(cfg);
    DiscretizationOptions disc;
    disc.stencil_order = cfg.stencil_order;
    const double gap_tol = cfg.tol.norm_gap * cfg.tol_scale, res_tol = cfg.tol.residual * cfg.tol_scale;
    json j = base("zero-modes");
    j["states"] = json::array();
    bool pass = true;
    for (int sector : cfg.sectors) {
        ClosedFormState st = sector == 1 ? fermionic_zero_mode(cfg.params, grid->chart)
                                         : bosonic_zero_mode(cfg.params, sector, grid->chart);
        json e{{"sector", sector}, {"name", st.name}, {"normalizable", st.normalizable},
               {"class", seam_class_name(st.cover_class)}};
        if (st.normalizable) {
            double nb = norm_bessel(cfg.params, sector);
            QuadratureResult nq = norm_quadrature(st);
            double gap = std::abs(nq.value - nb) / nb;
            ZeroModeResidual zr = zero_mode_residual(st, grid, disc);
            e["norm2_bessel"] = nb;
            e["norm2_quadrature"] = nq.value;
            e["quadrature_error_estimate"] = nq.error_estimate;
            e["quadrature_xi_max"] = nq.s_max;
            e["relative_gap"] = gap;
            e["residual_q"] = zr.q;
            e["residual_qdag"] = zr.qdag;
            e["interior_margin"] = zr.margin;
            bool ok = gap <= gap_tol && zr.q <= res_tol && zr.qdag <= res_tol && nq.converged;
            e["pass"] = ok;
            pass = pass && ok;
        } else {
            e["norm2_bessel"] = nullptr;
            e["norm2_quadrature"] = nullptr;
            e["note"] = "not normalizable";
        }
        j["states"].push_back(e);
    }
    j["tolerances"] = {{"norm_gap", gap_tol}, {"residual", res_tol}};
    j["pass"] = pass;
    j["grid"] = grid_json(*grid);
    j["params"] = params_json(cfg);
    return {pass ? 0 : 1, dump(j), std::string("zero-modes: ") + (pass ? "pass" : "FAIL")};
}

CommandResult cmd_limit_sweep(const RunConfig& cfg) {
    std::vector<LimitSweepRow> rows;
    std::ostringstream msg;
    if (cfg.mode == "polar") {
        if (cfg.betas.empty()) return {2, "", "limit-sweep: empty beta sequence"};
        PolarWindow w;
        if (cfg.window_lo > 0.0) w.rmin = cfg.window_lo;
        if (cfg.window_hi > 0.0) w.rmax = cfg.window_hi;
        w.samples = cfg.samples;
        rows = polar_limit_sweep(cfg.params, cfg.betas, w);
        msg << "limit-sweep polar: last N^2 " << rows.back().norm_value << " (limit "
            << kepler_norm2(cfg.params, cfg.params.alpha_tilde()) << ")";
        if (rows.size() >= 2) msg << ", fermionic slope/2pi " << fermion_log_slope(rows, 3) / (2.0 * std::numbers::pi);
    } else {
        if (cfg.ds.empty()) return {2, "", "limit-sweep: empty d sequence"};
        ParabolicWindow w;
        if (cfg.window_lo > 0.0) w.lo = cfg.window_lo;
        if (cfg.window_hi > 0.0) w.hi = cfg.window_hi;
        w.samples = cfg.samples;
        rows = parabolic_limit_sweep(cfg.params, cfg.ds, w);
        msg << "limit-sweep parabolic: last state distance " << rows.back().state_l2_diff;
    }
    bool ok = strictly_decreasing(rows, &LimitSweepRow::sup_norm_W) &&
              strictly_decreasing(rows, &LimitSweepRow::state_l2_diff);
    msg << (ok ? " (monotone decay)" : " (FAIL: not monotone)");
    return {ok ? 0 : 1, sweep_csv(rows), msg.str()};
}

CommandResult cmd_specfun_test(const RunConfig& cfg) {
    const double tol = 1e-10 * cfg.tol_scale;
    json j = base("specfun-test");
    j["crossover"] = kBesselCrossover;
    double wr = 0.0, ref = 0.0;
    for (int i = 0; i <= 600; ++i) {
        double x = 0.1 * std::pow(300.0, i / 600.0);
        double w = bessel_i0(x) * bessel_k1(x) + bessel_i1(x) * bessel_k0(x);
        wr = std::max(wr, std::abs(w * x - 1.0));
        for (int n = 0; n < 2; ++n) {
            ref = std::max(ref, std::abs(modified_bessel(n, BesselKind::I, x) / std::cyl_bessel_i(double(n), x) - 1.0));
            ref = std::max(ref, std::abs(modified_bessel(n, BesselKind::K, x) / std::cyl_bessel_k(double(n), x) - 1.0));
        }
    }
    bool k_domain = false;
    try {
        bessel_k0(0.0);
    } catch (const std::domain_error&) {
        k_domain = true;
    }
    j["wronskian_max_relative"] = wr;
    j["reference_max_relative"] = ref;
    j["i0_at_0"] = bessel_i0(0.0);
    j["i1_at_0"] = bessel_i1(0.0);
    j["k_rejects_zero"] = k_domain;
    j["tolerance"] = tol;
    bool pass = wr <= tol && ref <= tol && bessel_i0(0.0) == 1.0 && bessel_i1(0.0) == 0.0 && k_domain;
    j["pass"] = pass;
    std::ostringstream msg;
    msg << "specfun-test: wronskian " << wr << ", reference " << ref << (pass ? " (pass)" : " (FAIL)");
    return {pass ? 0 : 1, dump(j), msg.str()};
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    try {
        if (name == "verify-algebra") return cmd_verify_algebra(cfg);
        if (name == "spectrum") return cmd_spectrum(cfg);
        if (name == "zero-modes") return cmd_zero_modes(cfg);
        if (name == "limit-sweep") return cmd_limit_sweep(cfg);
        if (name == "specfun-test") return cmd_specfun_test(cfg);
        return {2, "", "unknown command '" + name + "'"};
    } catch (const ConfigError& e) {
        return {2, "", e.what()};
    } catch (const std::invalid_argument& e) {
        return {2, "", e.what()};
    } catch (const std::domain_error& e) {
        return {2, "", e.what()};
    } catch (const std::exception& e) {
        return {1, "", name + ": " + e.what()};
    }
}

}  // namespace susy2d

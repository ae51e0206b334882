#include "susy2d/superpotential.hpp"

#include <cmath>
#include <stdexcept>

namespace susy2d {

void PhysicalParams::validate() const {
    auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!pos(m)) throw std::invalid_argument("m must be > 0");
    if (!pos(hbar)) throw std::invalid_argument("hbar must be > 0");
    if (!pos(alpha)) throw std::invalid_argument("alpha must be > 0");
    if (!(std::isfinite(delta) && delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("delta must lie in (0, 1]");
    if (!pos(d)) throw std::invalid_argument("d must be > 0");
}

namespace {

void require_chart(const Chart& chart, bool ok, const std::string& who, const std::string& need) {
    if (!ok)
        throw std::invalid_argument(who + ": chart '" + chart_kind_name(chart.kind) + "' does not match, needs " +
                                    need);
}

// derivatives of u(q1) and v(q2) for the two elliptic charts
struct UVJet {
    double u, up, upp, ru;  // ru = sqrt(u^2 - d^2)
    double v, vp, vpp, rv;  // rv = sqrt(d^2 - v^2)
};

UVJet uv_jet(const Chart& chart, Coord q) {
    check_interior(chart, q);
    double d = chart.d;
    UVJet j{};
    if (chart.kind == ChartKind::EllipticAlgebraic) {
        j.u = q.q1;
        j.up = 1.0;
        j.ru = std::sqrt(q.q1 * q.q1 - d * d);
        j.v = q.q2;
        j.vp = 1.0;
        j.rv = std::sqrt(d * d - q.q2 * q.q2);
    } else {
        double s = q.q1 - chart.beta;
        j.u = d * std::cosh(s);
        j.up = d * std::sinh(s);
        j.upp = j.u;
        j.ru = j.up;
        j.v = d * std::cos(q.q2);
        j.vp = -d * std::sin(q.q2);
        j.vpp = -j.v;
        j.rv = std::abs(j.vp);
    }
    return j;
}

}  // namespace

Superpotential two_center_general(const Chart& chart, const PhysicalParams& params,
                                  const TwoCenterConstants& c) {
    params.validate();
    require_chart(chart, chart.is_elliptic(), "two-center superpotential", "elliptic or elliptic-trig");
    if (std::abs(chart.d - params.d) > 1e-14 * params.d)
        throw std::invalid_argument("two-center superpotential: chart d differs from params d");
    Superpotential W;
    W.chart = chart;
    W.params = params;
    bool simple = c.kappa == 0.0 && c.c1 == 0.0 && c.c2 == 0.0 && c.c3 == 0.0 && c.c4 == 0.0;
    W.name = simple ? "two-center-simple" : "two-center-general";
    const double a = 2.0 * params.m * params.alpha / params.hbar;
    const double fu = -a * (1.0 + params.delta);
    const double gv = a * (1.0 - params.delta);
    const double d = chart.d;
    W.jet_fn = [chart, c, fu, gv, d](Coord q) {
        UVJet j = uv_jet(chart, q);
        double F = fu * j.u + c.c3, F1 = fu, F2 = 0.0;
        if (c.kappa != 0.0 || c.c1 != 0.0) {
            double L = std::acosh(j.u / d);
            double A2 = j.ru * j.ru;
            F += 0.5 * c.kappa * L * L + c.c1 * L;
            F1 += (c.kappa * L + c.c1) / j.ru;
            F2 += c.kappa * (1.0 / A2 - L * j.u / (A2 * j.ru)) - c.c1 * j.u / (A2 * j.ru);
        }
        double G = gv * j.v + c.c4, G1 = gv, G2 = 0.0;
        if (c.kappa != 0.0 || c.c2 != 0.0) {
            if (j.rv == 0.0) throw DomainError("two-center-general: arcsin terms are singular at v = +-d");
            double As = std::asin(j.v / d);
            double B2 = j.rv * j.rv;
            G += -0.5 * c.kappa * As * As + c.c2 * As;
            G1 += (-c.kappa * As + c.c2) / j.rv;
            G2 += -c.kappa * (1.0 / B2 + As * j.v / (B2 * j.rv)) + c.c2 * j.v / (B2 * j.rv);
        }
        WJet out;
        out.w = F + G;
        out.w1 = F1 * j.up;
        out.w11 = F2 * j.up * j.up + F1 * j.upp;
        out.w2 = G1 * j.vp;
        out.w22 = G2 * j.vp * j.vp + G1 * j.vpp;
        out.w12 = 0.0;
        return out;
    };
    return W;
}

Superpotential two_center_simple(const Chart& chart, const PhysicalParams& params) {
    return two_center_general(chart, params, TwoCenterConstants{});
}

Superpotential kepler_polar(const Chart& chart, const PhysicalParams& params) {
    params.validate();
    require_chart(chart, chart.kind == ChartKind::Polar, "kepler-polar superpotential", "polar");
    Superpotential W;
    W.chart = chart;
    W.params = params;
    W.name = "kepler-polar";
    const double k = 2.0 * params.m * params.alpha_tilde() / params.hbar;
    W.jet_fn = [chart, k](Coord q) {
        check_interior(chart, q);
        WJet j;
        j.w = -k * q.q1;
        j.w1 = -k;
        return j;
    };
    return W;
}

Superpotential kepler_parabolic(const Chart& chart, const PhysicalParams& params) {
    params.validate();
    require_chart(chart, chart.kind == ChartKind::Parabolic, "kepler-parabolic superpotential", "parabolic");
    Superpotential W;
    W.chart = chart;
    W.params = params;
    W.name = "kepler-parabolic";
    const double k = params.m * params.alpha / params.hbar;
    W.jet_fn = [chart, k](Coord q) {
        check_interior(chart, q);
        WJet j;
        j.w = -k * (q.q1 * q.q1 + q.q2 * q.q2);
        j.w1 = -2.0 * k * q.q1;
        j.w2 = -2.0 * k * q.q2;
        j.w11 = j.w22 = -2.0 * k;
        return j;
    };
    return W;
}

Superpotential oscillator(const Chart& chart, const PhysicalParams& params, double omega) {
    params.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("oscillator: omega must be > 0");
    require_chart(chart, chart.kind == ChartKind::Cartesian || chart.kind == ChartKind::Polar,
                  "oscillator superpotential", "cartesian or polar");
    Superpotential W;
    W.chart = chart;
    W.params = params;
    W.name = "oscillator";
    const double k = 0.5 * params.m * omega;
    W.jet_fn = [chart, k](Coord q) {
        check_interior(chart, q);
        WJet j;
        if (chart.kind == ChartKind::Cartesian) {
            j.w = -k * (q.q1 * q.q1 + q.q2 * q.q2);
            j.w1 = -2.0 * k * q.q1;
            j.w2 = -2.0 * k * q.q2;
            j.w11 = j.w22 = -2.0 * k;
        } else {
            j.w = -k * q.q1 * q.q1;
            j.w1 = -2.0 * k * q.q1;
            j.w11 = -2.0 * k;
        }
        return j;
    };
    return W;
}

Superpotential zero_superpotential(const Chart& chart, const PhysicalParams& params) {
    params.validate();
    Superpotential W;
    W.chart = chart;
    W.params = params;
    W.name = "zero";
    W.jet_fn = [chart](Coord q) {
        check_interior(chart, q);
        return WJet{};
    };
    return W;
}

double two_center_potential(const PhysicalParams& p, double u, double v) {
    return -(p.alpha * (1.0 + p.delta) * u + p.alpha * (1.0 - p.delta) * v) / (u * u - v * v);
}

double laplacian(const Superpotential& W, Coord q) {
    WJet j = W.jet(q);
    return laplace_beltrami(W.chart, q, j.w1, j.w2, j.w11, j.w22);
}

double poisson_residual(const Superpotential& W, Coord q) {
    if (!W.chart.is_elliptic()) throw std::invalid_argument("poisson_residual: needs an elliptic chart");
    Coord uv = elliptic_uv(W.chart, q);
    const PhysicalParams& p = W.params;
    return p.hbar / (2.0 * p.m) * laplacian(W, q) - two_center_potential(p, uv.q1, uv.q2);
}

}  // namespace susy2d

#include "susy2d/geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace susy2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_coord(Coord q) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << q.q1 << ", " << q.q2 << ")";
    return os.str();
}

[[noreturn]] void domain_fail(const Chart& chart, Coord q, const std::string& range) {
    throw DomainError(chart_kind_name(chart.kind) + " chart: point " + fmt_coord(q) +
                      " violates " + range);
}

}  // namespace

std::string chart_kind_name(ChartKind kind) {
    switch (kind) {
        case ChartKind::Cartesian: return "cartesian";
        case ChartKind::Polar: return "polar";
        case ChartKind::Parabolic: return "parabolic";
        case ChartKind::EllipticAlgebraic: return "elliptic";
        case ChartKind::EllipticTrig: return "elliptic-trig";
    }
    return "unknown";
}

ChartKind chart_kind_from_name(const std::string& name) {
    if (name == "cartesian") return ChartKind::Cartesian;
    if (name == "polar") return ChartKind::Polar;
    if (name == "parabolic") return ChartKind::Parabolic;
    if (name == "elliptic") return ChartKind::EllipticAlgebraic;
    if (name == "elliptic-trig") return ChartKind::EllipticTrig;
    throw std::invalid_argument("unknown chart kind '" + name + "'");
}

Chart Chart::elliptic(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("elliptic chart needs d > 0");
    return {ChartKind::EllipticAlgebraic, d, 0.0};
}

Chart Chart::elliptic_trig(double d, double beta) {
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("elliptic-trig chart needs d > 0");
    if (!std::isfinite(beta)) throw std::invalid_argument("elliptic-trig chart needs finite beta");
    return {ChartKind::EllipticTrig, d, beta};
}

void check_interior(const Chart& chart, Coord q) {
    if (!std::isfinite(q.q1) || !std::isfinite(q.q2)) domain_fail(chart, q, "finiteness");
    switch (chart.kind) {
        case ChartKind::Cartesian: return;
        case ChartKind::Polar:
            if (!(q.q1 > 0.0)) domain_fail(chart, q, "r > 0");
            if (q.q2 < 0.0 || q.q2 >= kTwoPi) domain_fail(chart, q, "phi in [0, 2pi)");
            return;
        case ChartKind::Parabolic:
            if (!(q.q2 > 0.0)) domain_fail(chart, q, "xi2 > 0");
            return;
        case ChartKind::EllipticAlgebraic:
            if (!(q.q1 > chart.d)) domain_fail(chart, q, "u > d");
            if (!(std::abs(q.q2) < chart.d)) domain_fail(chart, q, "-d < v < d");
            return;
        case ChartKind::EllipticTrig:
            if (!(q.q1 > chart.beta)) domain_fail(chart, q, "xi > beta");
            if (q.q2 < 0.0 || q.q2 >= kTwoPi) domain_fail(chart, q, "eta in [0, 2pi)");
            return;
    }
}

MetricJet metric_jet(const Chart& chart, Coord q) {
    check_interior(chart, q);
    MetricJet j{};
    switch (chart.kind) {
        case ChartKind::Cartesian:
            j.g11 = j.g22 = 1.0;
            break;
        case ChartKind::Polar: {
            double r = q.q1;
            j.g11 = 1.0;
            j.g22 = r * r;
            j.g22_1 = 2.0 * r;
            j.g22_11 = 2.0;
            break;
        }
        case ChartKind::Parabolic: {
            double a = q.q1, b = q.q2;
            double rho = a * a + b * b;
            j.g11 = j.g22 = rho;
            j.g11_1 = j.g22_1 = 2.0 * a;
            j.g11_2 = j.g22_2 = 2.0 * b;
            j.g11_11 = j.g22_11 = 2.0;
            j.g11_22 = j.g22_22 = 2.0;
            break;
        }
        case ChartKind::EllipticAlgebraic: {
            double u = q.q1, v = q.q2, d2 = chart.d * chart.d;
            double A = u * u - d2;  // > 0
            double B = d2 - v * v;  // > 0
            // g11 = 1 + B/A, g22 = 1 + A/B
            j.g11 = 1.0 + B / A;
            j.g22 = 1.0 + A / B;
            j.g11_1 = -2.0 * u * B / (A * A);
            j.g11_2 = -2.0 * v / A;
            j.g11_11 = 2.0 * B * (3.0 * u * u + d2) / (A * A * A);
            j.g11_12 = 4.0 * u * v / (A * A);
            j.g11_22 = -2.0 / A;
            j.g22_1 = 2.0 * u / B;
            j.g22_2 = 2.0 * v * A / (B * B);
            j.g22_11 = 2.0 / B;
            j.g22_12 = 4.0 * u * v / (B * B);
            j.g22_22 = 2.0 * A * (d2 + 3.0 * v * v) / (B * B * B);
            break;
        }
        case ChartKind::EllipticTrig: {
            double s = q.q1 - chart.beta, eta = q.q2, d2 = chart.d * chart.d;
            double sh = std::sinh(s), sn = std::sin(eta);
            double g = d2 * (sh * sh + sn * sn);
            j.g11 = j.g22 = g;
            j.g11_1 = j.g22_1 = d2 * std::sinh(2.0 * s);
            j.g11_2 = j.g22_2 = d2 * std::sin(2.0 * eta);
            j.g11_11 = j.g22_11 = 2.0 * d2 * std::cosh(2.0 * s);
            j.g11_22 = j.g22_22 = 2.0 * d2 * std::cos(2.0 * eta);
            break;
        }
    }
    return j;
}

MetricData metric(const Chart& chart, Coord q) {
    MetricJet j = metric_jet(chart, q);
    MetricData m{};
    m.g11 = j.g11;
    m.g22 = j.g22;
    m.ginv11 = 1.0 / j.g11;
    m.ginv22 = 1.0 / j.g22;
    m.sqrtg = std::sqrt(j.g11 * j.g22);
    m.e11 = 1.0 / std::sqrt(j.g11);
    m.e22 = 1.0 / std::sqrt(j.g22);
    return m;
}

namespace {

// Christoffel symbols of a diagonal metric and their partial derivatives
struct GammaJet {
    double G[2][2][2];
    double dG[2][2][2][2];  // dG[s][mu][nu][rho] = d_s Gamma^mu_{nu rho}
};

GammaJet gamma_jet(const MetricJet& j) {
    GammaJet out{};
    // derivative tables: dg[a][s] = d_s g_aa, ddg[a][s][t]
    double g[2] = {j.g11, j.g22};
    double dg[2][2] = {{j.g11_1, j.g11_2}, {j.g22_1, j.g22_2}};
    double ddg[2][2][2] = {{{j.g11_11, j.g11_12}, {j.g11_12, j.g11_22}},
                           {{j.g22_11, j.g22_12}, {j.g22_12, j.g22_22}}};
    // Gamma^mu_{nu rho} = sgn * d_k g_aa / (2 g_mumu)
    auto set = [&](int mu, int nu, int rho, double sgn, int a, int k) {
        double val = sgn * dg[a][k] / (2.0 * g[mu]);
        out.G[mu][nu][rho] = out.G[mu][rho][nu] = val;
        for (int s = 0; s < 2; ++s) {
            double dv = sgn * (ddg[a][k][s] * g[mu] - dg[a][k] * dg[mu][s]) / (2.0 * g[mu] * g[mu]);
            out.dG[s][mu][nu][rho] = out.dG[s][mu][rho][nu] = dv;
        }
    };
    set(0, 0, 0, 1.0, 0, 0);
    set(0, 0, 1, 1.0, 0, 1);
    set(0, 1, 1, -1.0, 1, 0);
    set(1, 0, 0, -1.0, 0, 1);
    set(1, 0, 1, 1.0, 1, 0);
    set(1, 1, 1, 1.0, 1, 1);
    return out;
}

}  // namespace

ConnectionData connection(const Chart& chart, Coord q) {
    MetricJet j = metric_jet(chart, q);
    GammaJet gj = gamma_jet(j);
    ConnectionData c{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int e = 0; e < 2; ++e) c.gamma[a][b][e] = gj.G[a][b][e];
    double e1 = 1.0 / std::sqrt(j.g11), e2 = 1.0 / std::sqrt(j.g22);
    c.omega1 = 0.5 * (j.g11 * c.gamma[0][1][1] - j.g22 * c.gamma[1][0][1]) / j.g22 * e1;
    c.omega2 = 0.5 * (j.g11 * c.gamma[0][1][0] - j.g22 * c.gamma[1][0][0]) / j.g11 * e2;
    return c;
}

double curvature_scalar(const Chart& chart, Coord q) {
    MetricJet j = metric_jet(chart, q);
    GammaJet gj = gamma_jet(j);
    const auto& G = gj.G;
    const auto& dG = gj.dG;
    double ginv[2] = {1.0 / j.g11, 1.0 / j.g22};
    double R = 0.0;
    for (int mu = 0; mu < 2; ++mu) {
        int nu = mu;
        double Ric = 0.0;
        for (int r = 0; r < 2; ++r) {
            Ric += dG[r][r][mu][nu] - dG[nu][r][mu][r];
            for (int l = 0; l < 2; ++l) Ric += G[r][r][l] * G[l][mu][nu] - G[r][nu][l] * G[l][mu][r];
        }
        R += ginv[mu] * Ric;
    }
    return R;
}

double laplace_beltrami(const Chart& chart, Coord q, double f1, double f2, double f11, double f22) {
    MetricJet j = metric_jet(chart, q);
    GammaJet gj = gamma_jet(j);
    const auto& G = gj.G;
    return (f11 - G[0][0][0] * f1 - G[1][0][0] * f2) / j.g11 +
           (f22 - G[0][1][1] * f1 - G[1][1][1] * f2) / j.g22;
}

Coord elliptic_uv(const Chart& chart, Coord q) {
    if (chart.kind == ChartKind::EllipticAlgebraic) return q;
    if (chart.kind == ChartKind::EllipticTrig)
        return {chart.d * std::cosh(q.q1 - chart.beta), chart.d * std::cos(q.q2)};
    throw DomainError("elliptic_uv: chart is not elliptic");
}

std::array<double, 2> focal_distances(const Chart& chart, Coord q) {
    if (chart.is_elliptic()) {
        Coord uv = elliptic_uv(chart, q);
        return {uv.q1 - uv.q2, uv.q1 + uv.q2};
    }
    throw DomainError("focal_distances: chart is not elliptic");
}

Point2 to_cartesian(const Chart& chart, Coord q) {
    if (!std::isfinite(q.q1) || !std::isfinite(q.q2)) domain_fail(chart, q, "finiteness");
    switch (chart.kind) {
        case ChartKind::Cartesian: return {q.q1, q.q2};
        case ChartKind::Polar:
            if (q.q1 < 0.0) domain_fail(chart, q, "r >= 0");
            return {q.q1 * std::cos(q.q2), q.q1 * std::sin(q.q2)};
        case ChartKind::Parabolic:
            if (q.q2 < 0.0) domain_fail(chart, q, "xi2 >= 0");
            return {0.5 * (q.q1 * q.q1 - q.q2 * q.q2), q.q1 * q.q2};
        case ChartKind::EllipticAlgebraic: {
            double d = chart.d, u = q.q1, v = q.q2;
            if (u < d) domain_fail(chart, q, "u >= d");
            if (std::abs(v) > d) domain_fail(chart, q, "-d <= v <= d");
            return {u * v / d, std::sqrt(u * u - d * d) * std::sqrt(d * d - v * v) / d};
        }
        case ChartKind::EllipticTrig: {
            double s = q.q1 - chart.beta;
            if (s < 0.0) domain_fail(chart, q, "xi >= beta");
            return {chart.d * std::cosh(s) * std::cos(q.q2), chart.d * std::sinh(s) * std::sin(q.q2)};
        }
    }
    return {};
}

Coord from_cartesian(const Chart& chart, Point2 x) {
    if (!std::isfinite(x.x) || !std::isfinite(x.y)) throw DomainError("from_cartesian: non-finite point");
    auto wrap = [](double a) {
        double w = std::fmod(a, kTwoPi);
        if (w < 0.0) w += kTwoPi;
        if (w >= kTwoPi) w = 0.0;
        return w;
    };
    switch (chart.kind) {
        case ChartKind::Cartesian: return {x.x, x.y};
        case ChartKind::Polar: {
            double r = std::hypot(x.x, x.y);
            if (r == 0.0) throw DegeneratePointError("polar chart: origin is a degenerate point");
            return {r, wrap(std::atan2(x.y, x.x))};
        }
        case ChartKind::Parabolic: {
            double rho = std::hypot(x.x, x.y);
            if (rho == 0.0) throw DegeneratePointError("parabolic chart: origin is a degenerate point");
            double a, b;
            if (x.x >= 0.0) {
                a = std::sqrt(rho + x.x);
                b = std::abs(x.y) / a;
                if (x.y < 0.0) a = -a;
            } else {
                b = std::sqrt(rho - x.x);
                a = x.y / b;
            }
            return {a, b};
        }
        case ChartKind::EllipticAlgebraic: {
            double d = chart.d;
            if (x.y == 0.0)
                throw DegeneratePointError("elliptic chart: point on the focal axis maps to u = d or v = +-d");
            if (x.y < 0.0) throw DomainError("elliptic chart covers the upper half-plane only");
            double r1 = std::hypot(x.x - d, x.y), r2 = std::hypot(x.x + d, x.y);
            return {0.5 * (r1 + r2), 0.5 * (r2 - r1)};
        }
        case ChartKind::EllipticTrig: {
            std::complex<double> w = std::acosh(std::complex<double>(x.x, x.y) / chart.d);
            double s = w.real(), eta = w.imag();
            if (s < 0.0) {
                s = -s;
                eta = -eta;
            }
            if (s == 0.0)
                throw DegeneratePointError("elliptic-trig chart: point on the focal segment maps to xi = beta");
            return {chart.beta + s, wrap(eta)};
        }
    }
    return {};
}

Eigen::Matrix2d jacobian(const Chart& chart, Coord q) {
    check_interior(chart, q);
    Eigen::Matrix2d J;
    switch (chart.kind) {
        case ChartKind::Cartesian: J.setIdentity(); break;
        case ChartKind::Polar: {
            double c = std::cos(q.q2), s = std::sin(q.q2), r = q.q1;
            J << c, -r * s, s, r * c;
            break;
        }
        case ChartKind::Parabolic:
            J << q.q1, -q.q2, q.q2, q.q1;
            break;
        case ChartKind::EllipticAlgebraic: {
            double d = chart.d, u = q.q1, v = q.q2;
            double A = std::sqrt(u * u - d * d), B = std::sqrt(d * d - v * v);
            J << v / d, u / d, u * B / (d * A), -v * A / (d * B);
            break;
        }
        case ChartKind::EllipticTrig: {
            double s = q.q1 - chart.beta, eta = q.q2, d = chart.d;
            double sh = std::sinh(s), ch = std::cosh(s), sn = std::sin(eta), cs = std::cos(eta);
            J << d * sh * cs, -d * ch * sn, d * ch * sn, d * sh * cs;
            break;
        }
    }
    return J;
}

Eigen::Matrix4d spinor_change(const Chart& chart, Coord q) {
    MetricData m = metric(chart, q);
    Eigen::Matrix2d R = jacobian(chart, q);
    R.col(0) *= m.e11;
    R.col(1) *= m.e22;
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S(0, 0) = 1.0;
    S.block<2, 2>(1, 1) = R;
    S(3, 3) = R.determinant() > 0.0 ? 1.0 : -1.0;
    return S;
}

}  // namespace susy2d

#include "susy2d/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "susy2d/bessel.hpp"
#include "susy2d/quadrature.hpp"

namespace susy2d {

namespace {

constexpr double kPi = std::numbers::pi;

// exponent coefficients: bosonic exp(-a u + b v), fermionic exp(-a u - b v)
struct Rates {
    double a, b;
};

Rates rates(const PhysicalParams& p) {
    double k = 2.0 * p.m * p.alpha / (p.hbar * p.hbar);
    return {k * (1.0 + p.delta), k * (1.0 - p.delta)};
}

Eigen::Vector4d slot(int c, double value) {
    Eigen::Vector4d v = Eigen::Vector4d::Zero();
    v[c] = value;
    return v;
}

std::array<double, 2> focal(double d, Coord x) {
    return {std::hypot(x.q1 - d, x.q2), std::hypot(x.q1 + d, x.q2)};
}

void check_sector(int sector) {
    if (sector != 0 && sector != 2) throw std::invalid_argument("bosonic_zero_mode: sector must be 0 or 2");
}

void check_chart(const PhysicalParams& p, const Chart& chart) {
    if (!chart.is_elliptic()) throw std::invalid_argument("zero modes live on elliptic charts");
    if (std::abs(chart.d - p.d) > 1e-14 * p.d) throw std::invalid_argument("zero mode: chart d differs from params d");
}

ClosedFormState bosonic_base(const PhysicalParams& params, int sector, double amplitude) {
    params.validate();
    check_sector(sector);
    ClosedFormState s;
    s.sector = sector;
    s.amplitude = amplitude;
    s.params = params;
    s.normalizable = sector == 0;
    s.cover_class = SeamClass::Physical;
    s.name = sector == 0 ? "bosonic-0" : "bosonic-2";
    Rates r = rates(params);
    int c = sector == 0 ? 0 : 3;
    double sgn = sector == 0 ? 1.0 : -1.0;
    s.uv_value = [r, c, sgn, amplitude](double u, double v) {
        return slot(c, amplitude * std::exp(sgn * (-r.a * u + r.b * v)));
    };
    return s;
}

ClosedFormState fermionic_base(const PhysicalParams& params, double amplitude) {
    params.validate();
    ClosedFormState s;
    s.sector = 1;
    s.amplitude = amplitude;
    s.params = params;
    s.normalizable = true;
    s.cover_class = SeamClass::Twisted;
    s.name = "fermionic";
    Rates r = rates(params);
    double d = params.d;
    s.uv_value = [r, d, amplitude](double u, double v) {
        double q = u * u - v * v;
        if (!(q > 1e-14 * d * d)) throw DegeneratePointError("fermionic zero mode: singular at the foci");
        return slot(2, amplitude * std::exp(-r.a * u - r.b * v) / std::sqrt(q));
    };
    return s;
}

void attach_chart_evaluator(ClosedFormState& s, const Chart& chart) {
    s.frame = StateFrame::Chart;
    s.chart = chart;
    auto f = s.uv_value;
    s.evaluator = [f, chart](Coord q) {
        check_interior(chart, q);
        Coord uv = elliptic_uv(chart, q);
        return f(uv.q1, uv.q2);
    };
}

double trig_sqrtg(double d, double s, double eta) {
    double a = std::sinh(s), b = std::sin(eta);
    return d * d * (a * a + b * b);
}

Eigen::Vector4d value_on_trig(const ClosedFormState& st, double s, double eta) {
    double d = st.params.d;
    if (st.frame == StateFrame::Chart) return st.uv_value(d * std::cosh(s), d * std::cos(eta));
    return st.evaluator({d * std::cosh(s) * std::cos(eta), d * std::sinh(s) * std::sin(eta)});
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", x);
    return buf;
}

}  // namespace

ClosedFormState bosonic_zero_mode(const PhysicalParams& params, int sector, const Chart& chart, double amplitude) {
    check_chart(params, chart);
    ClosedFormState s = bosonic_base(params, sector, amplitude);
    attach_chart_evaluator(s, chart);
    return s;
}

ClosedFormState bosonic_zero_mode(const PhysicalParams& params, int sector, StateFrame frame, double amplitude) {
    ClosedFormState s = bosonic_base(params, sector, amplitude);
    if (frame == StateFrame::Chart) {
        attach_chart_evaluator(s, Chart::elliptic(params.d));
        return s;
    }
    s.frame = StateFrame::Cartesian;
    s.chart = Chart::cartesian();
    double k = 2.0 * params.m * params.alpha / (params.hbar * params.hbar);
    double delta = params.delta, d = params.d;
    // exp(-(2 m alpha r1 + 2 m alpha delta r2)/hbar^2); sector 2 with the opposite exponent and a minus sign
    if (sector == 0)
        s.evaluator = [k, delta, d, amplitude](Coord x) {
            auto [r1, r2] = focal(d, x);
            return slot(0, amplitude * std::exp(-k * (r1 + delta * r2)));
        };
    else
        s.evaluator = [k, delta, d, amplitude](Coord x) {
            auto [r1, r2] = focal(d, x);
            return slot(3, -amplitude * std::exp(k * (r1 + delta * r2)));
        };
    return s;
}

ClosedFormState fermionic_zero_mode(const PhysicalParams& params, const Chart& chart, double amplitude) {
    check_chart(params, chart);
    ClosedFormState s = fermionic_base(params, amplitude);
    attach_chart_evaluator(s, chart);
    return s;
}

ClosedFormState fermionic_zero_mode(const PhysicalParams& params, StateFrame frame, double amplitude) {
    ClosedFormState s = fermionic_base(params, amplitude);
    if (frame == StateFrame::Chart) {
        attach_chart_evaluator(s, Chart::elliptic(params.d));
        return s;
    }
    s.frame = StateFrame::Cartesian;
    s.chart = Chart::cartesian();
    double k = 2.0 * params.m * params.alpha / (params.hbar * params.hbar);
    double delta = params.delta, d = params.d;
    s.evaluator = [k, delta, d, amplitude](Coord x) {
        auto [r1, r2] = focal(d, x);
        if (std::abs(x.q2) <= 1e-14 * d && std::abs(x.q1) <= d)
            throw DegeneratePointError("fermionic zero mode: cartesian frame is singular on the focal segment");
        // upper half-plane branch, equal to S times the chart-frame value
        double p = r1 * r2, q = r1 / r2 + r2 / r1;
        double e = amplitude * std::exp(-k * (delta * r1 + r2)) / (4.0 * d * std::sqrt(p));
        double c1 = std::sqrt(std::max(0.0, 4.0 * d * d / p - q + 2.0));
        double c2 = std::sqrt(std::max(0.0, -4.0 * d * d / p + q + 2.0));
        Eigen::Vector4d out = Eigen::Vector4d::Zero();
        out[1] = (r1 + r2) * c1 * e;
        out[2] = -(r2 - r1) * c2 * e;
        return out;
    };
    return s;
}

ClosedFormState fermionic_first_solution(const PhysicalParams& params, double amplitude) {
    params.validate();
    ClosedFormState s;
    s.sector = 1;
    s.amplitude = amplitude;
    s.params = params;
    s.normalizable = false;
    s.cover_class = SeamClass::Twisted;
    s.name = "fermionic-first";
    Rates r = rates(params);
    double d = params.d;
    s.uv_value = [r, d, amplitude](double u, double v) {
        double q = u * u - v * v;
        if (!(q > 1e-14 * d * d)) throw DegeneratePointError("fermionic solution: singular at the foci");
        return slot(1, amplitude * std::exp(r.a * u + r.b * v) / std::sqrt(q));
    };
    attach_chart_evaluator(s, Chart::elliptic(d));
    return s;
}

double norm_bessel(const PhysicalParams& p, int sector) {
    p.validate();
    double k = 4.0 * p.m * p.alpha * p.d / (p.hbar * p.hbar);
    double xk = k * (1.0 + p.delta), xi = k * (1.0 - p.delta);
    if (sector == 1) return 2.0 * kPi * bessel_k0(xk) * bessel_i0(xi);
    if (sector != 0) throw std::invalid_argument("norm_bessel: sector must be 0 or 1");
    double c = p.hbar * p.hbar / (4.0 * p.m * p.alpha);
    double first = c / (1.0 + p.delta) * bessel_i0(xi) * bessel_k1(xk);
    // hbar^2/(4 m alpha (1 - delta)) I1(xi) = d I1(xi)/xi
    double second = p.d * bessel_i1_over_x(xi) * bessel_k0(xk);
    return 2.0 * kPi * p.d * (first + second);
}

QuadratureResult norm_quadrature(const ClosedFormState& st, const QuadratureOptions& opt) {
    if (!st.normalizable) throw NonNormalizableError("norm_quadrature: state '" + st.name + "' is not normalizable");
    const double d = st.params.d;
    auto integrand = [&](double s, double eta) {
        double s_ = std::max(s, 1e-300);
        return value_on_trig(st, s_, eta).squaredNorm() * trig_sqrtg(d, s_, eta);
    };
    const int neta = 256;
    auto slice_max = [&](double s) {
        double m = 0.0;
        for (int j = 0; j < neta; ++j) m = std::max(m, integrand(s, 2.0 * kPi * (j + 0.5) / neta));
        return m;
    };
    double ds = 0.05, s = ds, peak = 0.0, s_max = -1.0;
    for (; s <= opt.s_limit; s += ds) {
        double m = slice_max(s);
        if (!std::isfinite(m)) throw TruncationError("norm_quadrature: integrand not finite at xi = " + fmt(s));
        peak = std::max(peak, m);
        if (peak > 0.0 && m < opt.decay * peak) {
            s_max = s;
            break;
        }
    }
    if (s_max < 0.0)
        throw TruncationError("norm_quadrature: integrand has not decayed below " + fmt(opt.decay) +
                              " of its peak by xi = " + fmt(opt.s_limit));

    QuadratureResult res;
    res.s_max = s_max;
    int p1 = std::max(8, int(std::ceil(s_max / 0.25))), p2 = 32;
    for (int pass = 0; pass < 5; ++pass) {
        double lo = integrate_2d(integrand, 0.0, s_max, 0.0, 2.0 * kPi, opt.order_low, p1, p2);
        double hi = integrate_2d(integrand, 0.0, s_max, 0.0, 2.0 * kPi, opt.order_high, p1, p2);
        res.value = hi;
        res.error_estimate = std::abs(hi - lo) / std::abs(hi);
        if (res.error_estimate <= opt.target) {
            res.converged = true;
            break;
        }
        p1 *= 2;
        p2 *= 2;
    }
    return res;
}

CVec sample_state(const ClosedFormState& st, const Grid& grid) {
    if (!grid.chart.is_elliptic() || std::abs(grid.chart.d - st.params.d) > 1e-14 * st.params.d)
        throw std::invalid_argument("sample_state: needs an elliptic grid with the state's d");
    if (!st.uv_value) throw std::invalid_argument("sample_state: state has no chart-frame form");
    const int N = grid.size();
    std::array<int, 4> par = seam_parity(grid, st.cover_class);
    CVec out = CVec::Zero(4 * N);
    for (int k = 0; k < N; ++k) {
        Coord uv = elliptic_uv(grid.chart, grid.chart_node(k));
        Eigen::Vector4d v = st.uv_value(uv.q1, uv.q2);
        bool lower = grid.cover && grid.node(k).q1 < grid.chart.beta;
        for (int c = 0; c < 4; ++c) out[c * N + k] = lower ? par[c] * v[c] : v[c];
    }
    return out;
}

ZeroModeResidual zero_mode_residual(const ClosedFormState& st, std::shared_ptr<const Grid> grid,
                                    const DiscretizationOptions& disc, int margin) {
    Superpotential W = two_center_simple(grid->chart, st.params);
    SuperchargePair qp = supercharges(W, grid, disc);
    CVec psi = sample_state(st, *grid);
    CVec a = qp.Q->apply(psi), b = qp.Qdag->apply(psi);
    ZeroModeResidual r;
    r.margin = margin >= 0 ? margin : stencil_reach(disc.stencil_order) + 1;
    const int N = grid->size();
    double na = 0.0, nb = 0.0, np = 0.0;
    for (int k = 0; k < N; ++k) {
        int i = k / grid->n2, j = k % grid->n2;
        bool inner = i >= r.margin && i < grid->n1 - r.margin;
        if (!grid->periodic2) inner = inner && j >= r.margin && j < grid->n2 - r.margin;
        double w = grid->weights[k];
        for (int c = 0; c < 4; ++c) {
            np += w * std::norm(psi[c * N + k]);
            if (!inner) continue;
            na += w * std::norm(a[c * N + k]);
            nb += w * std::norm(b[c * N + k]);
        }
    }
    r.q = std::sqrt(na / np);
    r.qdag = std::sqrt(nb / np);
    return r;
}

double kepler_norm2(const PhysicalParams& p, double charge) {
    double h2 = p.hbar * p.hbar;
    return kPi * h2 * h2 / (8.0 * p.m * p.m * charge * charge);
}

std::vector<LimitSweepRow> polar_limit_sweep(const PhysicalParams& params, const std::vector<double>& betas,
                                             const PolarWindow& win) {
    params.validate();
    if (betas.empty()) throw std::invalid_argument("polar_limit_sweep: empty beta sequence");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] < betas[i - 1])) throw std::invalid_argument("polar_limit_sweep: betas must decrease");
    if (!(win.rmin > 0.0) || !(win.rmax > win.rmin))
        throw std::invalid_argument("polar_limit_sweep: window must be an annulus avoiding r = 0");

    const double at = params.alpha_tilde();
    const double h2 = params.hbar * params.hbar;
    const double kw = 2.0 * params.m * at / params.hbar;  // W target -kw r
    const double ks = 2.0 * params.m * at / h2;           // state exp(-ks r)
    const double nk2 = kepler_norm2(params, at);
    // printed limiting prefactor (2 m at / hbar^2) sqrt(2/pi) against 1/N of the limiting norm
    const double prefactor_check = std::pow(ks * std::sqrt(2.0 / kPi), 2) * nk2;

    std::vector<LimitSweepRow> rows;
    for (double beta : betas) {
        PhysicalParams p = params;
        p.d = 2.0 * std::exp(beta);
        if (!(std::log(win.rmin) > beta))
            throw std::invalid_argument("polar_limit_sweep: window leaves the chart at beta = " + fmt(beta));
        Chart chart = Chart::elliptic_trig(p.d, beta);
        Superpotential W = two_center_simple(chart, p);
        ClosedFormState bos = bosonic_zero_mode(p, 0, chart);
        ClosedFormState fer = fermionic_zero_mode(p, chart);

        LimitSweepRow row;
        row.control = beta;
        row.d = p.d;
        const int n = win.samples;
        for (int i = 0; i <= n; ++i) {
            double r = win.rmin + (win.rmax - win.rmin) * i / n;
            for (int j = 0; j < 2 * n; ++j) {
                double phi = 2.0 * kPi * j / (2 * n);
                double w = W.w({std::log(r), phi});
                row.sup_norm_W = std::max(row.sup_norm_W, std::abs(w + kw * r));
            }
        }
        QuadratureResult nb = norm_quadrature(bos);
        QuadratureResult nf = norm_quadrature(fer);
        row.norm_value = nb.value;
        row.fermion_norm2 = nf.value;
        double ib = 1.0 / std::sqrt(nb.value), ik = 1.0 / std::sqrt(nk2);
        auto diff2 = [&](double r, double phi) {
            double a = bos({std::log(r), phi})[0] * ib;
            double b = std::exp(-ks * r) * ik;
            return (a - b) * (a - b) * r;
        };
        row.state_l2_diff = std::sqrt(integrate_2d(diff2, win.rmin, win.rmax, 0.0, 2.0 * kPi, 16, 8, 16));

        // fermionic limit (1/r) exp(-ks r), both scaled to 1 at the window's inner edge
        double fref = fer({std::log(win.rmin), 0.5 * kPi})[2];
        double tref = std::exp(-ks * win.rmin) / win.rmin;
        for (int i = 0; i <= n; ++i) {
            double r = win.rmin + (win.rmax - win.rmin) * i / n;
            for (int j = 0; j < 2 * n; ++j) {
                double phi = 2.0 * kPi * (j + 0.5) / (2 * n);
                double a = fer({std::log(r), phi})[2] / fref, b = std::exp(-ks * r) / r / tref;
                row.fermion_pointwise = std::max(row.fermion_pointwise, std::abs(a - b) / std::abs(b));
            }
        }
        std::ostringstream fl;
        fl << "fermion_norm2=" << fmt(nf.value) << ";fermion_pointwise=" << fmt(row.fermion_pointwise)
           << ";kepler_norm2=" << fmt(nk2) << ";prefactor_times_norm=" << fmt(prefactor_check);
        if (!nb.converged || !nf.converged) fl << ";quadrature_unconverged";
        rows.push_back(row);
        rows.back().flags = fl.str();
    }
    if (rows.size() >= 2 && strictly_increasing(rows, &LimitSweepRow::fermion_norm2)) rows.back().flags += ";fermion_norm_divergent";
    return rows;
}

std::vector<LimitSweepRow> parabolic_limit_sweep(const PhysicalParams& params, const std::vector<double>& ds,
                                                 const ParabolicWindow& win) {
    params.validate();
    if (ds.empty()) throw std::invalid_argument("parabolic_limit_sweep: empty d sequence");
    for (std::size_t i = 1; i < ds.size(); ++i)
        if (!(ds[i] > ds[i - 1])) throw std::invalid_argument("parabolic_limit_sweep: d must increase");
    if (!(win.lo > 0.0) || !(win.hi > win.lo))
        throw std::invalid_argument("parabolic_limit_sweep: window must satisfy 0 < lo < hi");

    const double h2 = params.hbar * params.hbar;
    const double kw = params.m * params.alpha / params.hbar;  // W target -kw (xi1^2 + xi2^2)
    const double ks = params.m * params.alpha / h2;
    const double nk2 = kepler_norm2(params, params.alpha);
    const double mid = 0.5 * (win.lo + win.hi);

    std::vector<LimitSweepRow> rows;
    for (double d : ds) {
        if (!(d > 0.0) || win.hi * win.hi > d)
            throw std::invalid_argument("parabolic_limit_sweep: window xi2 <= " + fmt(win.hi) +
                                        " is outside the chart image at d = " + fmt(d));
        PhysicalParams p = params;
        p.d = d;
        Chart chart = Chart::elliptic(d);
        Superpotential W = two_center_simple(chart, p);
        Rates rt = rates(p);
        // W at the kept focus (u, v) = (d, d)
        double a = 2.0 * p.m * p.alpha / p.hbar;
        double w_ref = -a * (1.0 + p.delta) * d + a * (1.0 - p.delta) * d;
        auto uv = [d](double x1, double x2) {
            return Coord{std::sqrt(d * d + d * x1 * x1), std::sqrt(d * d - d * x2 * x2)};
        };

        LimitSweepRow row;
        row.control = d;
        row.d = d;
        const int n = win.samples;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double x1 = win.lo + (win.hi - win.lo) * i / n, x2 = win.lo + (win.hi - win.lo) * j / n;
                double w = W.w(uv(x1, x2)) - w_ref;
                row.sup_norm_W = std::max(row.sup_norm_W, std::abs(w + kw * (x1 * x1 + x2 * x2)));
            }

        ClosedFormState bos = bosonic_zero_mode(p, 0, chart);
        QuadratureResult nb = norm_quadrature(bos);
        row.norm_value = nb.value;
        // gauge-shifted state exp((W - w_ref)/hbar) has norm^2 nb * exp(-2 w_ref / hbar)
        double shift = std::exp(-w_ref / p.hbar);
        double ib = 1.0 / (std::sqrt(nb.value) * shift), ik = 1.0 / std::sqrt(nk2);
        auto diff2 = [&](double x1, double x2) {
            Coord q = uv(x1, x2);
            double s = std::exp(-rt.a * q.q1 + rt.b * q.q2) * ib;
            double t = std::exp(-ks * (x1 * x1 + x2 * x2)) * ik;
            return (s - t) * (s - t) * (x1 * x1 + x2 * x2);
        };
        row.state_l2_diff = std::sqrt(integrate_2d(diff2, win.lo, win.hi, win.lo, win.hi, 16, 8, 8));

        // fermionic: limit (xi1^2 + xi2^2)^{-1/2} exp(-ks (xi1^2 - xi2^2)), scaled at the window centre
        ClosedFormState fer = fermionic_zero_mode(p, chart);
        auto fval = [&](double x1, double x2) { return fer(uv(x1, x2))[2]; };
        auto tval = [&](double x1, double x2) {
            return std::exp(-ks * (x1 * x1 - x2 * x2)) / std::sqrt(x1 * x1 + x2 * x2);
        };
        double fref = fval(mid, mid), tref = tval(mid, mid);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double x1 = win.lo + (win.hi - win.lo) * i / n, x2 = win.lo + (win.hi - win.lo) * j / n;
                double fa = fval(x1, x2) / fref, tb = tval(x1, x2) / tref;
                row.fermion_pointwise = std::max(row.fermion_pointwise, std::abs(fa - tb) / std::abs(tb));
            }
        QuadratureResult nf = norm_quadrature(fer);
        row.fermion_norm2 = nf.value / (fref * fref);

        std::ostringstream fl;
        fl << "fermion_norm2_rel=" << fmt(row.fermion_norm2) << ";fermion_pointwise=" << fmt(row.fermion_pointwise)
           << ";kepler_norm2=" << fmt(nk2) << ";w_gauge_shift=" << fmt(w_ref);
        if (!nb.converged || !nf.converged) fl << ";quadrature_unconverged";
        rows.push_back(row);
        rows.back().flags = fl.str();
    }
    if (rows.size() >= 2 && strictly_increasing(rows, &LimitSweepRow::fermion_norm2)) rows.back().flags += ";fermion_norm_divergent";
    return rows;
}

double fermion_log_slope(const std::vector<LimitSweepRow>& rows, int last) {
    int n = int(rows.size());
    int first = last > 0 ? std::max(0, n - last) : 0;
    if (n - first < 2) throw std::invalid_argument("fermion_log_slope: need two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = n - first;
    for (int i = first; i < n; ++i) {
        double x = -std::log(rows[i].d), y = rows[i].fermion_norm2;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

bool strictly_decreasing(const std::vector<LimitSweepRow>& rows, double LimitSweepRow::*col, int last) {
    int n = int(rows.size());
    int first = last > 0 ? std::max(0, n - last) : 0;
    for (int i = first + 1; i < n; ++i)
        if (!(rows[i].*col < rows[i - 1].*col)) return false;
    return true;
}

bool strictly_increasing(const std::vector<LimitSweepRow>& rows, double LimitSweepRow::*col, int last) {
    int n = int(rows.size());
    int first = last > 0 ? std::max(0, n - last) : 0;
    for (int i = first + 1; i < n; ++i)
        if (!(rows[i].*col > rows[i - 1].*col)) return false;
    return true;
}

std::string sweep_csv(const std::vector<LimitSweepRow>& rows) {
    std::ostringstream os;
    os << "control,sup_norm_W,state_l2_diff,norm_value,flags\n";
    for (const auto& r : rows)
        os << fmt(r.control) << ',' << fmt(r.sup_norm_W) << ',' << fmt(r.state_l2_diff) << ',' << fmt(r.norm_value)
           << ',' << r.flags << '\n';
    return os.str();
}

}  // namespace susy2d

#include "susy2d/explicit_blocks.hpp"

#include <cmath>
#include <numbers>

namespace susy2d {

namespace {

void need_chart(const Superpotential& W, ChartKind k, const std::string& family) {
    if (W.chart.kind != k)
        throw std::invalid_argument("explicit block family '" + family + "' is written in " + chart_kind_name(k) +
                                    " coordinates, superpotential uses " + chart_kind_name(W.chart.kind));
}

// -hbar^2/(2m) times the Laplace-Beltrami operator
BlockCoeffs kinetic(const Chart& chart, Coord q, double scale) {
    MetricData md = metric(chart, q);
    ConnectionData cd = connection(chart, q);
    const auto& G = cd.gamma;
    BlockCoeffs c;
    c.c11 = -scale * md.ginv11;
    c.c22 = -scale * md.ginv22;
    c.c1 = scale * (md.ginv11 * G[0][0][0] + md.ginv22 * G[0][1][1]);
    c.c2 = scale * (md.ginv11 * G[1][0][0] + md.ginv22 * G[1][1][1]);
    return c;
}

int sign_of(const std::string& block) {
    if (block == "H0" || block == "H11" || block == "H12") return 1;
    return -1;
}

bool is_diag_fermionic(const std::string& b) { return b == "H11" || b == "H22"; }

}  // namespace

std::array<int, 2> block_components(const std::string& block) {
    if (block == "H0") return {0, 0};
    if (block == "H11") return {1, 1};
    if (block == "H12") return {1, 2};
    if (block == "H21") return {2, 1};
    if (block == "H22") return {2, 2};
    if (block == "H2") return {3, 3};
    throw std::invalid_argument("unknown block '" + block + "' (H0, H2, H11, H22, H12, H21)");
}

ExplicitBlock explicit_block(const ExplicitSpec& spec, const Superpotential& W) {
    auto comps = block_components(spec.block);
    ExplicitBlock B;
    B.name = spec.family + ":" + spec.block + (spec.corrected ? ":corrected" : "");
    B.out = comps[0];
    B.in = comps[1];
    const PhysicalParams p = W.params;
    const double m = p.m, hb = p.hbar;
    const int s = sign_of(spec.block);
    const std::string& b = spec.block;
    const bool corr = spec.corrected;
    const Chart chart = W.chart;

    if (spec.family == "elliptic" || spec.family == "polar" || spec.family == "parabolic") {
        ChartKind k = spec.family == "elliptic" ? ChartKind::EllipticAlgebraic
                      : spec.family == "polar"  ? ChartKind::Polar
                                                : ChartKind::Parabolic;
        need_chart(W, k, spec.family);
        if (is_diag_fermionic(b))
            throw UnsupportedBlockError("block " + spec.family + ":" + b +
                                        " contains the undefined symbol Box W; only the composed operator is "
                                        "available (concrete two-center and Kepler instances are supported)");
        if (b == "H0" || b == "H2") {
            B.coeffs = [=](Coord q) {
                BlockCoeffs c = kinetic(chart, q, hb * hb / (2.0 * m));
                MetricData md = metric(chart, q);
                WJet j = W.jet(q);
                double lapW = laplace_beltrami(chart, q, j.w1, j.w2, j.w11, j.w22);
                c.c0 = (md.ginv11 * j.w1 * j.w1 + md.ginv22 * j.w2 * j.w2 + s * hb * lapW) / (2.0 * m);
                return c;
            };
            return B;
        }
        if (k == ChartKind::EllipticAlgebraic) {
            const double d = chart.d;
            B.coeffs = [=](Coord q) {
                check_interior(chart, q);
                double u = q.q1, v = q.q2, P = u * u - v * v;
                WJet j = W.jet(q);
                double pref = hb * std::sqrt((u * u - d * d) * (d * d - v * v)) / (m * P * P);
                BlockCoeffs c;
                c.c2 = s * pref * hb * u;
                c.c1 = s * pref * hb * v;
                c.c0 = pref * (u * j.w2 - v * j.w1 - P * j.w12);
                return c;
            };
        } else if (k == ChartKind::Polar) {
            B.coeffs = [=](Coord q) {
                check_interior(chart, q);
                double r = q.q1;
                WJet j = W.jet(q);
                double pref = hb / (m * r * r);
                double mixed = corr ? r : 0.5 * r * r;
                BlockCoeffs c;
                c.c2 = s * pref * hb;
                c.c0 = pref * (j.w2 - mixed * j.w12);
                return c;
            };
        } else {
            B.coeffs = [=](Coord q) {
                check_interior(chart, q);
                double a = q.q1, bb = q.q2, rho = a * a + bb * bb;
                WJet j = W.jet(q);
                double pref = hb / (m * rho * rho);
                BlockCoeffs c;
                c.c2 = s * pref * hb * a;
                c.c1 = -s * pref * hb * bb;
                c.c0 = pref * (bb * j.w1 + a * j.w2 - rho * j.w12);
                return c;
            };
        }
        return B;
    }

    if (spec.family == "two-center") {
        need_chart(W, ChartKind::EllipticAlgebraic, spec.family);
        const double d = chart.d, al = p.alpha, de = p.delta;
        if (b == "H12" || b == "H21") {
            B.coeffs = [=](Coord q) {
                check_interior(chart, q);
                double u = q.q1, v = q.q2, P = u * u - v * v;
                double pref = std::sqrt((u * u - d * d) * (d * d - v * v)) / (P * P);
                BlockCoeffs c;
                c.c2 = s * pref * hb * hb / m * u;
                c.c1 = s * pref * hb * hb / m * v;
                c.c0 = pref * (2.0 * al * (1.0 - de) * u + 2.0 * al * (1.0 + de) * v);
                return c;
            };
            return B;
        }
        const bool diag1 = is_diag_fermionic(b);
        B.coeffs = [=](Coord q) {
            check_interior(chart, q);
            double u = q.q1, v = q.q2, P = u * u - v * v;
            BlockCoeffs c = kinetic(chart, q, hb * hb / (2.0 * m));
            double mk = corr ? m * m : m;
            double K0 = 4.0 * mk * al * al / (hb * hb) *
                        ((1 + de) * (1 + de) * u * u - (1 - de) * (1 - de) * v * v - 4.0 * d * d * de) / P;
            double src = al * (1.0 + de) * u + al * (1.0 - de) * v;
            double bracket = K0;
            if (!diag1) {
                double Vt = 2.0 * (corr ? m : 1.0) * src / P;
                bracket -= s * Vt;
            } else {
                double Kh = hb * hb * (u * u + v * v - d * d) / (P * P);
                double Ah = (corr ? 2.0 * m : 1.0) * src * (u * u + v * v - 2.0 * d * d) / (P * P);
                bracket += Kh - s * Ah;
            }
            c.c0 = bracket / (2.0 * m);
            return c;
        };
        return B;
    }

    if (spec.family == "kepler-polar") {
        need_chart(W, ChartKind::Polar, spec.family);
        B.coeffs = [=](Coord q) {
            check_interior(chart, q);
            double r = q.q1;
            BlockCoeffs c;
            if (b == "H12" || b == "H21") {
                c.c2 = s * hb * hb / (r * r);
                return c;
            }
            c = kinetic(chart, q, 0.5 * hb * hb);
            c.c0 = 2.0 / (hb * hb) - s / r;
            if (is_diag_fermionic(b)) c.c0 += hb * hb / (2.0 * r * r);
            return c;
        };
        return B;
    }

    if (spec.family == "kepler-parabolic") {
        need_chart(W, ChartKind::Parabolic, spec.family);
        B.coeffs = [=](Coord q) {
            check_interior(chart, q);
            double a = q.q1, bb = q.q2, rho = a * a + bb * bb;
            BlockCoeffs c;
            if (b == "H12" || b == "H21") {
                c.c2 = s * hb * hb / (rho * rho) * a;
                c.c1 = -s * hb * hb / (rho * rho) * bb;
                c.c0 = -4.0 * a * bb / (rho * rho);
                return c;
            }
            c.c11 = c.c22 = -hb * hb / (2.0 * rho);
            c.c0 = 2.0 / (hb * hb);
            if (is_diag_fermionic(b))
                c.c0 += hb * hb / (2.0 * rho * rho) - s * 2.0 * (a * a - bb * bb) / (rho * rho);
            else
                c.c0 -= s * 2.0 / rho;
            return c;
        };
        return B;
    }

    throw std::invalid_argument("unknown explicit block family '" + spec.family + "'");
}

std::vector<int> interior_nodes(const Grid& g, int margin) {
    std::vector<int> out;
    for (int i = margin; i < g.n1 - margin; ++i)
        for (int j = 0; j < g.n2; ++j) {
            if (!g.periodic2 && (j < margin || j >= g.n2 - margin)) continue;
            out.push_back(g.index(i, j));
        }
    return out;
}

std::shared_ptr<const SectorOperator> hamiltonian_explicit(const ExplicitSpec& spec, const Superpotential& W,
                                                           std::shared_ptr<const Grid> grid, int margin) {
    ExplicitBlock B = explicit_block(spec, W);
    const Grid& g = *grid;
    if (W.chart.kind != g.chart.kind) throw std::invalid_argument("hamiltonian_explicit: chart mismatch");
    const int N = g.size();
    static const double d1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    static const double d2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int k : interior_nodes(g, std::max(margin, 2))) {
        int i = k / g.n2, j = k % g.n2;
        BlockCoeffs c = B.coeffs(g.node(k));
        const int row = B.out * N + k;
        trip.emplace_back(row, B.in * N + k, c.c0);
        for (int o = -2; o <= 2; ++o) {
            double a1 = c.c1 * d1[o + 2] / g.h1 + c.c11 * d2[o + 2] / (g.h1 * g.h1);
            double a2 = c.c2 * d1[o + 2] / g.h2 + c.c22 * d2[o + 2] / (g.h2 * g.h2);
            int jj = g.periodic2 ? ((j + o) % g.n2 + g.n2) % g.n2 : j + o;
            if (a1 != 0.0) trip.emplace_back(row, B.in * N + g.index(i + o, j), a1);
            if (a2 != 0.0) trip.emplace_back(row, B.in * N + g.index(i, jj), a2);
        }
    }
    auto M = std::make_shared<CSparse>(4 * N, 4 * N);
    M->setFromTriplets(trip.begin(), trip.end());
    M->makeCompressed();
    BlockPattern pat{};
    pat[B.out][B.in] = true;
    return std::make_shared<SectorOperator>(
        grid, B.name, pat, [M](const CVec& f) { return CVec(*M * f); }, [M]() { return *M; });
}

std::vector<CatalogEntry> explicit_catalog() {
    std::vector<CatalogEntry> out;
    auto add = [&](const std::string& fam, ChartKind k, std::initializer_list<const char*> blocks) {
        for (const char* b : blocks) out.push_back({{fam, b, false}, k});
    };
    add("elliptic", ChartKind::EllipticAlgebraic, {"H0", "H2", "H12", "H21"});
    add("polar", ChartKind::Polar, {"H0", "H2", "H12", "H21"});
    add("parabolic", ChartKind::Parabolic, {"H0", "H2", "H12", "H21"});
    add("two-center", ChartKind::EllipticAlgebraic, {"H0", "H2", "H11", "H22", "H12", "H21"});
    add("kepler-polar", ChartKind::Polar, {"H0", "H2", "H11", "H22", "H12", "H21"});
    add("kepler-parabolic", ChartKind::Parabolic, {"H0", "H2", "H11", "H22", "H12", "H21"});
    return out;
}

namespace {

Superpotential test_superpotential(const Chart& c, const PhysicalParams& p, std::function<WJet(Coord)> f) {
    Superpotential W;
    W.chart = c;
    W.params = p;
    W.name = "oracle-test";
    W.jet_fn = std::move(f);
    return W;
}

}  // namespace

OracleCase oracle_case(const std::string& family) {
    const double pi = std::numbers::pi;
    PhysicalParams p;
    if (family == "elliptic") {
        Chart c = Chart::elliptic(1.0);
        return {c, {1.2, 3.2, -0.8, 0.8}, test_superpotential(c, p, [](Coord q) {
                    WJet j;
                    j.w = -2.0 * q.q1 + 0.5 * q.q2 + 0.3 * q.q1 * q.q2;
                    j.w1 = -2.0 + 0.3 * q.q2;
                    j.w2 = 0.5 + 0.3 * q.q1;
                    j.w12 = 0.3;
                    return j;
                })};
    }
    if (family == "two-center") {
        Chart c = Chart::elliptic(1.0);
        return {c, {1.2, 3.2, -0.8, 0.8}, two_center_simple(c, p)};
    }
    if (family == "polar") {
        Chart c = Chart::polar();
        return {c, {0.5, 3.5, 0.0, 2.0 * pi}, test_superpotential(c, p, [](Coord q) {
                    double r = q.q1, f = q.q2;
                    WJet j;
                    j.w = -r * (1.0 + 0.3 * std::cos(f));
                    j.w1 = -(1.0 + 0.3 * std::cos(f));
                    j.w2 = 0.3 * r * std::sin(f);
                    j.w12 = 0.3 * std::sin(f);
                    j.w22 = 0.3 * r * std::cos(f);
                    return j;
                })};
    }
    if (family == "kepler-polar") {
        Chart c = Chart::polar();
        p.alpha = 2.0 / 3.0;  // scaled form, alpha (1 + delta) = 1
        return {c, {0.5, 3.5, 0.0, 2.0 * pi}, kepler_polar(c, p)};
    }
    if (family == "parabolic") {
        Chart c = Chart::parabolic();
        return {c, {-1.5, 1.5, 0.4, 2.4}, test_superpotential(c, p, [](Coord q) {
                    double a = q.q1, b = q.q2;
                    WJet j;
                    j.w = -(a * a + b * b) / 2.0 + 0.3 * a * b;
                    j.w1 = -a + 0.3 * b;
                    j.w2 = -b + 0.3 * a;
                    j.w11 = -1.0;
                    j.w22 = -1.0;
                    j.w12 = 0.3;
                    return j;
                })};
    }
    if (family == "kepler-parabolic") {
        Chart c = Chart::parabolic();
        return {c, {-1.5, 1.5, 0.4, 2.4}, kepler_parabolic(c, p)};
    }
    throw std::invalid_argument("oracle_case: unknown family '" + family + "'");
}

double oracle_deviation(const ExplicitSpec& spec, int n, int stencil_order) {
    const double pi = std::numbers::pi;
    OracleCase oc = oracle_case(spec.family);
    auto g = std::make_shared<const Grid>(build_grid(oc.chart, oc.bounds, n, n));
    DiscretizationOptions disc;
    disc.stencil_order = stencil_order;
    SuperchargePair qp = supercharges(oc.W, g, disc);
    auto H = hamiltonian_composed(qp.Q, qp.Qdag);
    auto E = hamiltonian_explicit(spec, oc.W, g);
    auto comps = block_components(spec.block);
    const Bounds& b = oc.bounds;
    const int N = g->size();
    CVec f = CVec::Zero(4 * N);
    for (int k = 0; k < N; ++k) {
        Coord q = g->node(k);
        double s1 = (q.q1 - b.q1min) / (b.q1max - b.q1min), s2 = (q.q2 - b.q2min) / (b.q2max - b.q2min);
        double bump = std::pow(std::sin(pi * s1), 4) * (g->periodic2 ? 1.0 : std::pow(std::sin(pi * s2), 4));
        f[comps[1] * N + k] = bump * std::cos(1.3 * q.q1 + 0.7) * (1.0 + 0.5 * std::sin(q.q2 + 0.2));
    }
    CVec a = H->apply(f), x = E->apply(f);
    double dev = 0.0, ref = 0.0;
    for (int k = 0; k < N; ++k) {
        Coord q = g->node(k);
        double s1 = (q.q1 - b.q1min) / (b.q1max - b.q1min), s2 = (q.q2 - b.q2min) / (b.q2max - b.q2min);
        auto inside = [](double s) { return s >= 0.125 && s <= 0.875; };
        if (!inside(s1) || (!g->periodic2 && !inside(s2))) continue;
        dev = std::max(dev, std::abs(a[comps[0] * N + k] - x[comps[0] * N + k]));
        ref = std::max(ref, std::abs(x[comps[0] * N + k]));
    }
    return dev / ref;
}

}  // namespace susy2d

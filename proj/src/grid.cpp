#include "susy2d/grid.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace susy2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void grid_fail(const std::string& msg) { throw std::invalid_argument("build_grid: " + msg); }

bool full_angle(const Bounds& b) { return b.q2min == 0.0 && std::abs(b.q2max - kTwoPi) < 1e-12; }

void check_angle_range(const Bounds& b) {
    if (b.q2min < 0.0 || b.q2max > kTwoPi + 1e-12) grid_fail("angle range must lie in [0, 2pi]");
}

}  // namespace

int Grid::mirror_j(int j) const { return (j + n2 / 2) % n2; }

Grid build_grid(const Chart& chart, const Bounds& b, int n1, int n2) {
    if (n1 < 8 || n2 < 8) grid_fail("grid too coarse, need n1, n2 >= 8");
    for (double x : {b.q1min, b.q1max, b.q2min, b.q2max})
        if (!std::isfinite(x)) grid_fail("non-finite bounds");
    if (!(b.q1max > b.q1min)) grid_fail("non-positive q1 extent");
    if (!(b.q2max > b.q2min)) grid_fail("non-positive q2 extent");

    Grid g;
    g.chart = chart;
    g.n1 = n1;
    g.n2 = n2;
    g.bounds = b;
    switch (chart.kind) {
        case ChartKind::Cartesian: break;
        case ChartKind::Polar:
            if (b.q1min < 0.0) grid_fail("polar needs r >= 0");
            check_angle_range(b);
            g.periodic2 = full_angle(b);
            g.seam = b.q1min == 0.0;
            break;
        case ChartKind::EllipticTrig:
            check_angle_range(b);
            g.periodic2 = full_angle(b);
            if (b.q1min == chart.beta)
                grid_fail("an elliptic-trig edge on the focal segment xi = beta is not supported; use the cover "
                          "xi - beta in (-L, L)");
            if (b.q1min < chart.beta) {
                if (std::abs((b.q1max - chart.beta) + (b.q1min - chart.beta)) > 1e-12 * (b.q1max - b.q1min))
                    grid_fail("elliptic-trig cover needs xi - beta symmetric about 0");
                if (!g.periodic2) grid_fail("elliptic-trig cover needs the full angular range");
                if (n1 % 2 != 0) grid_fail("elliptic-trig cover needs even n1 (no node on the focal segment)");
                if (n2 % 2 != 0) grid_fail("elliptic-trig cover needs even n2");
                g.cover = true;
            }
            break;
        case ChartKind::Parabolic:
            if (b.q2min <= 0.0) grid_fail("parabolic bounds touch the degenerate locus xi2 = 0");
            break;
        case ChartKind::EllipticAlgebraic:
            if (b.q1min <= chart.d) grid_fail("elliptic bounds touch the degenerate locus u = d");
            if (b.q2min <= -chart.d || b.q2max >= chart.d)
                grid_fail("elliptic bounds touch the degenerate locus v = +-d");
            break;
    }
    if (g.seam && !g.periodic2) grid_fail("an edge on the degenerate locus needs the full angular range");
    if (g.seam && n2 % 2 != 0) grid_fail("an edge on the degenerate locus needs even n2");
    if (g.cover) g.bounds.q1min = 2.0 * chart.beta - b.q1max;
    if (g.periodic2) g.bounds.q2max = kTwoPi;
    g.h1 = (g.bounds.q1max - g.bounds.q1min) / n1;
    g.h2 = (g.bounds.q2max - g.bounds.q2min) / n2;
    g.weights.resize(g.size());
    for (int k = 0; k < g.size(); ++k) g.weights[k] = metric(chart, g.chart_node(k)).sqrtg * g.h1 * g.h2;
    return g;
}

std::array<int, 4> seam_parity(const Grid& grid, SeamClass cls) {
    std::array<int, 4> p{1, 1, 1, 1};
    if (!grid.seam && !grid.cover) return p;
    // frame continued through r = 0 or the focal segment: e_1 and e_2 both flip
    p = {1, -1, -1, 1};
    if (cls == SeamClass::Twisted)
        for (int& x : p) x = -x;
    return p;
}

Eigen::VectorXd node_weights(const Grid& grid) { return grid.weights; }

SpinorField::SpinorField(std::shared_ptr<const Grid> g, CVec v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != 4 * grid->size()) throw std::invalid_argument("SpinorField: size mismatch");
}

std::array<int, 2> sector_components(int sector) {
    switch (sector) {
        case 0: return {0, 1};
        case 1: return {1, 2};
        case 2: return {3, 1};
    }
    throw std::invalid_argument("sector must be 0, 1 or 2");
}

cplx inner_product(const Grid& grid, const CVec& f, const CVec& g) {
    const int N = grid.size();
    if (f.size() != g.size() || f.size() % N != 0) throw std::invalid_argument("inner_product: shape mismatch");
    const Eigen::VectorXd& w = grid.weights;
    cplx s = 0.0;
    for (int c = 0; c < f.size() / N; ++c)
        for (int k = 0; k < N; ++k) s += std::conj(f[c * N + k]) * g[c * N + k] * w[k];
    return s;
}

cplx inner_product(const SpinorField& f, const SpinorField& g) {
    if (f.grid.get() != g.grid.get()) {
        const Grid &a = *f.grid, &b = *g.grid;
        if (a.n1 != b.n1 || a.n2 != b.n2 || a.chart.kind != b.chart.kind)
            throw std::invalid_argument("inner_product: fields live on different grids");
    }
    return inner_product(*f.grid, f.values, g.values);
}

double weighted_norm(const Grid& grid, const CVec& f) { return std::sqrt(std::abs(inner_product(grid, f, f))); }

CVec smooth_random_field(const Grid& grid, std::uint64_t seed, SeamClass cls, std::array<bool, 3> sector_mask,
                         int modes) {
    const int N = grid.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double L1 = grid.bounds.q1max - grid.bounds.q1min;
    const double L2 = grid.bounds.q2max - grid.bounds.q2min;
    auto par = seam_parity(grid, cls);

    using Basis = std::vector<std::function<double(double)>>;
    Basis odd1, even1;
    for (int k = 1; k <= modes; ++k) {
        odd1.push_back([=](double q) { return std::sin(k * std::numbers::pi * (q - grid.bounds.q1min) / L1); });
        even1.push_back([=](double q) { return std::cos((k - 0.5) * std::numbers::pi * (q - grid.bounds.q1min) / L1); });
    }

    // q2 basis; on a periodic range only modes e^{i l q} with (-1)^l == want (want 0: all)
    auto basis2 = [&](int want) {
        Basis b;
        if (!grid.periodic2) {
            for (int l = 1; l <= modes; ++l)
                b.push_back([=](double q) { return std::sin(l * std::numbers::pi * (q - grid.bounds.q2min) / L2); });
            return b;
        }
        for (int l = 0; (int)b.size() < modes; ++l) {
            for (int cs = 0; cs < 2 && (int)b.size() < modes; ++cs) {
                if (l == 0 && cs == 1) continue;
                int parity = (l % 2 == 0) ? 1 : -1;
                if (want != 0 && parity != want) continue;
                if (cs == 0)
                    b.push_back([=](double q) { return std::cos(l * q); });
                else
                    b.push_back([=](double q) { return std::sin(l * q); });
            }
        }
        return b;
    };

    CVec out = CVec::Zero(4 * N);
    auto add_tensor = [&](int c, const Basis& b1, const Basis& b2) {
        Eigen::MatrixXcd coef(b1.size(), b2.size());
        for (int a = 0; a < coef.rows(); ++a)
            for (int e = 0; e < coef.cols(); ++e) coef(a, e) = cplx(nd(rng), nd(rng));
        Eigen::MatrixXd v1(grid.n1, b1.size()), v2(grid.n2, b2.size());
        for (int i = 0; i < grid.n1; ++i)
            for (std::size_t a = 0; a < b1.size(); ++a) v1(i, a) = b1[a](grid.node(i, 0).q1);
        for (int j = 0; j < grid.n2; ++j)
            for (std::size_t e = 0; e < b2.size(); ++e) v2(j, e) = b2[e](grid.node(0, j).q2);
        Eigen::MatrixXcd vals = v1.cast<cplx>() * coef * v2.transpose().cast<cplx>();
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) out[c * N + grid.index(i, j)] += vals(i, j);
    };
    for (int s = 0; s < 3; ++s) {
        if (!sector_mask[s]) continue;
        auto sc = sector_components(s);
        for (int c = sc[0]; c < sc[0] + sc[1]; ++c) {
            if (!grid.seam) {
                add_tensor(c, odd1, basis2(0));
                continue;
            }
            // smooth through r = 0: odd radial factors carry angular parity -p, even ones +p
            add_tensor(c, odd1, basis2(-par[c]));
            add_tensor(c, even1, basis2(par[c]));
        }
    }
    return out;
}

}  // namespace susy2d

#include "susy2d/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace susy2d {

namespace {

struct Stencil {
    int lo;
    std::vector<double> c;  // already divided by the order's denominator
};

Stencil forward_stencil(int order) {
    if (order == 5) return {-2, {3.0 / 60, -30.0 / 60, -20.0 / 60, 60.0 / 60, -15.0 / 60, 2.0 / 60}};
    if (order == 4) return {-1, {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}};
    if (order == 2) return {0, {-1.5, 2.0, -0.5}};
    throw std::invalid_argument("stencil_order must be 2, 4 or 5");
}

}  // namespace

int stencil_reach(int order) {
    Stencil f = forward_stencil(order);
    return std::max(-f.lo, f.lo + static_cast<int>(f.c.size()) - 1);
}

namespace {

// minus the transpose of the forward stencil
Stencil backward_stencil(int order) {
    Stencil f = forward_stencil(order);
    Stencil b;
    int n = static_cast<int>(f.c.size());
    b.lo = -(f.lo + n - 1);
    b.c.resize(n);
    for (int k = 0; k < n; ++k) b.c[k] = -f.c[n - 1 - k];
    return b;
}

struct Neighbour {
    bool valid = false;
    int k = 0;
    bool crossed = false;  // reflected through the seam
};

Neighbour resolve(const Grid& g, int i, int j, int dir, int off) {
    Neighbour nb;
    if (dir == 1) {
        int ii = i + off;
        if (ii >= g.n1) return nb;
        if (ii < 0) {
            if (!g.seam) return nb;
            nb.valid = true;
            nb.crossed = true;
            nb.k = g.index(-1 - ii, g.mirror_j(j));
            return nb;
        }
        nb.valid = true;
        nb.k = g.index(ii, j);
        return nb;
    }
    int jj = j + off;
    if (g.periodic2) {
        jj = ((jj % g.n2) + g.n2) % g.n2;
    } else if (jj < 0 || jj >= g.n2) {
        return nb;
    }
    nb.valid = true;
    nb.k = g.index(i, jj);
    return nb;
}

// out_comp += scale * L * D(dir) [R * in_comp], D conjugated by exp(+-W/hbar)
struct Term {
    int out, in;
    int dir;
    bool forward;
    double scale;
    Eigen::VectorXd L, R;
    double ghost_sign;  // parity of the input component times sign flip of R at the seam
};

struct Discretization {
    std::shared_ptr<const Grid> grid;
    Eigen::VectorXd W;  // W / hbar at nodes
    Stencil fwd, bwd;
    std::vector<Term> terms;
    cplx prefactor;
    std::string name;
    BlockPattern pattern{};
};

CVec apply_terms(const Discretization& D, const CVec& f) {
    const Grid& g = *D.grid;
    const int N = g.size();
    if (f.size() != 4 * N) throw std::invalid_argument(D.name + ": field size mismatch");
    CVec out = CVec::Zero(4 * N);
    for (const Term& t : D.terms) {
        const double h = t.dir == 1 ? g.h1 : g.h2;
        const double sgn = t.forward ? 1.0 : -1.0;
        const Stencil& st = t.forward ? D.fwd : D.bwd;
        for (int i = 0; i < g.n1; ++i) {
            for (int j = 0; j < g.n2; ++j) {
                const int k = g.index(i, j);
                cplx acc = 0.0;
                for (std::size_t s = 0; s < st.c.size(); ++s) {
                    Neighbour nb = resolve(g, i, j, t.dir, st.lo + static_cast<int>(s));
                    if (!nb.valid) continue;
                    double w = st.c[s] * std::exp(sgn * (D.W[nb.k] - D.W[k])) / h;
                    if (nb.crossed) w *= t.ghost_sign;
                    acc += w * t.R[nb.k] * f[t.in * N + nb.k];
                }
                out[t.out * N + k] += t.scale * t.L[k] * acc;
            }
        }
    }
    return D.prefactor * out;
}

CSparse assemble_terms(const Discretization& D) {
    const Grid& g = *D.grid;
    const int N = g.size();
    std::vector<Eigen::Triplet<cplx>> trip;
    for (const Term& t : D.terms) {
        const double h = t.dir == 1 ? g.h1 : g.h2;
        const double sgn = t.forward ? 1.0 : -1.0;
        const Stencil& st = t.forward ? D.fwd : D.bwd;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                const int k = g.index(i, j);
                for (std::size_t s = 0; s < st.c.size(); ++s) {
                    Neighbour nb = resolve(g, i, j, t.dir, st.lo + static_cast<int>(s));
                    if (!nb.valid) continue;
                    double w = st.c[s] * std::exp(sgn * (D.W[nb.k] - D.W[k])) / h;
                    if (nb.crossed) w *= t.ghost_sign;
                    trip.emplace_back(t.out * N + k, t.in * N + nb.k,
                                      D.prefactor * (t.scale * t.L[k] * w * t.R[nb.k]));
                }
            }
    }
    CSparse M(4 * N, 4 * N);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

std::shared_ptr<const SectorOperator> make_operator(std::shared_ptr<Discretization> D) {
    return std::make_shared<SectorOperator>(
        D->grid, D->name, D->pattern, [D](const CVec& f) { return apply_terms(*D, f); },
        [D]() { return assemble_terms(*D); });
}

}  // namespace

SectorOperator::SectorOperator(std::shared_ptr<const Grid> grid, std::string name, BlockPattern pattern,
                               ApplyFn apply, AssembleFn assemble)
    : grid_(std::move(grid)),
      name_(std::move(name)),
      pattern_(pattern),
      apply_(std::move(apply)),
      assemble_(std::move(assemble)) {}

CVec SectorOperator::apply(const CVec& f) const { return apply_(f); }

SpinorField SectorOperator::apply(const SpinorField& f) const {
    if (f.grid->size() != grid_->size()) throw std::invalid_argument(name_ + ": field lives on another grid");
    return SpinorField(grid_, apply_(f.values));
}

const CSparse& SectorOperator::assembled() const {
    std::call_once(once_, [this] { matrix_ = assemble_(); });
    return matrix_;
}

SuperchargePair supercharges(const Superpotential& W, std::shared_ptr<const Grid> grid,
                             const DiscretizationOptions& opt) {
    if (!grid) throw std::invalid_argument("supercharges: null grid");
    const Grid& g = *grid;
    if (W.chart.kind != g.chart.kind || W.chart.d != g.chart.d || W.chart.beta != g.chart.beta)
        throw std::invalid_argument("supercharges: superpotential chart '" + chart_kind_name(W.chart.kind) +
                                    "' does not match grid chart '" + chart_kind_name(g.chart.kind) + "'");
    if (g.n1 < 8 || g.n2 < 8) throw std::invalid_argument("supercharges: grid too coarse, need n1, n2 >= 8");
    const double hbar = W.params.hbar;
    const int N = g.size();

    Eigen::VectorXd Wn(N), e1(N), e2(N), sg(N), one = Eigen::VectorXd::Ones(N);
    for (int k = 0; k < N; ++k) {
        Coord q = g.chart_node(k);
        MetricData md = metric(g.chart, q);
        Wn[k] = W.w(q) / hbar;
        e1[k] = md.e11;
        e2[k] = md.e22;
        sg[k] = md.sqrtg;
    }
    Eigen::VectorXd inv_sg = sg.cwiseInverse();
    Eigen::VectorXd sg_e1 = sg.cwiseProduct(e1), sg_e2 = sg.cwiseProduct(e2);
    Eigen::VectorXd e12 = e1.cwiseProduct(e2);
    Eigen::VectorXd inv_e1 = e1.cwiseInverse(), inv_e2 = e2.cwiseInverse();

    auto par = seam_parity(g, opt.seam_class);
    // sqrtg e1 = r and 1/e2 = r are odd in the signed polar radius
    const double odd_r = g.chart.kind == ChartKind::Polar ? -1.0 : 1.0;

    auto base = [&](const std::string& name) {
        auto D = std::make_shared<Discretization>();
        D->grid = grid;
        D->W = Wn;
        D->fwd = forward_stencil(opt.stencil_order);
        D->bwd = backward_stencil(opt.stencil_order);
        D->prefactor = cplx(0.0, 1.0 / std::sqrt(W.params.m));
        D->name = name;
        return D;
    };

    auto Q = base("Q");
    Q->terms = {
        {0, 1, 1, true, hbar, inv_sg, sg_e1, par[1] * odd_r},
        {0, 2, 2, true, hbar, inv_sg, sg_e2, double(par[2])},
        {1, 3, 2, true, -hbar, e2, one, double(par[3])},
        {2, 3, 1, true, hbar, e1, one, double(par[3])},
    };
    auto Qd = base("Qdag");
    Qd->terms = {
        {1, 0, 1, false, hbar, e1, one, double(par[0])},
        {2, 0, 2, false, hbar, e2, one, double(par[0])},
        {3, 1, 2, false, -hbar, e12, inv_e1, double(par[1])},
        {3, 2, 1, false, hbar, e12, inv_e2, par[2] * odd_r},
    };
    for (const Term& t : Q->terms) Q->pattern[t.out][t.in] = true;
    for (const Term& t : Qd->terms) Qd->pattern[t.out][t.in] = true;
    return {make_operator(Q), make_operator(Qd)};
}

std::shared_ptr<const SectorOperator> supercharge(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                  const DiscretizationOptions& opt) {
    return supercharges(W, std::move(grid), opt).Q;
}

std::shared_ptr<const SectorOperator> supercharge_dag(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                      const DiscretizationOptions& opt) {
    return supercharges(W, std::move(grid), opt).Qdag;
}

std::shared_ptr<const SectorOperator> hamiltonian_composed(std::shared_ptr<const SectorOperator> Q,
                                                           std::shared_ptr<const SectorOperator> Qdag) {
    if (!Q || !Qdag || Q->grid().size() != Qdag->grid().size() || Q->grid().n1 != Qdag->grid().n1)
        throw std::invalid_argument("hamiltonian_composed: operator shape mismatch");
    BlockPattern p{};
    p[0][0] = p[3][3] = true;
    p[1][1] = p[1][2] = p[2][1] = p[2][2] = true;
    return std::make_shared<SectorOperator>(
        Q->grid_ptr(), "H", p,
        [Q, Qdag](const CVec& f) { return CVec(0.5 * (Q->apply(Qdag->apply(f)) + Qdag->apply(Q->apply(f)))); },
        [Q, Qdag]() {
            const CSparse& A = Q->assembled();
            const CSparse& B = Qdag->assembled();
            CSparse H = A * B;
            CSparse BA = B * A;
            H += BA;
            H *= cplx(0.5, 0.0);
            H.prune(cplx(0.0, 0.0));
            H.makeCompressed();
            return H;
        });
}

std::shared_ptr<const Grid> dirichlet_extension(const Grid& g, int reach, std::array<int, 2>& offset) {
    Bounds b = g.bounds;
    const int lo1 = g.seam ? 0 : reach, lo2 = g.periodic2 ? 0 : reach, hi2 = lo2;
    b.q1min -= lo1 * g.h1;
    b.q1max += reach * g.h1;
    b.q2min -= lo2 * g.h2;
    b.q2max += hi2 * g.h2;
    offset = {lo1, lo2};
    try {
        return std::make_shared<Grid>(build_grid(g.chart, b, g.n1 + lo1 + reach, g.n2 + lo2 + hi2));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("hamiltonian: the Dirichlet layer of ") + std::to_string(reach) +
                                    " cells leaves the chart domain, move the edges inward (" + e.what() + ")");
    }
}

std::shared_ptr<const SectorOperator> hamiltonian(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                  const DiscretizationOptions& opt) {
    const Grid& g = *grid;
    const int reach = stencil_reach(opt.stencil_order);
    std::array<int, 2> off{};
    auto gx = dirichlet_extension(g, reach, off);
    auto qx = supercharges(W, gx, opt);
    const int N = g.size(), Nx = gx->size();
    std::vector<int> map(4 * N);
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) map[c * N + g.index(i, j)] = c * Nx + gx->index(i + off[0], j + off[1]);

    auto Q = qx.Q, Qd = qx.Qdag;
    BlockPattern p{};
    p[0][0] = p[3][3] = true;
    p[1][1] = p[1][2] = p[2][1] = p[2][2] = true;

    auto restrict = [map, Nx](const CSparse& Hx) {
        std::vector<Eigen::Triplet<cplx>> trip;
        for (std::size_t k = 0; k < map.size(); ++k) trip.emplace_back(static_cast<int>(k), map[k], 1.0);
        CSparse S(map.size(), 4 * Nx);
        S.setFromTriplets(trip.begin(), trip.end());
        CSparse SH = S * Hx;
        CSparse St = S.transpose();
        CSparse H = SH * St;
        H.prune(cplx(0.0, 0.0));
        H.makeCompressed();
        return H;
    };

    if (gx->seam) {
        // Q^dag is only adjoint to O(h^2) across r = 0; use the form 1/2 (Q* Q + Qdag* Qdag)
        // with * the exact weighted adjoint, symmetric and non-negative by construction
        auto H = std::make_shared<CSparse>();
        {
            Eigen::VectorXd w(4 * Nx);
            for (int c = 0; c < 4; ++c) w.segment(c * Nx, Nx) = gx->weights;
            Eigen::VectorXd iw = w.cwiseInverse();
            const CSparse& A = Q->assembled();
            const CSparse& B = Qd->assembled();
            CSparse As = iw.cast<cplx>().asDiagonal() * CSparse(A.adjoint()) * w.cast<cplx>().asDiagonal();
            CSparse Bs = iw.cast<cplx>().asDiagonal() * CSparse(B.adjoint()) * w.cast<cplx>().asDiagonal();
            CSparse Hx = As * A;
            CSparse BB = Bs * B;
            Hx += BB;
            Hx *= cplx(0.5, 0.0);
            *H = restrict(Hx);
        }
        return std::make_shared<SectorOperator>(
            grid, "H", p,
            [H](const CVec& f) {
                if (f.size() != H->cols()) throw std::invalid_argument("H: field size mismatch");
                return CVec(*H * f);
            },
            [H]() { return *H; });
    }

    return std::make_shared<SectorOperator>(
        grid, "H", p,
        [Q, Qd, map, Nx](const CVec& f) {
            if (f.size() != static_cast<Eigen::Index>(map.size())) throw std::invalid_argument("H: field size mismatch");
            CVec fx = CVec::Zero(4 * Nx);
            for (std::size_t k = 0; k < map.size(); ++k) fx[map[k]] = f[k];
            CVec hx = 0.5 * (Q->apply(Qd->apply(fx)) + Qd->apply(Q->apply(fx)));
            CVec out(map.size());
            for (std::size_t k = 0; k < map.size(); ++k) out[k] = hx[map[k]];
            return out;
        },
        [Q, Qd, restrict]() {
            const CSparse& A = Q->assembled();
            const CSparse& B = Qd->assembled();
            CSparse Hx = A * B;
            CSparse BA = B * A;
            Hx += BA;
            Hx *= cplx(0.5, 0.0);
            return restrict(Hx);
        });
}

RSparse sector_block(const SectorOperator& op, int sector) {
    auto sc = sector_components(sector);
    const int N = op.grid().size();
    const int lo = sc[0] * N, n = sc[1] * N;
    const CSparse& A = op.assembled();
    std::vector<Eigen::Triplet<double>> trip;
    for (int r = lo; r < lo + n; ++r)
        for (CSparse::InnerIterator it(A, r); it; ++it) {
            int c = static_cast<int>(it.col());
            if (c >= lo && c < lo + n) trip.emplace_back(r - lo, c - lo, it.value().real());
        }
    RSparse B(n, n);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    return B;
}

AlgebraReport algebra_report(std::shared_ptr<const SectorOperator> Qp, std::shared_ptr<const SectorOperator> Qdp,
                             int trials, std::uint64_t seed, SeamClass cls) {
    const SectorOperator& Q = *Qp;
    const SectorOperator& Qdag = *Qdp;
    const Grid& g = Q.grid();
    const int N = g.size();
    auto H = hamiltonian_composed(Qp, Qdp);
    AlgebraReport rep;
    for (int t = 0; t < trials; ++t) {
        CVec f = smooth_random_field(g, seed + 2 * t, cls);
        CVec h = smooth_random_field(g, seed + 2 * t + 1, cls);
        double nf = weighted_norm(g, f), nh = weighted_norm(g, h);
        CVec Qf = Q.apply(f);
        CVec Qdh = Qdag.apply(h);
        rep.adjointness =
            std::max(rep.adjointness, std::abs(inner_product(g, Qf, h) - inner_product(g, f, Qdh)) / (nf * nh));
        rep.nilpotency = std::max(rep.nilpotency, weighted_norm(g, Q.apply(Qf)) / nf);
        rep.nilpotency_dag = std::max(rep.nilpotency_dag, weighted_norm(g, Qdag.apply(Qdag.apply(f))) / nf);
        for (int s = 0; s < 3; ++s) {
            std::array<bool, 3> mask{false, false, false};
            mask[s] = true;
            CVec p = smooth_random_field(g, seed + 1000 + 3 * t + s, cls, mask);
            CVec Hp = H->apply(p);
            auto sc = sector_components(s);
            CVec other = Hp;
            other.segment(sc[0] * N, sc[1] * N).setZero();
            double nHp = weighted_norm(g, Hp);
            if (nHp > 0.0) rep.block_leakage = std::max(rep.block_leakage, weighted_norm(g, other) / nHp);
        }
    }
    return rep;
}

BlockPattern assembled_pattern(const SectorOperator& op, double tol) {
    BlockPattern p{};
    const int N = op.grid().size();
    const CSparse& A = op.assembled();
    for (int r = 0; r < A.outerSize(); ++r)
        for (CSparse::InnerIterator it(A, r); it; ++it)
            if (std::abs(it.value()) > tol) p[r / N][it.col() / N] = true;
    return p;
}

void export_coo(const SectorOperator& op, std::ostream& os) {
    const CSparse& A = op.assembled();
    os.precision(17);
    for (int r = 0; r < A.outerSize(); ++r)
        for (CSparse::InnerIterator it(A, r); it; ++it)
            os << r << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

Eigen::Matrix4d fermi_psi(int a, double m) {
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    if (a == 1) {
        P(0, 1) = 1.0;
        P(2, 3) = 1.0;
    } else if (a == 2) {
        P(0, 2) = 1.0;
        P(1, 3) = -1.0;
    } else {
        throw std::invalid_argument("fermi_psi: index must be 1 or 2");
    }
    return P / std::sqrt(m);
}

Eigen::Matrix4d fermi_psi_dag(int a, double m) { return fermi_psi(a, m).transpose(); }

Eigen::Matrix4d fermi_number(double m) {
    return fermi_psi_dag(1, m) * fermi_psi(1, m) + fermi_psi_dag(2, m) * fermi_psi(2, m);
}

SuperchargeEntries supercharge_entries(const Superpotential& W, Coord q, double f, double f1, double f2) {
    MetricData md = metric(W.chart, q);
    ConnectionData cd = connection(W.chart, q);
    WJet j = W.jet(q);
    const double hb = W.params.hbar;
    double D1 = md.e11 * (hb * f1 + j.w1 * f), D2 = md.e22 * (hb * f2 + j.w2 * f);
    double Db1 = md.e11 * (hb * f1 - j.w1 * f), Db2 = md.e22 * (hb * f2 - j.w2 * f);
    SuperchargeEntries e;
    e.q01 = D1 - hb * cd.omega1 * f;
    e.q02 = D2 + hb * cd.omega2 * f;
    e.q13 = -D2;
    e.q23 = D1;
    e.d10 = Db1;
    e.d20 = Db2;
    e.d31 = -Db2 - hb * cd.omega2 * f;
    e.d32 = Db1 - hb * cd.omega1 * f;
    return e;
}

}  // namespace susy2d

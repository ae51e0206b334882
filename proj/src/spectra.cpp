#include "susy2d/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>

namespace susy2d {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double offsector_fraction(const SectorOperator& H, int sector) {
    auto sc = sector_components(sector);
    const int N = H.grid().size();
    const int lo = sc[0] * N, hi = lo + sc[1] * N;
    const CSparse& A = H.assembled();
    double in = 0.0, out = 0.0;
    for (int r = lo; r < hi; ++r)
        for (CSparse::InnerIterator it(A, r); it; ++it) {
            double a = std::norm(it.value());
            (it.col() >= lo && it.col() < hi ? in : out) += a;
        }
    // columns of the sector reached from other rows
    for (int r = 0; r < A.rows(); ++r) {
        if (r >= lo && r < hi) continue;
        for (CSparse::InnerIterator it(A, r); it; ++it)
            if (it.col() >= lo && it.col() < hi) out += std::norm(it.value());
    }
    return in > 0.0 ? std::sqrt(out / in) : (out > 0.0 ? 1.0 : 0.0);
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& Y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

// orthonormal basis of the column span, dropping directions below roundoff
Eigen::MatrixXd stable_basis(const Eigen::MatrixXd& V) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    qr.setThreshold(1e-12);
    const int r = static_cast<int>(qr.rank());
    return qr.householderQ() * Eigen::MatrixXd::Identity(V.rows(), r);
}

double axis_fraction(const Grid& g, const CVec& psi) {
    const int N = g.size();
    double ring = 0.0, all = 0.0;
    for (int k = 0; k < N; ++k)
        for (int c = 0; c < 4; ++c) {
            double a = g.weights[k] * std::norm(psi[c * N + k]);
            all += a;
            if (k / g.n2 == 0) ring += a;
        }
    return all > 0.0 ? ring / all : 0.0;
}

}  // namespace

std::string seam_class_name(SeamClass c) { return c == SeamClass::Physical ? "physical" : "twisted"; }

SectorResult sector_spectrum(const SectorOperator& H, int sector, int k, const SolverOptions& opt, SeamClass cls,
                             double leak_tol) {
    if (sector < 0 || sector > 2) throw std::invalid_argument("sector must be 0, 1 or 2");
    if (k < 1 || k > 40) throw std::invalid_argument("k must lie in [1, 40]");
    double leak = offsector_fraction(H, sector);
    if (leak > leak_tol)
        throw LeakageError("sector " + std::to_string(sector) + " is coupled to other sectors (relative leakage " +
                           std::to_string(leak) + ")");

    const Grid& g = H.grid();
    const int N = g.size();
    auto sc = sector_components(sector);
    RSparse B = sector_block(H, sector);
    const int n = static_cast<int>(B.rows());
    k = std::min(k, n);

    Eigen::VectorXd sw(n), isw(n);
    for (int c = 0; c < sc[1]; ++c)
        for (int i = 0; i < N; ++i) {
            sw[c * N + i] = std::sqrt(g.weights[i]);
            isw[c * N + i] = 1.0 / sw[c * N + i];
        }
    // similarity to the weighted-symmetric form, then drop the antisymmetric residue
    SpMat S = sw.asDiagonal() * SpMat(B) * isw.asDiagonal();
    SpMat St = S.transpose();
    SpMat Ssym = 0.5 * (S + St);
    Ssym.prune(0.0);

    SectorResult res;
    res.sector = sector;
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;

    if (n <= opt.dense_limit) {
        res.method = "dense";
        Eigen::MatrixXd dense = Ssym;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        vals = es.eigenvalues().head(k);
        vecs = es.eigenvectors().leftCols(k);
        res.iterations = 1;
    } else {
        res.method = "lobpcg, shift-invert preconditioned";
        SpMat A = Ssym;
        for (int i = 0; i < n; ++i) A.coeffRef(i, i) -= opt.shift;
        A.makeCompressed();
        Eigen::CholmodSimplicialLLT<SpMat> fact(A);
        if (fact.info() != Eigen::Success)
            throw std::runtime_error("sector_spectrum: factorization of H - shift failed (H not positive?)");
        const int p = std::min(n, k + std::max(4, k / 2));
        std::mt19937_64 rng(opt.seed + sector);
        std::normal_distribution<double> nd;
        Eigen::MatrixXd X(n, p);
        for (int j = 0; j < p; ++j)
            for (int i = 0; i < n; ++i) X(i, j) = nd(rng);
        X = orthonormalize(fact.solve(X));
        Eigen::MatrixXd P;
        res.converged = false;
        for (int it = 1; it <= opt.max_iter; ++it) {
            Eigen::MatrixXd SX = Ssym * X;
            Eigen::MatrixXd T = X.transpose() * SX;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
            X = X * es.eigenvectors();
            SX = SX * es.eigenvectors();
            vals = es.eigenvalues();
            Eigen::MatrixXd R = SX - X * vals.asDiagonal();
            double worst = 0.0;
            for (int j = 0; j < k; ++j) worst = std::max(worst, R.col(j).norm());
            res.iterations = it;
            if (worst <= opt.tol) {
                res.converged = true;
                break;
            }
            Eigen::MatrixXd Wd = fact.solve(R);
            Eigen::MatrixXd V(n, p + Wd.cols() + P.cols());
            V << X, Wd, P;
            V = stable_basis(V);
            Eigen::MatrixXd SV = Ssym * V;
            Eigen::MatrixXd TV = V.transpose() * SV;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(0.5 * (TV + TV.transpose()));
            Eigen::MatrixXd Xn = V * ev.eigenvectors().leftCols(p);
            P = Xn - X * (X.transpose() * Xn);
            X = Xn;
        }
        vals = vals.head(k).eval();
        vecs = X.leftCols(k);
    }

    for (int j = 0; j < k; ++j) {
        Eigenpair ep;
        ep.value = vals[j];
        ep.cls = cls;
        Eigen::VectorXd phi = vecs.col(j);
        ep.residual = (Ssym * phi - vals[j] * phi).norm() / phi.norm();
        Eigen::VectorXd psi = isw.asDiagonal() * phi;
        Eigen::VectorXd r = sw.asDiagonal() * (B * psi - vals[j] * psi);
        ep.raw_residual = r.norm() / phi.norm();
        ep.vector = CVec::Zero(4 * N);
        for (int c = 0; c < sc[1]; ++c)
            for (int i = 0; i < N; ++i) ep.vector[(sc[0] + c) * N + i] = psi[c * N + i] / phi.norm();
        res.pairs.push_back(std::move(ep));
    }
    return res;
}

PairingSummary pairing_report(const SpectrumReport& report, double tol) {
    PairingSummary out;
    std::vector<SeamClass> classes = report.classes;
    if (classes.empty()) classes = {SeamClass::Physical};
    for (SeamClass cls : classes) {
        std::vector<double> ferm;
        for (const auto& e : report.sectors[1])
            if (e.cls == cls && !e.axis_mode) ferm.push_back(e.value);
        std::sort(ferm.begin(), ferm.end());
        std::vector<bool> used(ferm.size(), false);
        const double top = ferm.empty() ? -std::numeric_limits<double>::infinity() : ferm.back();

        std::vector<std::pair<double, int>> bos;
        for (int s : {0, 2})
            for (const auto& e : report.sectors[s])
                if (e.cls == cls && !e.axis_mode && e.value > report.threshold) bos.push_back({e.value, s});
        std::sort(bos.begin(), bos.end());

        for (auto [lam, s] : bos) {
            PairEntry pe;
            pe.value = lam;
            pe.sector_a = s;
            pe.sector_b = 1;
            pe.cls = cls;
            pe.gap = std::numeric_limits<double>::infinity();
            int best = -1;
            for (std::size_t i = 0; i < ferm.size(); ++i) {
                if (used[i]) continue;
                double gap = std::abs(ferm[i] - lam);
                if (gap < pe.gap) {
                    pe.gap = gap;
                    best = static_cast<int>(i);
                }
            }
            pe.matched = best >= 0 && pe.gap <= tol;
            if (pe.matched) used[best] = true;
            // beyond the computed fermionic window nothing can be said
            if (!pe.matched && lam >= top - tol) continue;
            out.entries.push_back(pe);
            if (!pe.matched) out.unmatched.push_back(pe);
        }
    }
    return out;
}

IntertwineResult intertwine_check(const SectorOperator& Qdag, const Eigenpair& pair, const SectorOperator& H) {
    const Grid& g = H.grid();
    IntertwineResult r;
    CVec phi = Qdag.apply(pair.vector);
    double nphi = weighted_norm(g, phi), npsi = weighted_norm(g, pair.vector);
    if (nphi < 1e-10 * npsi) {
        r.annihilated = true;
        return r;
    }
    CVec d = H.apply(phi) - pair.value * phi;
    r.residual = weighted_norm(g, d) / nphi;
    return r;
}

double deck_parity(const Grid& g, const CVec& psi) {
    if (!g.cover) return 1.0;
    auto par = seam_parity(g, SeamClass::Physical);
    const int N = g.size();
    cplx num = 0.0;
    double den = 0.0;
    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < N; ++k) {
            num += std::conj(psi[c * N + k]) * double(par[c]) * psi[c * N + g.deck(k)] * g.weights[k];
            den += std::norm(psi[c * N + k]) * g.weights[k];
        }
    return den > 0.0 ? num.real() / den : 0.0;
}

SpectrumReport compute_spectrum(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                const SpectrumOptions& opt) {
    SpectrumReport rep;
    const int kf = opt.k_fermionic > 0 ? opt.k_fermionic : 2 * opt.k;
    std::vector<SeamClass> runs = {SeamClass::Physical};
    if (grid->seam && opt.double_cover) runs.push_back(SeamClass::Twisted);
    rep.classes = runs;
    if (grid->cover) rep.classes = {SeamClass::Physical, SeamClass::Twisted};

    for (SeamClass cls : runs) {
        DiscretizationOptions d = opt.disc;
        d.seam_class = cls;
        auto qp = supercharges(W, grid, d);
        AlgebraReport ar = algebra_report(qp.Q, qp.Qdag, opt.adjointness_trials, 12345, cls);
        rep.adjointness = std::max(rep.adjointness, ar.adjointness);
        auto H = hamiltonian(W, grid, d);
        for (int s = 0; s < 3; ++s) {
            int k = s == 1 ? kf : opt.k;
            // the single cover keeps the physical half of a cover spectrum
            const bool filter = grid->cover && !opt.double_cover;
            SectorResult sr = sector_spectrum(*H, s, std::min(filter ? 2 * k : k, 40), opt.solver, cls);
            rep.converged = rep.converged && sr.converged;
            int kept = 0;
            for (auto& e : sr.pairs) {
                if (grid->cover) {
                    e.parity = deck_parity(*grid, e.vector);
                    e.cls = e.parity >= 0.0 ? SeamClass::Physical : SeamClass::Twisted;
                    if (filter && e.cls != SeamClass::Physical) continue;
                }
                if (kept++ == k) break;
                if (grid->seam) {
                    e.axis_fraction = axis_fraction(*grid, e.vector);
                    e.axis_mode = e.axis_fraction > kAxisModeFraction;
                }
                rep.sectors[s].push_back(std::move(e));
            }
        }
    }
    if (grid->cover && !opt.double_cover) rep.classes = {SeamClass::Physical};
    for (auto& v : rep.sectors)
        std::stable_sort(v.begin(), v.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.value < b.value; });
    rep.threshold = std::max(10.0 * rep.adjointness, 1e-6);
    for (int s = 0; s < 3; ++s)
        for (const auto& e : rep.sectors[s]) {
            if (e.axis_mode)
                ++rep.axis_modes[s];
            else if (std::abs(e.value) < rep.threshold)
                ++rep.zero_modes[s];
        }
    rep.pairs = pairing_report(rep, opt.pair_tol).entries;
    return rep;
}

nlohmann::json spectrum_json(const SpectrumReport& r) {
    nlohmann::json j;
    j["sectors"] = nlohmann::json::array();
    j["residuals"] = nlohmann::json::array();
    j["raw_residuals"] = nlohmann::json::array();
    j["classes"] = nlohmann::json::array();
    j["deck_parity"] = nlohmann::json::array();
    j["axis_fraction"] = nlohmann::json::array();
    for (int s = 0; s < 3; ++s) {
        nlohmann::json v = nlohmann::json::array(), res = nlohmann::json::array(), raw = nlohmann::json::array(),
                       cl = nlohmann::json::array(), par = nlohmann::json::array(), ax = nlohmann::json::array();
        for (const auto& e : r.sectors[s]) {
            v.push_back(e.value);
            ax.push_back(e.axis_fraction);
            res.push_back(e.residual);
            par.push_back(e.parity);
            raw.push_back(e.raw_residual);
            cl.push_back(seam_class_name(e.cls));
        }
        j["sectors"].push_back(v);
        j["residuals"].push_back(res);
        j["raw_residuals"].push_back(raw);
        j["classes"].push_back(cl);
        j["deck_parity"].push_back(par);
        j["axis_fraction"].push_back(ax);
    }
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : r.pairs)
        j["pairs"].push_back({{"value", p.value},
                              {"sector_a", p.sector_a},
                              {"sector_b", p.sector_b},
                              {"gap", p.matched ? nlohmann::json(p.gap) : nlohmann::json(nullptr)},
                              {"matched", p.matched},
                              {"class", seam_class_name(p.cls)}});
    j["zero_modes"] = r.zero_modes;
    j["axis_modes"] = r.axis_modes;
    j["zero_mode_threshold"] = r.threshold;
    j["adjointness"] = r.adjointness;
    j["converged"] = r.converged;
    return j;
}

}  // namespace susy2d

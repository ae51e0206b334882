#include <cmath>
#include <numbers>

#include "doctest.h"
#include "susy2d/spectra.hpp"

using namespace susy2d;
using doctest::Approx;

namespace {

std::shared_ptr<const Grid> box(int n, double L = 6.0) {
    return std::make_shared<const Grid>(build_grid(Chart::cartesian(), {-L, L, -L, L}, n, n));
}

}  // namespace

TEST_CASE("oscillator spectrum and pairing") {
    PhysicalParams p;
    Superpotential W = oscillator(Chart::cartesian(), p, 1.0);
    auto g = box(64);
    SpectrumOptions opt;
    opt.k = 6;
    SpectrumReport r = compute_spectrum(W, g, opt);
    CHECK(r.converged);
    const double expect0[] = {0, 1, 1, 2, 2, 2};
    REQUIRE(r.sectors[0].size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(r.sectors[0][i].value - expect0[i]) < 2e-2);
    const double expect2[] = {2, 3, 3, 4, 4, 4};
    REQUIRE(r.sectors[2].size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(r.sectors[2][i].value - expect2[i]) < 2e-2);
    CHECK(r.zero_modes == std::array<int, 3>{1, 0, 0});
    CHECK(r.adjointness < 1e-12);
    for (const auto& sec : r.sectors)
        for (const Eigenpair& e : sec) {
            CHECK(e.value > -1e-8);
            CHECK(e.residual < 1e-6);
        }

    PairingSummary ps = pairing_report(r, 2e-2);
    CHECK(ps.complete());
    CHECK_FALSE(ps.entries.empty());
    for (const PairEntry& e : ps.entries) CHECK(e.gap < 2e-2);

    nlohmann::json j = spectrum_json(r);
    CHECK(j.contains("sectors"));
}

TEST_CASE("supercharges intertwine eigenvectors") {
    PhysicalParams p;
    Superpotential W = oscillator(Chart::cartesian(), p, 1.0);
    {
        // exp(W/hbar) in the bosonic slot is a discrete kernel vector of Q^dag up to the box edge
        auto g = box(48, 9.0);
        SuperchargePair qp = supercharges(W, g);
        Eigenpair ground;
        ground.vector = CVec::Zero(4 * g->size());
        for (int k = 0; k < g->size(); ++k) ground.vector[k] = std::exp(W.w(g->node(k)) / p.hbar);
        CHECK(intertwine_check(*qp.Qdag, ground, *hamiltonian(W, g)).annihilated);
    }
    // the composed H commutes with Q^dag exactly
    auto g = box(48);
    SuperchargePair qp = supercharges(W, g);
    auto H = hamiltonian_composed(qp.Q, qp.Qdag);
    SectorResult s0 = sector_spectrum(*H, 0, 4);
    REQUIRE(s0.converged);
    for (int i = 1; i < 4; ++i) {
        IntertwineResult r = intertwine_check(*qp.Qdag, s0.pairs[i], *H);
        CHECK_FALSE(r.annihilated);
        CHECK(r.residual < 1e-6);
    }
}

TEST_CASE("sector spectrum input checks") {
    PhysicalParams p;
    auto g = box(16);
    auto H = hamiltonian(oscillator(Chart::cartesian(), p, 1.0), g);
    CHECK_THROWS_AS(sector_spectrum(*H, 0, 41), std::invalid_argument);
    CHECK_THROWS_AS(sector_spectrum(*H, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sector_spectrum(*H, 3, 2), std::invalid_argument);
}

TEST_CASE("leakage between sectors is refused") {
    auto g = box(8);
    const int N = g->size();
    CSparse M(4 * N, 4 * N);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i = 0; i < 4 * N; ++i) t.emplace_back(i, i, 1.0);
    for (int k = 0; k < N; ++k) {
        t.emplace_back(3 * N + k, k, 0.1);
        t.emplace_back(k, 3 * N + k, 0.1);
    }
    M.setFromTriplets(t.begin(), t.end());
    BlockPattern pat{};
    for (int a = 0; a < 4; ++a) pat[a][a] = true;
    pat[0][3] = pat[3][0] = true;
    SectorOperator op(g, "leaky", pat, [M](const CVec& f) { return CVec(M * f); }, [M] { return M; });
    CHECK_THROWS_AS(sector_spectrum(op, 0, 2), LeakageError);
    CHECK_THROWS_AS(sector_spectrum(op, 2, 2), LeakageError);
    SectorResult ok = sector_spectrum(op, 1, 2);
    CHECK(ok.pairs[0].value == Approx(1.0));
}

TEST_CASE("polar spectra") {
    PhysicalParams p;
    auto g = std::make_shared<const Grid>(build_grid(Chart::polar(), {0.0, 6.0, 0.0, 2 * std::numbers::pi}, 48, 32));
    SpectrumOptions opt;
    opt.k = 5;
    SpectrumReport r = compute_spectrum(oscillator(Chart::polar(), p, 1.0), g, opt);
    CHECK(r.converged);
    CHECK(r.classes.size() == 2);
    for (const auto& sec : r.sectors)
        for (const Eigenpair& e : sec) CHECK(e.value > -1e-8);
    // physical class, bosonic sectors: the oscillator levels
    std::vector<double> s0, s2;
    for (const Eigenpair& e : r.sectors[0])
        if (e.cls == SeamClass::Physical) s0.push_back(e.value);
    for (const Eigenpair& e : r.sectors[2])
        if (e.cls == SeamClass::Physical) s2.push_back(e.value);
    const double expect0[] = {0, 1, 1, 2, 2}, expect2[] = {2, 3, 3, 4, 4};
    REQUIRE(s0.size() == 5);
    REQUIRE(s2.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(s0[i] - expect0[i]) < 2e-2);
        CHECK(std::abs(s2[i] - expect2[i]) < 4e-2);
    }
    // the axis vortices are flagged, everything else lives away from r = 0
    CHECK(r.axis_modes[1] > 0);
    CHECK(r.axis_modes[0] == 0);
    CHECK(r.zero_modes[0] == 1);
    CHECK(r.zero_modes[1] == 0);
    for (const auto& sec : r.sectors)
        for (const Eigenpair& e : sec)
            CHECK((e.axis_fraction < 0.1 || e.axis_fraction > 0.4));

    SpectrumReport k = compute_spectrum(kepler_polar(Chart::polar(), p), g, opt);
    for (const auto& sec : k.sectors)
        for (const Eigenpair& e : sec) CHECK(e.value > -1e-8);
    CHECK(k.zero_modes[0] == 1);
    CHECK(seam_class_name(SeamClass::Physical) != seam_class_name(SeamClass::Twisted));
}

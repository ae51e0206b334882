#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "susy2d/grid.hpp"

using namespace susy2d;
using doctest::Approx;

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

TEST_CASE("cell-centred grids") {
    Grid p = build_grid(Chart::polar(), {0.0, 10.0, 0.0, kTau}, 64, 64);
    CHECK(p.node(0, 0).q1 == Approx(10.0 / 128.0));
    CHECK(p.periodic2);
    CHECK(p.seam);
    CHECK(p.h2 == Approx(kTau / 64));

    Grid t = build_grid(Chart::elliptic_trig(1.0, 0.0), {-6.0, 6.0, 0.0, kTau}, 64, 64);
    CHECK(t.cover);
    CHECK(t.periodic2);
    CHECK(t.h1 == Approx(12.0 / 64));
    CHECK(t.h2 == Approx(kTau / 64));
    for (int i = 0; i < t.n1; ++i) CHECK(t.node(i, 0).q1 != 0.0);

    Grid shifted = build_grid(Chart::elliptic_trig(1.0, 0.5), {0.5 + 1.0, 0.5 + 4.0, 0.0, kTau}, 16, 16);
    CHECK_FALSE(shifted.cover);
    CHECK(shifted.h1 == Approx(3.0 / 16));
}

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(build_grid(Chart::elliptic(1.0), {1.0, 1.0, -0.5, 0.5}, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::elliptic(1.0), {1.0, 2.0, -0.5, 0.5}, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::elliptic(1.0), {1.2, 2.0, -1.0, 0.5}, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::parabolic(), {-1.0, 1.0, 0.0, 1.0}, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::cartesian(), {-1.0, 1.0, -1.0, 1.0}, 7, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::cartesian(), {1.0, -1.0, -1.0, 1.0}, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::polar(), {-0.1, 1.0, 0.0, kTau}, 16, 16), std::invalid_argument);
    // the trig edge on the focal segment is not a boundary we discretize
    CHECK_THROWS_AS(build_grid(Chart::elliptic_trig(1.0, 0.0), {0.0, 6.0, 0.0, kTau}, 16, 16),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::elliptic_trig(1.0, 0.0), {-5.0, 6.0, 0.0, kTau}, 16, 16),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Chart::elliptic_trig(1.0, 0.0), {-6.0, 6.0, 0.0, kTau}, 15, 16),
                    std::invalid_argument);
}

TEST_CASE("inner product") {
    auto g = std::make_shared<const Grid>(build_grid(Chart::cartesian(), {0.0, 1.0, 0.0, 1.0}, 16, 16));
    SpinorField f(g);
    for (int k = 0; k < g->size(); ++k) f.at(0, k) = 1.0;
    CHECK(std::abs(inner_product(f, f) - cplx(1.0)) < 1e-12);

    auto p = std::make_shared<const Grid>(build_grid(Chart::polar(), {0.0, 1.0, 0.0, kTau}, 64, 32));
    SpinorField a(p);
    for (int k = 0; k < p->size(); ++k) a.at(0, k) = 1.0;
    CHECK(inner_product(a, a).real() == Approx(std::numbers::pi).epsilon(1e-3));
    CHECK(std::abs(inner_product(a, a).imag()) < 1e-15);

    auto e = std::make_shared<const Grid>(build_grid(Chart::elliptic(1.0), {1.2, 3.0, -0.8, 0.8}, 16, 16));
    SpinorField u(e, smooth_random_field(*e, 1)), v(e, smooth_random_field(*e, 2));
    cplx uv = inner_product(u, v), vu = inner_product(v, u);
    CHECK(std::abs(uv - std::conj(vu)) < 1e-14 * std::abs(uv));
    CHECK(weighted_norm(*e, u.values) == Approx(std::sqrt(inner_product(u, u).real())));
    CHECK_THROWS_AS(inner_product(*e, u.values, CVec::Zero(10)), std::invalid_argument);
}

TEST_CASE("sectors and seam parities") {
    CHECK(sector_components(0) == std::array<int, 2>{0, 1});
    CHECK(sector_components(1) == std::array<int, 2>{1, 2});
    CHECK(sector_components(2) == std::array<int, 2>{3, 1});
    CHECK_THROWS_AS(sector_components(3), std::invalid_argument);

    Grid c = build_grid(Chart::cartesian(), {-1.0, 1.0, -1.0, 1.0}, 8, 8);
    CHECK(seam_parity(c, SeamClass::Twisted) == std::array<int, 4>{1, 1, 1, 1});
    Grid p = build_grid(Chart::polar(), {0.0, 1.0, 0.0, kTau}, 8, 8);
    CHECK(seam_parity(p, SeamClass::Physical) == std::array<int, 4>{1, -1, -1, 1});
    CHECK(seam_parity(p, SeamClass::Twisted) == std::array<int, 4>{-1, 1, 1, -1});
}

TEST_CASE("deck map and mirror") {
    Grid t = build_grid(Chart::elliptic_trig(1.0, 0.2), {-2.8, 3.2, 0.0, kTau}, 16, 12);
    for (int k = 0; k < t.size(); ++k) {
        CHECK(t.deck(t.deck(k)) == k);
        Point2 a = to_cartesian(t.chart, t.chart_node(k)), b = to_cartesian(t.chart, t.chart_node(t.deck(k)));
        CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-12);
    }
    Grid p = build_grid(Chart::polar(), {0.0, 1.0, 0.0, kTau}, 8, 16);
    for (int j = 0; j < p.n2; ++j) {
        double phi = p.node(0, j).q2, mirrored = p.node(0, p.mirror_j(j)).q2;
        CHECK(std::remainder(mirrored - phi - std::numbers::pi, kTau) == Approx(0.0).scale(1.0));
    }
}

TEST_CASE("smooth random fields") {
    auto g = std::make_shared<const Grid>(build_grid(Chart::cartesian(), {-1.0, 1.0, -1.0, 1.0}, 24, 24));
    CVec f = smooth_random_field(*g, 9, SeamClass::Physical, {true, false, false});
    CHECK(f.allFinite());
    CHECK(f.segment(0, g->size()).norm() > 0.0);
    CHECK(f.segment(g->size(), 3 * g->size()).norm() == 0.0);
    CHECK((smooth_random_field(*g, 9) - smooth_random_field(*g, 9)).norm() == 0.0);
    CHECK((smooth_random_field(*g, 9) - smooth_random_field(*g, 10)).norm() > 0.0);
}

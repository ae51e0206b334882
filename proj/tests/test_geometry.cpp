#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "susy2d/geometry.hpp"

using namespace susy2d;
using doctest::Approx;

TEST_CASE("metric known values") {
    MetricData e = metric(Chart::elliptic(1.0), {2.0, 0.0});
    CHECK(e.g11 == Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(e.g22 == Approx(4.0).epsilon(1e-14));
    CHECK(e.sqrtg == Approx(4.0 / std::sqrt(3.0)).epsilon(1e-14));

    MetricData p = metric(Chart::polar(), {3.0, 1.0});
    CHECK(p.g11 == Approx(1.0));
    CHECK(p.g22 == Approx(9.0));
    CHECK(p.e22 == Approx(1.0 / 3.0));

    MetricData b = metric(Chart::parabolic(), {1.0, 2.0});
    CHECK(b.g11 == Approx(5.0));
    CHECK(b.g22 == Approx(5.0));
    CHECK(b.sqrtg == Approx(5.0));
}

TEST_CASE("metric outside the domain") {
    CHECK_THROWS_AS(metric(Chart::polar(), {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(metric(Chart::polar(), {-1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(metric(Chart::elliptic(1.0), {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(metric(Chart::elliptic(1.0), {2.0, 1.0}), DomainError);
    CHECK_THROWS_AS(metric(Chart::parabolic(), {0.5, -0.1}), DomainError);
    CHECK_THROWS_AS(metric(Chart::elliptic_trig(1.0, 0.2), {0.1, 1.0}), DomainError);
    CHECK_THROWS_AS(Chart::elliptic(-1.0), std::invalid_argument);
}

TEST_CASE("connection known values") {
    ConnectionData p = connection(Chart::polar(), {2.0, 0.7});
    CHECK(p.omega1 == Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(p.omega2) < 1e-15);
    CHECK(p.gamma[0][1][1] == Approx(-2.0));
    CHECK(p.gamma[1][0][1] == Approx(0.5));

    ConnectionData c = connection(Chart::cartesian(), {0.3, -1.2});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 2; ++k) CHECK(c.gamma[a][b][k] == 0.0);
    CHECK(c.omega1 == 0.0);
    CHECK(c.omega2 == 0.0);

    ConnectionData e = connection(Chart::elliptic(1.0), {2.0, 0.0});
    CHECK(e.omega1 == Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-14));
    CHECK(std::abs(e.omega2) < 1e-15);
}

TEST_CASE("curvature vanishes at the listed points") {
    CHECK(std::abs(curvature_scalar(Chart::polar(), {1.7, 0.3})) < 1e-10);
    CHECK(std::abs(curvature_scalar(Chart::elliptic(1.0), {1.5, 0.5})) < 1e-10);
    CHECK(std::abs(curvature_scalar(Chart::parabolic(), {0.2, 1.1})) < 1e-10);
}

TEST_CASE("to_cartesian known values") {
    Point2 a = to_cartesian(Chart::elliptic(1.0), {1.0, 0.0});
    CHECK(std::abs(a.x) < 1e-15);
    CHECK(std::abs(a.y) < 1e-15);
    Point2 b = to_cartesian(Chart::parabolic(), {1.0, 2.0});
    CHECK(b.x == Approx(-1.5));
    CHECK(b.y == Approx(2.0));
    Point2 t = to_cartesian(Chart::elliptic_trig(1.0, 0.0), {1.0, std::numbers::pi / 2});
    CHECK(std::abs(t.x) < 1e-15);
    CHECK(t.y == Approx(std::sinh(1.0)).epsilon(1e-14));
}

TEST_CASE("from_cartesian known values and the focal axis") {
    Coord a = from_cartesian(Chart::elliptic(1.0), {0.0, 1.0});
    CHECK(a.q1 == Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(a.q2) < 1e-15);
    Coord p = from_cartesian(Chart::polar(), {0.0, 2.0});
    CHECK(p.q1 == Approx(2.0));
    CHECK(p.q2 == Approx(std::numbers::pi / 2));
    CHECK_THROWS_AS(from_cartesian(Chart::elliptic(1.0), {2.0, 0.0}), DegeneratePointError);
    CHECK_THROWS_AS(from_cartesian(Chart::elliptic(1.0), {0.5, 0.0}), DegeneratePointError);
}

TEST_CASE("spinor change on the elliptic chart") {
    Eigen::Matrix4d S = spinor_change(Chart::elliptic(1.0), {2.0, 0.0});
    Eigen::Matrix4d expect;
    expect << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, -1;
    CHECK((S - expect).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 rng(11);
    const Chart& ell = testing::chart_for(ChartKind::EllipticAlgebraic);
    for (int n = 0; n < 200; ++n) {
        Coord q = testing::random_interior(ell, rng);
        Eigen::Matrix4d M = spinor_change(ell, q);
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((M * M - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("chart invariants at random points") {
    std::mt19937_64 rng(5);
    for (ChartKind kind : testing::kAllKinds) {
        const Chart& c = testing::chart_for(kind);
        CAPTURE(chart_kind_name(kind));
        for (int n = 0; n < 200; ++n) {
            Coord q = testing::random_interior(c, rng);
            MetricData md = metric(c, q);
            CHECK(md.g11 > 0.0);
            CHECK(md.g22 > 0.0);
            CHECK(md.e11 * md.e11 * md.g11 == Approx(1.0).epsilon(1e-13));
            CHECK(md.e22 * md.e22 * md.g22 == Approx(1.0).epsilon(1e-13));
            CHECK(md.ginv11 * md.g11 == Approx(1.0).epsilon(1e-13));

            ConnectionData cd = connection(c, q);
            for (int mu = 0; mu < 2; ++mu) CHECK(cd.gamma[mu][0][1] == cd.gamma[mu][1][0]);
            CHECK(std::isfinite(cd.omega1));
            CHECK(std::isfinite(cd.omega2));
            CHECK(std::abs(curvature_scalar(c, q)) < 1e-8);

            Point2 x = to_cartesian(c, q);
            Point2 back = to_cartesian(c, from_cartesian(c, x));
            double scale = std::max(1.0, std::hypot(x.x, x.y));
            CHECK(std::hypot(back.x - x.x, back.y - x.y) / scale < 1e-12);

            Eigen::Matrix4d S = spinor_change(c, q);
            CHECK((S * S.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("jacobian against finite differences") {
    std::mt19937_64 rng(9);
    for (ChartKind kind : testing::kAllKinds) {
        const Chart& c = testing::chart_for(kind);
        for (int n = 0; n < 20; ++n) {
            Coord q = testing::random_interior(c, rng);
            Eigen::Matrix2d J = jacobian(c, q);
            const double h = 1e-6;
            Point2 a = to_cartesian(c, {q.q1 + h, q.q2}), b = to_cartesian(c, {q.q1 - h, q.q2});
            Point2 e = to_cartesian(c, {q.q1, q.q2 + h}), f = to_cartesian(c, {q.q1, q.q2 - h});
            CHECK(J(0, 0) == Approx((a.x - b.x) / (2 * h)).epsilon(1e-7));
            CHECK(J(1, 0) == Approx((a.y - b.y) / (2 * h)).epsilon(1e-7));
            CHECK(J(0, 1) == Approx((e.x - f.x) / (2 * h)).epsilon(1e-7));
            CHECK(J(1, 1) == Approx((e.y - f.y) / (2 * h)).epsilon(1e-7));
        }
    }
}

TEST_CASE("foci recovery") {
    std::mt19937_64 rng(3);
    for (ChartKind kind : {ChartKind::EllipticAlgebraic, ChartKind::EllipticTrig}) {
        const Chart& c = testing::chart_for(kind);
        for (int n = 0; n < 200; ++n) {
            Coord q = testing::random_interior(c, rng);
            auto [r1, r2] = focal_distances(c, q);
            Coord uv = elliptic_uv(c, q);
            CHECK(std::abs(uv.q1 - 0.5 * (r1 + r2)) < 1e-12);
            CHECK(std::abs(uv.q2 - 0.5 * (r2 - r1)) < 1e-12);
        }
    }
}

TEST_CASE("chart names") {
    for (ChartKind kind : testing::kAllKinds) CHECK(chart_kind_from_name(chart_kind_name(kind)) == kind);
    CHECK_THROWS(chart_kind_from_name("spherical"));
}

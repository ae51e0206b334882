#ifndef SUSY2D_GEOMETRY_HPP
#define SUSY2D_GEOMETRY_HPP

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace susy2d {

enum class ChartKind { Cartesian, Polar, Parabolic, EllipticAlgebraic, EllipticTrig };

std::string chart_kind_name(ChartKind kind);
ChartKind chart_kind_from_name(const std::string& name);

struct Chart {
    ChartKind kind = ChartKind::Cartesian;
    double d = 1.0;     // focal half-distance, elliptic kinds only
    double beta = 0.0;  // trig offset, u = d cosh(xi - beta)

    static Chart cartesian() { return {ChartKind::Cartesian, 1.0, 0.0}; }
    static Chart polar() { return {ChartKind::Polar, 1.0, 0.0}; }
    static Chart parabolic() { return {ChartKind::Parabolic, 1.0, 0.0}; }
    static Chart elliptic(double d);
    static Chart elliptic_trig(double d, double beta);

    bool is_elliptic() const {
        return kind == ChartKind::EllipticAlgebraic || kind == ChartKind::EllipticTrig;
    }
    // q2 is an angle
    bool periodic2() const { return kind == ChartKind::Polar || kind == ChartKind::EllipticTrig; }
};

struct Coord {
    double q1 = 0.0, q2 = 0.0;
};

struct Point2 {
    double x = 0.0, y = 0.0;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegeneratePointError : public DomainError {
public:
    using DomainError::DomainError;
};

struct MetricData {
    double g11, g22;
    double ginv11, ginv22;
    double sqrtg;
    double e11, e22;
};

struct ConnectionData {
    // gamma[mu][nu][rho] = Gamma^mu_{nu rho}, indices 0/1
    double gamma[2][2][2];
    double omega1, omega2;
};

// metric components and their closed-form partial derivatives
struct MetricJet {
    double g11, g22;
    double g11_1, g11_2, g22_1, g22_2;
    double g11_11, g11_12, g11_22, g22_11, g22_12, g22_22;
};

// throws DomainError unless q lies strictly inside the chart domain
void check_interior(const Chart& chart, Coord q);

MetricJet metric_jet(const Chart& chart, Coord q);
MetricData metric(const Chart& chart, Coord q);
ConnectionData connection(const Chart& chart, Coord q);
double curvature_scalar(const Chart& chart, Coord q);

Point2 to_cartesian(const Chart& chart, Coord q);
Coord from_cartesian(const Chart& chart, Point2 x);

// Jacobian dx^i/dq^a
Eigen::Matrix2d jacobian(const Chart& chart, Coord q);

// chart-frame spinor components -> cartesian-frame components
Eigen::Matrix4d spinor_change(const Chart& chart, Coord q);

// Laplace-Beltrami of a function from its first and diagonal second partials
double laplace_beltrami(const Chart& chart, Coord q, double f1, double f2, double f11, double f22);

// elliptic (u, v) of a chart point; identity for the algebraic chart
Coord elliptic_uv(const Chart& chart, Coord q);
// distances to the foci (d,0) and (-d,0)
std::array<double, 2> focal_distances(const Chart& chart, Coord q);

}  // namespace susy2d

#endif

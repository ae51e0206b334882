#ifndef SUSY2D_ANALYTICS_HPP
#define SUSY2D_ANALYTICS_HPP

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "susy2d/grid.hpp"
#include "susy2d/operators.hpp"
#include "susy2d/superpotential.hpp"

namespace susy2d {

enum class StateFrame { Chart, Cartesian };

class NonNormalizableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClosedFormState {
    int sector = 0;
    StateFrame frame = StateFrame::Chart;
    double amplitude = 1.0;
    PhysicalParams params;
    // chart frame: coordinates of `chart` (elliptic or elliptic-trig); cartesian frame: (x, y) in q1, q2
    Chart chart;
    bool normalizable = true;
    // reflection class under the deck map of the branched cover
    SeamClass cover_class = SeamClass::Physical;
    std::string name;
    std::function<Eigen::Vector4d(Coord)> evaluator;
    // chart-frame value as a function of elliptic (u, v); used for sampling and quadrature
    std::function<Eigen::Vector4d(double, double)> uv_value;

    Eigen::Vector4d operator()(Coord q) const { return evaluator(q); }
};

// sector 0: A exp(W/hbar) in |0>; sector 2: A exp(-W/hbar) in |1_1 1_2>, not normalizable
ClosedFormState bosonic_zero_mode(const PhysicalParams& params, int sector, StateFrame frame,
                                  double amplitude = 1.0);
ClosedFormState bosonic_zero_mode(const PhysicalParams& params, int sector, const Chart& chart,
                                  double amplitude = 1.0);
// normalizable solution, |1_2> slot. cartesian frame is the upper half-plane branch; throws
// DegeneratePointError on the focal segment (chart frame: at the foci)
ClosedFormState fermionic_zero_mode(const PhysicalParams& params, StateFrame frame, double amplitude = 1.0);
ClosedFormState fermionic_zero_mode(const PhysicalParams& params, const Chart& chart, double amplitude = 1.0);
// the other solution, |1_1> slot with the growing exponential
ClosedFormState fermionic_first_solution(const PhysicalParams& params, double amplitude = 1.0);

// printed norm formulas; sector 0 or 1. delta = 1 in sector 0 through the I1(x)/x limit
double norm_bessel(const PhysicalParams& params, int sector);

struct QuadratureOptions {
    double decay = 1e-16;   // xi truncated where the integrand falls below decay * peak
    double target = 1e-8;   // relative agreement of the two rule orders
    int order_low = 10, order_high = 20;
    double s_limit = 60.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double s_max = 0.0;
    bool converged = false;
};

// N^2 = int |Psi|^2 sqrt(g) over the plane (trig chart, eta in [0, 2 pi)).
// throws NonNormalizableError, TruncationError if the integrand has not decayed by s_limit
QuadratureResult norm_quadrature(const ClosedFormState& state, const QuadratureOptions& opt = {});

// chart-frame state sampled at the nodes of an elliptic grid with the state's d; cover nodes on the
// lower sheet take the deck-map parity of the state's class
CVec sample_state(const ClosedFormState& state, const Grid& grid);

struct ZeroModeResidual {
    double q = 0.0;     // ||Q psi|| / ||psi|| over interior nodes
    double qdag = 0.0;  // ||Q^dag psi|| / ||psi||
    int margin = 0;
};

// interior: at least `margin` cells from every non-periodic edge (default: stencil reach + 1)
ZeroModeResidual zero_mode_residual(const ClosedFormState& state, std::shared_ptr<const Grid> grid,
                                    const DiscretizationOptions& disc = {}, int margin = -1);

struct LimitSweepRow {
    double control = 0.0;
    double d = 0.0;
    double sup_norm_W = 0.0;
    double state_l2_diff = 0.0;
    double norm_value = 0.0;   // bosonic N^2 by quadrature
    double fermion_norm2 = 0.0;
    double fermion_pointwise = 0.0;
    std::string flags;
};

struct PolarWindow {
    double rmin = 0.5, rmax = 2.0;
    int samples = 64;
};

struct ParabolicWindow {
    double lo = 0.2, hi = 2.0;
    int samples = 64;
};

// d = 2 exp(beta); two-center quantities at (xi, eta) = (ln r, phi) against the Kepler polar targets
std::vector<LimitSweepRow> polar_limit_sweep(const PhysicalParams& params, const std::vector<double>& betas,
                                             const PolarWindow& window = {});
// kept focus (d, 0): u = sqrt(d^2 + d xi1^2), v = sqrt(d^2 - d xi2^2); W measured from its focus value
std::vector<LimitSweepRow> parabolic_limit_sweep(const PhysicalParams& params, const std::vector<double>& ds,
                                                 const ParabolicWindow& window = {});

// limiting bosonic N^2 = pi hbar^4 / (8 m^2 a^2) for charge a
double kepler_norm2(const PhysicalParams& params, double charge);

// least-squares slope of fermion_norm2 against ln(1/d) over the last `rows` rows (polar sweep)
double fermion_log_slope(const std::vector<LimitSweepRow>& rows, int last);

// true when the column is strictly decreasing over the last `last` rows (all rows if last <= 0)
bool strictly_decreasing(const std::vector<LimitSweepRow>& rows, double LimitSweepRow::*col, int last = 0);
bool strictly_increasing(const std::vector<LimitSweepRow>& rows, double LimitSweepRow::*col, int last = 0);

std::string sweep_csv(const std::vector<LimitSweepRow>& rows);

}  // namespace susy2d

#endif

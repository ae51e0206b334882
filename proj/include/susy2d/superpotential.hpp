#ifndef SUSY2D_SUPERPOTENTIAL_HPP
#define SUSY2D_SUPERPOTENTIAL_HPP

#include <array>
#include <functional>
#include <string>

#include "susy2d/geometry.hpp"

namespace susy2d {

struct PhysicalParams {
    double m = 1.0;
    double hbar = 1.0;
    double alpha = 1.0;
    double delta = 0.5;
    double d = 1.0;

    // throws std::invalid_argument on violated invariants
    void validate() const;
    double alpha_tilde() const { return alpha * (1.0 + delta); }
};

struct TwoCenterConstants {
    double kappa = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};

// value, gradient and Hessian in chart coordinates
struct WJet {
    double w = 0.0;
    double w1 = 0.0, w2 = 0.0;
    double w11 = 0.0, w12 = 0.0, w22 = 0.0;
};

struct Superpotential {
    Chart chart;
    PhysicalParams params;
    std::string name;
    std::function<WJet(Coord)> jet_fn;

    WJet jet(Coord q) const { return jet_fn(q); }
    double w(Coord q) const { return jet_fn(q).w; }
    std::array<double, 2> grad(Coord q) const {
        WJet j = jet_fn(q);
        return {j.w1, j.w2};
    }
    std::array<double, 3> hess(Coord q) const {
        WJet j = jet_fn(q);
        return {j.w11, j.w12, j.w22};
    }
};

Superpotential two_center_general(const Chart& chart, const PhysicalParams& params,
                                  const TwoCenterConstants& consts);
Superpotential two_center_simple(const Chart& chart, const PhysicalParams& params);
Superpotential kepler_polar(const Chart& chart, const PhysicalParams& params);
Superpotential kepler_parabolic(const Chart& chart, const PhysicalParams& params);

// W = -(m omega / 2) |x|^2 on cartesian or polar charts
Superpotential oscillator(const Chart& chart, const PhysicalParams& params, double omega);
Superpotential zero_superpotential(const Chart& chart, const PhysicalParams& params);

// two-center potential -alpha/r1 - delta alpha/r2 in elliptic coordinates
double two_center_potential(const PhysicalParams& params, double u, double v);

// Laplace-Beltrami of W at q
double laplacian(const Superpotential& W, Coord q);

// (hbar/2m) lap W - V
double poisson_residual(const Superpotential& W, Coord q);

}  // namespace susy2d

#endif

#ifndef SUSY2D_QUADRATURE_HPP
#define SUSY2D_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace susy2d {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule, n >= 1
GaussRule gauss_legendre(int n);

// composite rule: `panels` equal panels of an n-point rule on [a, b]
double integrate_1d(const std::function<double(double)>& f, double a, double b, int n, int panels);

// tensor composite rule on [a1, b1] x [a2, b2]
double integrate_2d(const std::function<double(double, double)>& f, double a1, double b1, double a2, double b2,
                    int n, int panels1, int panels2);

}  // namespace susy2d

#endif

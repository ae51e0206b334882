#include "susy2d/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace susy2d {

namespace {

void check_order(int order) {
    if (order != 0 && order != 1)
        throw std::invalid_argument("modified_bessel: order " + std::to_string(order) + " not supported");
}

// sum_k (x/2)^(2k+n) / (k! (k+n)!)
double i_series(int n, double x) {
    double h = 0.5 * x;
    double term = n == 0 ? 1.0 : h;
    double sum = term;
    double q = h * h;
    for (int k = 1; k < 500; ++k) {
        term *= q / (double(k) * double(k + n));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k / x^k, truncated at the smallest term
double i_asymptotic_scaled(int n, double x) {
    double mu = 4.0 * n * n;
    double term = 1.0, sum = 1.0, last = 1.0;
    for (int k = 1; k < 200; ++k) {
        double f = 2.0 * k - 1.0;
        term *= -(mu - f * f) / (8.0 * k * x);
        if (std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
        if (last < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// e^{x} K_n(x) = int_0^inf exp(-x (cosh t - 1)) cosh(n t) dt, trapezoid rule
// (doubly exponential decay makes it spectrally accurate)
double k_integral_scaled(int n, double x) {
    double tmax = std::acosh(1.0 + 60.0 / x);
    int steps = 64;
    double prev = 0.0;
    for (int pass = 0; pass < 8; ++pass) {
        double h = tmax / steps;
        double sum = 0.5;
        for (int i = 1; i <= steps; ++i) {
            double t = i * h;
            sum += std::exp(-x * (std::cosh(t) - 1.0)) * (n == 0 ? 1.0 : std::cosh(t));
        }
        sum *= h;
        if (pass > 0 && std::abs(sum - prev) <= 1e-15 * sum) return sum;
        prev = sum;
        steps *= 2;
    }
    return prev;
}

}  // namespace

double bessel_i_scaled(int order, double x) {
    check_order(order);
    if (!(x >= 0.0)) throw std::domain_error("modified_bessel: I needs x >= 0");
    if (x <= kBesselCrossover) return std::exp(-x) * i_series(order, x);
    return i_asymptotic_scaled(order, x);
}

double bessel_k_scaled(int order, double x) {
    check_order(order);
    if (!(x > 0.0)) throw std::domain_error("modified_bessel: K needs x > 0");
    return k_integral_scaled(order, x);
}

double modified_bessel(int order, BesselKind kind, double x) {
    check_order(order);
    if (kind == BesselKind::I) {
        if (!(x >= 0.0)) throw std::domain_error("modified_bessel: I needs x >= 0");
        if (x <= kBesselCrossover) return i_series(order, x);
        return std::exp(x) * i_asymptotic_scaled(order, x);
    }
    if (!(x > 0.0)) throw std::domain_error("modified_bessel: K needs x > 0");
    return std::exp(-x) * k_integral_scaled(order, x);
}

double bessel_i1_over_x(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_i1_over_x: x < 0");
    if (x < 1e-8) return 0.5 + x * x / 16.0;
    return bessel_i1(x) / x;
}

}  // namespace susy2d

#ifndef SUSY2D_BESSEL_HPP
#define SUSY2D_BESSEL_HPP

#include <stdexcept>

namespace susy2d {

enum class BesselKind { I, K };

// I: power series for x <= crossover, asymptotic expansion above
inline constexpr double kBesselCrossover = 25.0;

// orders 0 and 1 only. throws std::domain_error for x <= 0 (K) or x < 0 (I),
// std::invalid_argument for other orders
double modified_bessel(int order, BesselKind kind, double x);

inline double bessel_i0(double x) { return modified_bessel(0, BesselKind::I, x); }
inline double bessel_i1(double x) { return modified_bessel(1, BesselKind::I, x); }
inline double bessel_k0(double x) { return modified_bessel(0, BesselKind::K, x); }
inline double bessel_k1(double x) { return modified_bessel(1, BesselKind::K, x); }

// I1(x)/x with its limit 1/2 at x = 0
double bessel_i1_over_x(double x);

// exp(-x) I_n(x) and exp(x) K_n(x), usable where the plain values over/underflow
double bessel_i_scaled(int order, double x);
double bessel_k_scaled(int order, double x);

}  // namespace susy2d

#endif

#ifndef SUSY2D_TESTS_SUPPORT_HPP
#define SUSY2D_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "susy2d/geometry.hpp"

namespace testing {

using susy2d::Chart;
using susy2d::ChartKind;
using susy2d::Coord;

inline const Chart& chart_for(ChartKind kind) {
    static const Chart cart = Chart::cartesian(), pol = Chart::polar(), par = Chart::parabolic(),
                       ell = Chart::elliptic(1.3), trig = Chart::elliptic_trig(1.3, 0.4);
    switch (kind) {
        case ChartKind::Cartesian: return cart;
        case ChartKind::Polar: return pol;
        case ChartKind::Parabolic: return par;
        case ChartKind::EllipticAlgebraic: return ell;
        default: return trig;
    }
}

inline constexpr ChartKind kAllKinds[] = {ChartKind::Cartesian, ChartKind::Polar, ChartKind::Parabolic,
                                          ChartKind::EllipticAlgebraic, ChartKind::EllipticTrig};

// interior points kept away from the degenerate loci
inline Coord random_interior(const Chart& c, std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const double tau = 2.0 * std::numbers::pi;
    switch (c.kind) {
        case ChartKind::Cartesian: return {U(-3, 3), U(-3, 3)};
        case ChartKind::Polar: return {U(0.2, 3), U(0.01, tau - 0.01)};
        case ChartKind::Parabolic: return {U(-2, 2), U(0.1, 2)};
        case ChartKind::EllipticAlgebraic: return {U(1.05 * c.d, 4 * c.d), U(-0.95 * c.d, 0.95 * c.d)};
        default: return {c.beta + U(0.05, 2.5), U(0.02, tau - 0.02)};
    }
}

inline int run_exit(const std::string& cmd) {
    int st = std::system((cmd + " 2>/dev/null").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testing

#endif

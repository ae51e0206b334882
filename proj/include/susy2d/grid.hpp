#ifndef SUSY2D_GRID_HPP
#define SUSY2D_GRID_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>

#include <Eigen/Dense>

#include "susy2d/geometry.hpp"

namespace susy2d {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

struct Bounds {
    double q1min = 0.0, q1max = 1.0;
    double q2min = 0.0, q2max = 1.0;
};

// which reflection class the fields obey at a seam edge
enum class SeamClass { Physical, Twisted };

struct Grid {
    Chart chart;
    int n1 = 0, n2 = 0;
    Bounds bounds;
    bool periodic2 = false;
    // polar: the r = 0 edge reflects through (r, phi) -> (-r, phi + pi)
    bool seam = false;
    // elliptic-trig on xi - beta in (-L, L): both sheets of the branched cover, foci at
    // (beta, 0) and (beta, pi); nodes with xi < beta stand for the deck image (2 beta - xi, 2 pi - eta)
    bool cover = false;
    double h1 = 0.0, h2 = 0.0;
    Eigen::VectorXd weights;  // sqrtg h1 h2 per node

    int size() const { return n1 * n2; }
    int index(int i, int j) const { return i * n2 + j; }
    Coord node(int i, int j) const {
        return {bounds.q1min + (i + 0.5) * h1, bounds.q2min + (j + 0.5) * h2};
    }
    Coord node(int k) const { return node(k / n2, k % n2); }
    // point in the chart's own domain where coefficients are evaluated
    Coord chart_node(int k) const {
        Coord q = node(k);
        if (cover && q.q1 < chart.beta) return {2.0 * chart.beta - q.q1, 2.0 * std::numbers::pi - q.q2};
        return q;
    }
    // q2 index of the reflected node across the polar seam
    int mirror_j(int j) const;
    // node carrying the same physical point on the other sheet of a cover grid
    int deck(int k) const { return index(n1 - 1 - k / n2, n2 - 1 - k % n2); }
};

// throws std::invalid_argument for bad extents or degenerate edges.
// elliptic-trig accepts xi from beta (not supported, use the cover) or a range symmetric about beta
Grid build_grid(const Chart& chart, const Bounds& bounds, int n1, int n2);

// parity of sector components (|0>, |1_1>, |1_2>, |1_1 1_2>) across the polar seam or under the deck map
std::array<int, 4> seam_parity(const Grid& grid, SeamClass cls);

// node weights sqrtg h1 h2
Eigen::VectorXd node_weights(const Grid& grid);

// spinor field: 4 sector components stacked, component c at node k -> c*N + k
struct SpinorField {
    std::shared_ptr<const Grid> grid;
    CVec values;

    explicit SpinorField(std::shared_ptr<const Grid> g) : grid(std::move(g)), values(CVec::Zero(4 * grid->size())) {}
    SpinorField(std::shared_ptr<const Grid> g, CVec v);

    int nodes() const { return grid->size(); }
    cplx& at(int comp, int k) { return values[comp * nodes() + k]; }
    cplx at(int comp, int k) const { return values[comp * nodes() + k]; }
    auto component(int comp) { return values.segment(comp * nodes(), nodes()); }
    auto component(int comp) const { return values.segment(comp * nodes(), nodes()); }
};

// first component index and component count of a Fermi sector (0, 1, 2)
std::array<int, 2> sector_components(int sector);

cplx inner_product(const SpinorField& f, const SpinorField& g);
cplx inner_product(const Grid& grid, const CVec& f, const CVec& g);
double weighted_norm(const Grid& grid, const CVec& f);

// random smooth field on the lowest 8x8 tensor modes, vanishing at non-periodic edges,
// with the seam parity of the given class (a polar seam gets radially odd and even modes, both smooth
// through r = 0); `sector_mask` selects populated sectors
CVec smooth_random_field(const Grid& grid, std::uint64_t seed, SeamClass cls = SeamClass::Physical,
                         std::array<bool, 3> sector_mask = {true, true, true}, int modes = 8);

}  // namespace susy2d

#endif

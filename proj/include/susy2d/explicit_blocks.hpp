#ifndef SUSY2D_EXPLICIT_BLOCKS_HPP
#define SUSY2D_EXPLICIT_BLOCKS_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "susy2d/operators.hpp"

namespace susy2d {

class UnsupportedBlockError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// family: elliptic | polar | parabolic (generic W), two-center, kepler-polar, kepler-parabolic
// block: H0, H2, H11, H22, H12, H21
struct ExplicitSpec {
    std::string family;
    std::string block;
    bool corrected = false;  // use the re-derived coefficients where the printed ones differ
};

// coefficients of c0 + c1 d1 + c2 d2 + c11 d11 + c22 d22 at one point
struct BlockCoeffs {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c11 = 0.0, c22 = 0.0;
};

struct ExplicitBlock {
    std::string name;
    int out = 0, in = 0;  // spinor components
    std::function<BlockCoeffs(Coord)> coeffs;
};

// throws UnsupportedBlockError for the generic fermionic diagonal blocks, invalid_argument on chart mismatch
ExplicitBlock explicit_block(const ExplicitSpec& spec, const Superpotential& W);

// centered 4th-order assembly; rows within `margin` cells of a non-periodic edge are left empty
std::shared_ptr<const SectorOperator> hamiltonian_explicit(const ExplicitSpec& spec, const Superpotential& W,
                                                           std::shared_ptr<const Grid> grid, int margin = 4);

// nodes at least `margin` cells away from every non-periodic edge
std::vector<int> interior_nodes(const Grid& grid, int margin = 4);

// every fully printed block with the chart kind it is written in
struct CatalogEntry {
    ExplicitSpec spec;
    ChartKind chart;
};
std::vector<CatalogEntry> explicit_catalog();

// spinor components of a block name
std::array<int, 2> block_components(const std::string& block);

// per family: chart, a box clear of degenerate loci, and the superpotential the blocks are compared on
// (generic families use non-separable test superpotentials with W_12 != 0)
struct OracleCase {
    Chart chart;
    Bounds bounds;
    Superpotential W;
};
OracleCase oracle_case(const std::string& family);

// max |H_composed f - H_explicit f| / max |H_explicit f| over the nodes of an n x n grid in the middle 3/4
// of every non-periodic range (a fixed region, so orders are comparable across n),
// f a smooth field in the block's input component vanishing to 4th order at non-periodic edges
double oracle_deviation(const ExplicitSpec& spec, int n, int stencil_order = 4);

}  // namespace susy2d

#endif

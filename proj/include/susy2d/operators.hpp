#ifndef SUSY2D_OPERATORS_HPP
#define SUSY2D_OPERATORS_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Sparse>

#include "susy2d/grid.hpp"
#include "susy2d/superpotential.hpp"

namespace susy2d {

using CSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using RSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using BlockPattern = std::array<std::array<bool, 4>, 4>;

class SectorOperator {
public:
    using ApplyFn = std::function<CVec(const CVec&)>;
    using AssembleFn = std::function<CSparse()>;

    SectorOperator(std::shared_ptr<const Grid> grid, std::string name, BlockPattern pattern, ApplyFn apply,
                   AssembleFn assemble);

    // matrix-free action on a stacked 4-component field
    CVec apply(const CVec& f) const;
    SpinorField apply(const SpinorField& f) const;
    // sparse form, built on first use
    const CSparse& assembled() const;

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const BlockPattern& pattern() const { return pattern_; }
    const std::string& name() const { return name_; }

private:
    std::shared_ptr<const Grid> grid_;
    std::string name_;
    BlockPattern pattern_;
    ApplyFn apply_;
    AssembleFn assemble_;
    mutable std::once_flag once_;
    mutable CSparse matrix_;
};

struct DiscretizationOptions {
    int stencil_order = 4;  // 2, 4 or 5 (5: interior only, has a boundary mode)
    SeamClass seam_class = SeamClass::Physical;
};

// widest offset of the upwind-biased first-derivative stencil of an order
int stencil_reach(int order);

// Q and Q^dagger sharing one set of stencil tables
struct SuperchargePair {
    std::shared_ptr<const SectorOperator> Q;
    std::shared_ptr<const SectorOperator> Qdag;
};

SuperchargePair supercharges(const Superpotential& W, std::shared_ptr<const Grid> grid,
                             const DiscretizationOptions& opt = {});
std::shared_ptr<const SectorOperator> supercharge(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                  const DiscretizationOptions& opt = {});
std::shared_ptr<const SectorOperator> supercharge_dag(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                      const DiscretizationOptions& opt = {});

// H = (Q Q^dag + Q^dag Q)/2 of the given operators, both truncated at the edges
std::shared_ptr<const SectorOperator> hamiltonian_composed(std::shared_ptr<const SectorOperator> Q,
                                                           std::shared_ptr<const SectorOperator> Qdag);

// H = (Q Q^dag + Q^dag Q)/2 with Dirichlet data on the field only: the supercharges act on the grid
// widened by the stencil reach and H is restricted back. weighted-symmetric; the edge states that
// the truncated composition carries in sectors 1 and 2 are absent
std::shared_ptr<const SectorOperator> hamiltonian(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                                  const DiscretizationOptions& opt = {});

// one sector block of an assembled operator (real part), rows/cols of the sector's components
RSparse sector_block(const SectorOperator& op, int sector);

struct AlgebraReport {
    double adjointness = 0.0;
    double nilpotency = 0.0;
    double nilpotency_dag = 0.0;
    double block_leakage = 0.0;
};

AlgebraReport algebra_report(std::shared_ptr<const SectorOperator> Q, std::shared_ptr<const SectorOperator> Qdag, int trials,
                             std::uint64_t seed = 12345, SeamClass cls = SeamClass::Physical);

// nonzero 4x4 blocks of an assembled operator
BlockPattern assembled_pattern(const SectorOperator& op, double tol = 0.0);

// coordinate-format text: "row col re im" per line
void export_coo(const SectorOperator& op, std::ostream& os);

// constant Fermi operators psi^a, psi^a dagger (4x4, including the 1/sqrt(m) factor)
Eigen::Matrix4d fermi_psi(int a, double m);
Eigen::Matrix4d fermi_psi_dag(int a, double m);
Eigen::Matrix4d fermi_number(double m);

// continuum action of the supercharge entries at one point on a 1-jet (f, d1 f, d2 f)
struct SuperchargeEntries {
    // Q entries (0,1), (0,2), (1,3), (2,3); Q^dag entries (1,0), (2,0), (3,1), (3,2); without i/sqrt(m)
    double q01, q02, q13, q23;
    double d10, d20, d31, d32;
};
SuperchargeEntries supercharge_entries(const Superpotential& W, Coord q, double f, double f1, double f2);

}  // namespace susy2d

#endif

#ifndef SUSY2D_SPECTRA_HPP
#define SUSY2D_SPECTRA_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "susy2d/operators.hpp"

namespace susy2d {

class LeakageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Eigenpair {
    double value = 0.0;
    CVec vector;            // full 4N field, unit weighted norm
    double residual = 0.0;  // on the symmetrized operator that was diagonalized
    double raw_residual = 0.0;  // on the assembled H as is
    SeamClass cls = SeamClass::Physical;
    double parity = 1.0;  // deck-map expectation value on cover grids
    // seam grids: weighted norm share on the ring next to r = 0. the cell-centred grid admits
    // m = 0, ~1/r sector-1 vortices there that the continuum excludes (log-divergent norm)
    double axis_fraction = 0.0;
    bool axis_mode = false;
};

inline constexpr double kAxisModeFraction = 0.25;

struct SolverOptions {
    double tol = 1e-8;
    int max_iter = 400;
    double shift = -0.05;
    int dense_limit = 2000;
    std::uint64_t seed = 7;
};

struct SectorResult {
    int sector = 0;
    std::vector<Eigenpair> pairs;  // ascending
    bool converged = true;
    int iterations = 0;
    std::string method;
};

// k smallest eigenpairs of one sector under the weighted inner product.
// throws LeakageError when H couples the sector to others, invalid_argument for bad k or sector
SectorResult sector_spectrum(const SectorOperator& H, int sector, int k, const SolverOptions& opt = {},
                             SeamClass cls = SeamClass::Physical, double leak_tol = 1e-12);

struct PairEntry {
    double value = 0.0;
    int sector_a = 0, sector_b = 1;
    double gap = 0.0;  // |lambda_a - lambda_b|, infinity when unmatched
    bool matched = false;
    SeamClass cls = SeamClass::Physical;
};

struct SpectrumReport {
    std::array<std::vector<Eigenpair>, 3> sectors;
    std::vector<PairEntry> pairs;
    std::array<int, 3> zero_modes{0, 0, 0};  // axis modes not counted
    std::array<int, 3> axis_modes{0, 0, 0};
    double threshold = 0.0;
    double adjointness = 0.0;
    bool converged = true;
    std::vector<SeamClass> classes;
};

struct PairingSummary {
    std::vector<PairEntry> entries;
    std::vector<PairEntry> unmatched;
    bool complete() const { return unmatched.empty(); }
};

// bosonic values above `threshold` matched greedily to sector-1 values of the same class;
// values too close to the top of the computed sector-1 window are not required to match.
// axis modes take no part
PairingSummary pairing_report(const SpectrumReport& report, double tol);

struct IntertwineResult {
    double residual = 0.0;
    bool annihilated = false;
};

// ||H (Qdag psi) - lambda Qdag psi|| / ||Qdag psi||
IntertwineResult intertwine_check(const SectorOperator& Qdag, const Eigenpair& pair, const SectorOperator& H);

struct SpectrumOptions {
    int k = 6;
    int k_fermionic = 0;  // 0: 2k
    DiscretizationOptions disc;
    SolverOptions solver;
    // double: union of physical and twisted classes (polar seam: two operators; trig cover: classes
    // told apart by deck parity); single: physical only. no effect on plain grids
    bool double_cover = true;
    double pair_tol = 5e-3;
    int adjointness_trials = 2;
};

// <psi, P psi>/<psi, psi> for the deck map P of a cover grid (1 on other grids)
double deck_parity(const Grid& grid, const CVec& psi);

SpectrumReport compute_spectrum(const Superpotential& W, std::shared_ptr<const Grid> grid,
                                const SpectrumOptions& opt = {});

std::string seam_class_name(SeamClass c);
nlohmann::json spectrum_json(const SpectrumReport& r);

}  // namespace susy2d

#endif

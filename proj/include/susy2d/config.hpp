#ifndef SUSY2D_CONFIG_HPP
#define SUSY2D_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "susy2d/geometry.hpp"
#include "susy2d/grid.hpp"
#include "susy2d/superpotential.hpp"

namespace susy2d {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double adjointness = 1e-3;
    double nilpotency = 1e-3;
    double nilpotency_dag = 1e-3;
    double block_leakage = 1e-3;
    double norm_gap = 1e-6;
    double residual = 1e-5;
};

struct RunConfig {
    Chart chart = Chart::elliptic_trig(1.0, 0.0);
    std::string superpotential = "two-center-simple";
    PhysicalParams params;
    TwoCenterConstants consts;
    double omega = 1.0;

    Bounds bounds;
    int n1 = 64, n2 = 64;
    int stencil_order = 4;

    Tolerances tol;
    double tol_scale = 1.0;

    // spectrum
    int k = 6;
    int k_fermionic = 0;
    bool double_cover = true;
    double pair_tol = 5e-3;
    double solver_tol = 1e-8;
    int max_iter = 400;

    // zero-modes
    std::vector<int> sectors{0, 1, 2};

    // limit-sweep
    std::string mode = "polar";
    std::vector<double> betas{-2.0, -4.0, -6.0, -8.0};
    std::vector<double> ds{4.0, 8.0, 16.0, 32.0};
    double window_lo = 0.0, window_hi = 0.0;  // 0: mode default
    int samples = 64;

    int trials = 4;
    std::uint64_t seed = 12345;
};

// reads an INI file (empty path: defaults), then applies "section.key=value" overrides.
// every value is validated, unknown sections or keys are rejected; throws ConfigError
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& ini, const std::vector<std::string>& overrides = {});

// default bounds for a chart when the [grid] section gives none
Bounds default_bounds(const Chart& chart);

std::shared_ptr<const Grid> make_grid(const RunConfig& cfg);
Superpotential make_superpotential(const RunConfig& cfg);

}  // namespace susy2d

#endif

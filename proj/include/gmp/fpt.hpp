#pragma once

// Adaptive first-passage demo: paths start on a coarse grid and only cells
// near the boundary are refined (by exact bridge sampling) down to the
// target level. Crossings are detected at grid points only; there is no
// continuous-crossing correction between grid points.

#include "gmp/process.hpp"
#include "gmp/tree.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace gmp {

struct FptConfig {
    double boundary = 1.0;
    int coarse_level = 4;
    int target_level = 12;
    std::size_t paths = 1000;
    /// Cells whose endpoints bracket the boundary, or come within `band`
    /// of it, are refined. Infinity refines everything.
    double band = 0.5;
    std::uint64_t seed = 0;
    std::uint64_t first_path_id = 0;
    int bins = 20;
};

struct FptPath {
    bool crossed = false;
    /// First grid time with X >= boundary (NaN when not crossed).
    double crossing_time = std::numeric_limits<double>::quiet_NaN();
    std::int64_t refined_cells = 0;
};

struct FptReport {
    std::vector<FptPath> paths;
    std::size_t crossings = 0;
    double survival = 0.0;
    double survival_se = 0.0;
    /// Share of the (target - coarse) refinement cells ever refined.
    double refined_fraction = 0.0;
    std::vector<double> bin_edges;
    std::vector<std::size_t> histogram;
};

/// Throws InvalidArgument on a non-positive boundary or bad level range.
FptReport run_fpt_adaptive(const ProcessSpec& spec, const SupportTree& tree,
                           const FptConfig& config);

/// Reference: every path synthesized directly at the target level with the
/// same key scopes; refined_fraction is 1 by construction.
FptReport run_fpt_exhaustive(const ProcessSpec& spec, const SupportTree& tree,
                             const FptConfig& config);

/// Values of one adaptively refined path on the target grid; entries never
/// refined are NaN. Exposed for path-by-path comparisons.
std::vector<double> adaptive_path_values(const ProcessSpec& spec, const SupportTree& tree,
                                         const FptConfig& config, std::uint64_t path_id);

} // namespace gmp

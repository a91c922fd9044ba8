#pragma once

#include "gmp/basis.hpp"
#include "gmp/sampler.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gmp {

/// Many paths on one shared grid, stored row-major (one row per path).
/// Path i carries the key scope (master_seed, first_path_id + i).
struct PathBatch {
    std::vector<double> times;
    std::size_t paths = 0;
    std::vector<double> values;
    int level = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t first_path_id = 0;
    int degenerate_cells = 0;

    std::span<const double> row(std::size_t p) const {
        return {values.data() + p * times.size(), times.size()};
    }
    std::span<double> row(std::size_t p) { return {values.data() + p * times.size(), times.size()}; }

    PathSample sample(std::size_t p) const;
};

/// Gathers equal-grid samples into a batch. Throws InvalidArgument on
/// mismatched grids.
PathBatch make_batch(std::span<const PathSample> samples);

/// Psi weights of the active elements at every grid time, precomputed once
/// and shared by all paths: X(t_i) = sum_j weights[j] * xi[nodes[j]] for
/// j in [offsets[i], offsets[i+1]).
struct SynthesisPlan {
    std::vector<double> times;
    int levels = 0;
    std::vector<std::size_t> offsets;
    std::vector<std::int64_t> nodes;
    std::vector<double> weights;
};

SynthesisPlan make_synthesis_plan(const Basis& basis, std::span<const double> grid);

/// Cell rules taking the level-`from_level` grid to level from_level + 1.
struct RefinementPlan {
    int from_level = 0;
    std::vector<double> coarse_times;
    std::vector<double> fine_times;
    std::vector<CellRule> rules;
};

RefinementPlan make_refinement_plan(const ProcessSpec& spec, const SupportTree& tree,
                                    int from_level);

/// Sample mean, unbiased covariance and Gaussian-theory standard errors:
/// se(mean_i) = sqrt(C_ii / M), se(C_ij) = sqrt((C_ij^2 + C_ii C_jj) / M).
struct Moments {
    std::size_t samples = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd mean_se;
    Eigen::MatrixXd covariance_se;
};

/// Serial reference kernels. Straight loops, kept for testing the parallel
/// versions and as the benchmark baseline.
namespace serial {

PathBatch synthesize(const SynthesisPlan& plan, std::uint64_t master_seed,
                     std::uint64_t first_path_id, std::size_t count);
PathBatch refine(const RefinementPlan& plan, const PathBatch& coarse);
Moments moments(const PathBatch& batch);

} // namespace serial

/// OpenMP kernels. Paths are independent, so synthesize/refine are
/// bit-identical to the serial versions. moments() reduces fixed-size
/// chunks pairwise, so its result does not depend on the thread count.
namespace parallel {

PathBatch synthesize(const SynthesisPlan& plan, std::uint64_t master_seed,
                     std::uint64_t first_path_id, std::size_t count);
PathBatch refine(const RefinementPlan& plan, const PathBatch& coarse);
Moments moments(const PathBatch& batch);

inline constexpr std::size_t kMomentChunk = 1024;

} // namespace parallel

int max_threads();
void set_threads(int n);

} // namespace gmp

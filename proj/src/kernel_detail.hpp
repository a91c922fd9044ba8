#pragma once

#include "gmp/error.hpp"
#include "gmp/kernels.hpp"
#include "gmp/rng.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace gmp::detail {

inline PathBatch empty_batch(std::vector<double> times, int level, std::uint64_t seed,
                             std::uint64_t first, std::size_t count) {
    PathBatch batch;
    batch.times = std::move(times);
    batch.paths = count;
    batch.values.assign(count * batch.times.size(), 0.0);
    batch.level = level;
    batch.master_seed = seed;
    batch.first_path_id = first;
    return batch;
}

inline void synthesize_one(const SynthesisPlan& plan, KeyScope scope, std::vector<double>& xi,
                           std::span<double> out) {
    xi.resize(std::size_t{1} << plan.levels);
    for (std::size_t flat = 0; flat < xi.size(); ++flat) {
        xi[flat] = keyed_normal(scope, node_from_flat(static_cast<std::int64_t>(flat)));
    }
    for (std::size_t i = 0; i < plan.times.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = plan.offsets[i]; j < plan.offsets[i + 1]; ++j) {
            sum += plan.weights[j] * xi[static_cast<std::size_t>(plan.nodes[j])];
        }
        out[i] = sum;
    }
}

inline void refine_one(const RefinementPlan& plan, KeyScope scope, std::span<const double> in,
                       std::span<double> out) {
    const int level = plan.from_level + 1;
    const std::size_t cells = plan.rules.size();
    for (std::size_t k = 0; k < cells; ++k) {
        const CellRule& rule = plan.rules[k];
        const double x = in[k];
        const double z = in[k + 1];
        double mid = rule.left * x + rule.right * z;
        if (rule.sd > 0.0) {
            mid += rule.sd * keyed_normal(scope, {level, static_cast<std::int64_t>(k)});
        }
        out[2 * k] = x;
        out[2 * k + 1] = mid;
    }
    out[2 * cells] = in[cells];
}

inline void check_refinable(const RefinementPlan& plan, const PathBatch& coarse) {
    if (coarse.times != plan.coarse_times) {
        throw InvalidArgument("refine: batch grid does not match the refinement plan");
    }
}

inline int degenerate_count(const RefinementPlan& plan) {
    int n = 0;
    for (const CellRule& r : plan.rules) {
        n += r.degenerate ? 1 : 0;
    }
    return n;
}

/// Finishes covariance / standard errors from centered cross-product sums.
inline Moments finish_moments(std::size_t m, Eigen::VectorXd mean, const Eigen::MatrixXd& cross) {
    if (m < 2) {
        throw InvalidArgument("moments need at least two paths");
    }
    Moments out;
    out.samples = m;
    out.mean = std::move(mean);
    out.covariance = cross / static_cast<double>(m - 1);
    const auto dim = out.mean.size();
    out.mean_se.resize(dim);
    out.covariance_se.resize(dim, dim);
    const double md = static_cast<double>(m);
    for (Eigen::Index i = 0; i < dim; ++i) {
        out.mean_se[i] = std::sqrt(out.covariance(i, i) / md);
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double c = out.covariance(i, j);
            out.covariance_se(i, j) =
                std::sqrt((c * c + out.covariance(i, i) * out.covariance(j, j)) / md);
        }
    }
    return out;
}

} // namespace gmp::detail

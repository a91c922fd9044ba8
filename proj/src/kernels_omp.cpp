#include "kernel_detail.hpp"

#include <algorithm>

namespace gmp::parallel {

PathBatch synthesize(const SynthesisPlan& plan, std::uint64_t master_seed,
                     std::uint64_t first_path_id, std::size_t count) {
    PathBatch batch = detail::empty_batch(plan.times, plan.levels, master_seed, first_path_id, count);
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
    {
        std::vector<double> xi;
#pragma omp for schedule(static)
        for (std::int64_t p = 0; p < n; ++p) {
            const auto up = static_cast<std::size_t>(p);
            detail::synthesize_one(plan, {master_seed, first_path_id + up}, xi, batch.row(up));
        }
    }
    return batch;
}

PathBatch refine(const RefinementPlan& plan, const PathBatch& coarse) {
    detail::check_refinable(plan, coarse);
    PathBatch fine = detail::empty_batch(plan.fine_times, plan.from_level + 1, coarse.master_seed,
                                         coarse.first_path_id, coarse.paths);
    const auto n = static_cast<std::int64_t>(coarse.paths);
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < n; ++p) {
        const auto up = static_cast<std::size_t>(p);
        detail::refine_one(plan, {coarse.master_seed, coarse.first_path_id + up}, coarse.row(up),
                           fine.row(up));
    }
    fine.degenerate_cells =
        coarse.degenerate_cells + static_cast<int>(coarse.paths) * detail::degenerate_count(plan);
    return fine;
}

namespace {

// Combines partials[i] += partials[i + stride] in a fixed binary tree, so
// the rounding pattern depends only on the chunk count.
template <class T>
T pairwise_reduce(std::vector<T>& partials) {
    for (std::size_t stride = 1; stride < partials.size(); stride *= 2) {
        for (std::size_t i = 0; i + stride < partials.size(); i += 2 * stride) {
            partials[i] += partials[i + stride];
        }
    }
    return partials.front();
}

} // namespace

Moments moments(const PathBatch& batch) {
    const auto dim = static_cast<Eigen::Index>(batch.times.size());
    const std::size_t chunks = std::max<std::size_t>(1, (batch.paths + kMomentChunk - 1) / kMomentChunk);
    const auto nchunks = static_cast<std::int64_t>(chunks);

    std::vector<Eigen::VectorXd> sums(chunks, Eigen::VectorXd::Zero(dim));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kMomentChunk;
        const std::size_t hi = std::min(batch.paths, lo + kMomentChunk);
        Eigen::VectorXd& acc = sums[static_cast<std::size_t>(c)];
        for (std::size_t p = lo; p < hi; ++p) {
            const auto r = batch.row(p);
            for (Eigen::Index i = 0; i < dim; ++i) {
                acc[i] += r[static_cast<std::size_t>(i)];
            }
        }
    }
    Eigen::VectorXd mean = pairwise_reduce(sums) / static_cast<double>(batch.paths);

    std::vector<Eigen::MatrixXd> cross(chunks, Eigen::MatrixXd::Zero(dim, dim));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kMomentChunk;
        const std::size_t hi = std::min(batch.paths, lo + kMomentChunk);
        Eigen::MatrixXd& acc = cross[static_cast<std::size_t>(c)];
        Eigen::VectorXd centered(dim);
        for (std::size_t p = lo; p < hi; ++p) {
            const auto r = batch.row(p);
            for (Eigen::Index i = 0; i < dim; ++i) {
                centered[i] = r[static_cast<std::size_t>(i)] - mean[i];
            }
            for (Eigen::Index j = 0; j < dim; ++j) {
                for (Eigen::Index i = 0; i <= j; ++i) {
                    acc(i, j) += centered[i] * centered[j];
                }
            }
        }
    }
    Eigen::MatrixXd total = pairwise_reduce(cross);
    total.triangularView<Eigen::StrictlyLower>() = total.transpose();
    return detail::finish_moments(batch.paths, std::move(mean), total);
}

} // namespace gmp::parallel

#include "kernel_detail.hpp"

namespace gmp::serial {

PathBatch synthesize(const SynthesisPlan& plan, std::uint64_t master_seed,
                     std::uint64_t first_path_id, std::size_t count) {
    PathBatch batch = detail::empty_batch(plan.times, plan.levels, master_seed, first_path_id, count);
    std::vector<double> xi;
    for (std::size_t p = 0; p < count; ++p) {
        detail::synthesize_one(plan, {master_seed, first_path_id + p}, xi, batch.row(p));
    }
    return batch;
}

PathBatch refine(const RefinementPlan& plan, const PathBatch& coarse) {
    detail::check_refinable(plan, coarse);
    PathBatch fine = detail::empty_batch(plan.fine_times, plan.from_level + 1, coarse.master_seed,
                                         coarse.first_path_id, coarse.paths);
    for (std::size_t p = 0; p < coarse.paths; ++p) {
        detail::refine_one(plan, {coarse.master_seed, coarse.first_path_id + p}, coarse.row(p),
                           fine.row(p));
    }
    fine.degenerate_cells =
        coarse.degenerate_cells + static_cast<int>(coarse.paths) * detail::degenerate_count(plan);
    return fine;
}

Moments moments(const PathBatch& batch) {
    const auto dim = static_cast<Eigen::Index>(batch.times.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (std::size_t p = 0; p < batch.paths; ++p) {
        const auto r = batch.row(p);
        for (Eigen::Index i = 0; i < dim; ++i) {
            mean[i] += r[static_cast<std::size_t>(i)];
        }
    }
    mean /= static_cast<double>(batch.paths);

    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd centered(dim);
    for (std::size_t p = 0; p < batch.paths; ++p) {
        const auto r = batch.row(p);
        for (Eigen::Index i = 0; i < dim; ++i) {
            centered[i] = r[static_cast<std::size_t>(i)] - mean[i];
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (Eigen::Index i = 0; i <= j; ++i) {
                cross(i, j) += centered[i] * centered[j];
            }
        }
    }
    cross.triangularView<Eigen::StrictlyLower>() = cross.transpose();
    return detail::finish_moments(batch.paths, std::move(mean), cross);
}

} // namespace gmp::serial

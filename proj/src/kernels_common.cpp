#include "gmp/error.hpp"
#include "gmp/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gmp {

PathSample PathBatch::sample(std::size_t p) const {
    PathSample s;
    s.times = times;
    const auto r = row(p);
    s.values.assign(r.begin(), r.end());
    s.level = level;
    s.scope = {master_seed, first_path_id + p};
    return s;
}

PathBatch make_batch(std::span<const PathSample> samples) {
    if (samples.empty()) {
        throw InvalidArgument("empty path collection");
    }
    PathBatch batch;
    batch.times = samples.front().times;
    batch.level = samples.front().level;
    batch.master_seed = samples.front().scope.master_seed;
    batch.first_path_id = samples.front().scope.path_id;
    batch.paths = samples.size();
    batch.values.reserve(batch.paths * batch.times.size());
    for (const PathSample& s : samples) {
        if (s.times != batch.times || s.values.size() != batch.times.size()) {
            throw InvalidArgument("paths are not on a common grid");
        }
        batch.values.insert(batch.values.end(), s.values.begin(), s.values.end());
        batch.degenerate_cells += s.degenerate_cells;
    }
    return batch;
}

SynthesisPlan make_synthesis_plan(const Basis& basis, std::span<const double> grid) {
    SynthesisPlan plan;
    plan.times.assign(grid.begin(), grid.end());
    plan.levels = basis.levels();
    plan.offsets.reserve(grid.size() + 1);
    plan.offsets.push_back(0);
    for (double t : grid) {
        basis.for_each_active(t, [&](std::int64_t flat, double w) {
            plan.nodes.push_back(flat);
            plan.weights.push_back(w);
        });
        plan.offsets.push_back(plan.nodes.size());
    }
    return plan;
}

RefinementPlan make_refinement_plan(const ProcessSpec& spec, const SupportTree& tree,
                                    int from_level) {
    if (from_level < 0 || from_level + 1 > tree.depth()) {
        throw InvalidArgument("refinement plan: level " + std::to_string(from_level + 1) +
                              " exceeds tree depth");
    }
    RefinementPlan plan;
    plan.from_level = from_level;
    plan.coarse_times = prefix_order_times(tree, from_level);
    plan.fine_times = prefix_order_times(tree, from_level + 1);
    const std::int64_t cells = std::int64_t{1} << from_level;
    plan.rules.reserve(static_cast<std::size_t>(cells));
    for (std::int64_t k = 0; k < cells; ++k) {
        plan.rules.push_back(cell_rule(spec, tree.node(from_level + 1, k)));
    }
    return plan;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) {
        omp_set_num_threads(n);
    }
#else
    (void)n;
#endif
}

} // namespace gmp

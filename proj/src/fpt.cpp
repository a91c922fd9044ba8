#include "gmp/fpt.hpp"

#include "gmp/basis.hpp"
#include "gmp/error.hpp"
#include "gmp/kernels.hpp"
#include "gmp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace gmp {

namespace {

struct FptPlans {
    SynthesisPlan coarse;
    std::vector<RefinementPlan> levels; // levels[j - coarse] takes j -> j + 1
    std::vector<double> fine_times;
};

void validate(const SupportTree& tree, const FptConfig& c) {
    if (!(c.boundary > 0.0) || !std::isfinite(c.boundary)) {
        throw InvalidArgument("fpt: boundary must be a positive finite level");
    }
    if (c.coarse_level < 0 || c.target_level < c.coarse_level || c.target_level > tree.depth()) {
        throw InvalidArgument("fpt: need 0 <= coarse level <= target level <= tree depth");
    }
    if (!(c.band >= 0.0)) {
        throw InvalidArgument("fpt: proximity band must be non-negative");
    }
    if (c.paths < 1 || c.bins < 1) {
        throw InvalidArgument("fpt: need at least one path and one histogram bin");
    }
}

FptPlans make_plans(const ProcessSpec& spec, const SupportTree& tree, const FptConfig& c) {
    FptPlans plans;
    const Basis basis(spec, tree, c.coarse_level);
    plans.coarse = make_synthesis_plan(basis, prefix_order_times(tree, c.coarse_level));
    for (int j = c.coarse_level; j < c.target_level; ++j) {
        plans.levels.push_back(make_refinement_plan(spec, tree, j));
    }
    plans.fine_times = prefix_order_times(tree, c.target_level);
    return plans;
}

bool wants_refinement(double x, double z, double boundary, double band) {
    if ((x - boundary) * (z - boundary) <= 0.0) {
        return true;
    }
    return std::min(std::abs(x - boundary), std::abs(z - boundary)) <= band;
}

// Fills `values` (target grid, NaN = unknown) and returns the refined cell count.
std::int64_t adaptive_fill(const FptPlans& plans, const FptConfig& c, std::uint64_t path_id,
                           std::vector<double>& values, std::vector<double>& xi) {
    const KeyScope scope{c.seed, path_id};
    const int span = c.target_level - c.coarse_level;
    values.assign(plans.fine_times.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<double> coarse(plans.coarse.times.size());
    xi.resize(std::size_t{1} << plans.coarse.levels);
    for (std::size_t flat = 0; flat < xi.size(); ++flat) {
        xi[flat] = keyed_normal(scope, node_from_flat(static_cast<std::int64_t>(flat)));
    }
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = plans.coarse.offsets[i]; j < plans.coarse.offsets[i + 1]; ++j) {
            sum += plans.coarse.weights[j] * xi[static_cast<std::size_t>(plans.coarse.nodes[j])];
        }
        coarse[i] = sum;
        values[i << span] = sum;
    }

    std::vector<std::int64_t> active(coarse.size() - 1);
    for (std::size_t k = 0; k < active.size(); ++k) {
        active[k] = static_cast<std::int64_t>(k);
    }
    std::vector<std::int64_t> next;
    std::int64_t refined = 0;
    for (int j = c.coarse_level; j < c.target_level; ++j) {
        const RefinementPlan& plan = plans.levels[static_cast<std::size_t>(j - c.coarse_level)];
        const std::size_t stride = std::size_t{1} << (c.target_level - j);
        next.clear();
        for (const std::int64_t k : active) {
            const std::size_t left = static_cast<std::size_t>(k) * stride;
            const double x = values[left];
            const double z = values[left + stride];
            if (!wants_refinement(x, z, c.boundary, c.band)) {
                continue;
            }
            const CellRule& rule = plan.rules[static_cast<std::size_t>(k)];
            double mid = rule.left * x + rule.right * z;
            if (rule.sd > 0.0) {
                mid += rule.sd * keyed_normal(scope, {j + 1, k});
            }
            values[left + stride / 2] = mid;
            ++refined;
            next.push_back(2 * k);
            next.push_back(2 * k + 1);
        }
        active.swap(next);
    }
    return refined;
}

FptPath first_crossing(std::span<const double> times, std::span<const double> values,
                       double boundary) {
    FptPath out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= boundary) { // NaN (unknown) compares false
            out.crossed = true;
            out.crossing_time = times[i];
            break;
        }
    }
    return out;
}

void summarize(FptReport& report, const FptConfig& c, double total_cells) {
    report.bin_edges.resize(static_cast<std::size_t>(c.bins) + 1);
    for (int b = 0; b <= c.bins; ++b) {
        report.bin_edges[static_cast<std::size_t>(b)] = static_cast<double>(b) / c.bins;
    }
    report.histogram.assign(static_cast<std::size_t>(c.bins), 0);
    std::int64_t refined = 0;
    for (const FptPath& p : report.paths) {
        refined += p.refined_cells;
        if (!p.crossed) {
            continue;
        }
        ++report.crossings;
        const auto bin = std::min<std::size_t>(static_cast<std::size_t>(c.bins) - 1,
                                               static_cast<std::size_t>(p.crossing_time * c.bins));
        ++report.histogram[bin];
    }
    const double m = static_cast<double>(report.paths.size());
    report.survival = 1.0 - static_cast<double>(report.crossings) / m;
    report.survival_se = std::sqrt(report.survival * (1.0 - report.survival) / m);
    report.refined_fraction = total_cells > 0.0 ? static_cast<double>(refined) / total_cells : 0.0;
}

} // namespace

std::vector<double> adaptive_path_values(const ProcessSpec& spec, const SupportTree& tree,
                                         const FptConfig& config, std::uint64_t path_id) {
    validate(tree, config);
    const FptPlans plans = make_plans(spec, tree, config);
    std::vector<double> values;
    std::vector<double> xi;
    adaptive_fill(plans, config, path_id, values, xi);
    return values;
}

FptReport run_fpt_adaptive(const ProcessSpec& spec, const SupportTree& tree,
                           const FptConfig& config) {
    validate(tree, config);
    const FptPlans plans = make_plans(spec, tree, config);
    FptReport report;
    report.paths.resize(config.paths);
    const auto n = static_cast<std::int64_t>(config.paths);
#pragma omp parallel
    {
        std::vector<double> values;
        std::vector<double> xi;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t p = 0; p < n; ++p) {
            const std::int64_t refined = adaptive_fill(
                plans, config, config.first_path_id + static_cast<std::uint64_t>(p), values, xi);
            FptPath& out = report.paths[static_cast<std::size_t>(p)];
            out = first_crossing(plans.fine_times, values, config.boundary);
            out.refined_cells = refined;
        }
    }
    const double cells_per_path =
        std::ldexp(1.0, config.target_level) - std::ldexp(1.0, config.coarse_level);
    summarize(report, config, cells_per_path * static_cast<double>(config.paths));
    return report;
}

FptReport run_fpt_exhaustive(const ProcessSpec& spec, const SupportTree& tree,
                             const FptConfig& config) {
    validate(tree, config);
    const Basis basis(spec, tree, config.target_level);
    const SynthesisPlan plan = make_synthesis_plan(basis, prefix_order_times(tree, config.target_level));
    const PathBatch batch =
        parallel::synthesize(plan, config.seed, config.first_path_id, config.paths);
    const double cells_per_path =
        std::ldexp(1.0, config.target_level) - std::ldexp(1.0, config.coarse_level);
    FptReport report;
    report.paths.resize(config.paths);
    for (std::size_t p = 0; p < config.paths; ++p) {
        report.paths[p] = first_crossing(batch.times, batch.row(p), config.boundary);
        report.paths[p].refined_cells = static_cast<std::int64_t>(cells_per_path);
    }
    summarize(report, config, cells_per_path * static_cast<double>(config.paths));
    return report;
}

} // namespace gmp

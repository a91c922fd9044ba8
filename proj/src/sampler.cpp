#include "gmp/sampler.hpp"

#include "gmp/error.hpp"
#include "gmp/format.hpp"

#include <algorithm>
#include <cmath>

namespace gmp {

CoefficientTable sample_coefficients(KeyScope scope, int levels) {
    if (levels < 0 || levels > SupportTree::kMaxDepth) {
        throw InvalidArgument("coefficient table level outside 0.." +
                              std::to_string(SupportTree::kMaxDepth));
    }
    CoefficientTable table;
    table.scope = scope;
    table.levels = levels;
    const std::size_t count = std::size_t{1} << levels;
    table.xi.resize(count);
    for (std::size_t flat = 0; flat < count; ++flat) {
        table.xi[flat] = keyed_normal(scope, node_from_flat(static_cast<std::int64_t>(flat)));
    }
    return table;
}

PathSample synthesize_path(const Basis& basis, const CoefficientTable& xi,
                           std::span<const double> grid) {
    if (xi.levels < basis.levels()) {
        throw InvalidArgument("coefficient table covers fewer levels than the basis");
    }
    PathSample path;
    path.times.assign(grid.begin(), grid.end());
    path.values.resize(grid.size());
    path.level = basis.levels();
    path.scope = xi.scope;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0.0;
        basis.for_each_active(grid[i], [&](std::int64_t flat, double w) {
            sum += w * xi.xi[static_cast<std::size_t>(flat)];
        });
        path.values[i] = sum;
    }
    return path;
}

PathSample synthesize_path(const ProcessSpec& spec, const SupportTree& tree,
                           const CoefficientTable& xi, int levels,
                           std::span<const double> grid) {
    return synthesize_path(Basis(spec, tree, levels), xi, grid);
}

ConditionalExpectationPath::ConditionalExpectationPath(ProcessSpec spec,
                                                       std::vector<double> times,
                                                       std::vector<double> values)
    : spec_(std::move(spec)), times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size() || times_.size() < 2) {
        throw InvalidArgument("conditional expectation needs matching times/values (>= 2)");
    }
    h_.resize(times_.size());
    g_.resize(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw InvalidArgument("conditional expectation: times must be strictly increasing");
        }
        h_[i] = spec_.h(times_[i]);
        g_[i] = spec_.g(times_[i]);
        if (i > 0 && !(h_[i] > h_[i - 1])) {
            throw DegenerateIncrement("conditional expectation: flat h on [" +
                                      format_real(times_[i - 1]) + ", " +
                                      format_real(times_[i]) + "]");
        }
    }
}

double ConditionalExpectationPath::operator()(double t) const {
    if (t < times_.front() || t > times_.back()) {
        throw InvalidArgument("conditional expectation evaluated outside its grid");
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    if (times_[j - 1] == t) {
        return values_[j - 1];
    }
    const std::size_t i = j - 1;
    const double ht = spec_.h(t);
    const double gt = spec_.g(t);
    const double total = h_[j] - h_[i];
    return gt / g_[i] * ((h_[j] - ht) / total) * values_[i] +
           gt / g_[j] * ((ht - h_[i]) / total) * values_[j];
}

ConditionalExpectationPath conditional_expectation_path(const ProcessSpec& spec,
                                                        const PathSample& on_grid) {
    return ConditionalExpectationPath(spec, on_grid.times, on_grid.values);
}

CellRule cell_rule(const ProcessSpec& spec, const Support& cell) {
    try {
        const BridgeWeights w = bridge_weights(spec, cell.l, cell.m, cell.r);
        return {w.left, w.right, std::sqrt(w.variance), w.variance == 0.0};
    } catch (const DegenerateIncrement&) {
        // h flat on [l, m]: X_m is pinned to g(m)/g(l) * X_l.
        return {spec.g(cell.m) / spec.g(cell.l), 0.0, 0.0, true};
    }
}

PathSample refine(const ProcessSpec& spec, const SupportTree& tree, const PathSample& path,
                  KeyScope scope) {
    const int level = path.level;
    if (level + 1 > tree.depth()) {
        throw InvalidArgument("refine: tree depth " + std::to_string(tree.depth()) +
                              " cannot hold level " + std::to_string(level + 1));
    }
    const std::size_t cells = std::size_t{1} << level;
    if (path.times.size() != cells + 1 || path.values.size() != cells + 1) {
        throw InvalidArgument("refine: path is not on the level-" + std::to_string(level) +
                              " grid");
    }
    PathSample out;
    out.level = level + 1;
    out.scope = scope;
    out.degenerate_cells = path.degenerate_cells;
    out.times.resize(2 * cells + 1);
    out.values.resize(2 * cells + 1);
    for (std::size_t k = 0; k < cells; ++k) {
        const Support cell = tree.node(level + 1, static_cast<std::int64_t>(k));
        if (cell.l != path.times[k] || cell.r != path.times[k + 1]) {
            throw InvalidArgument("refine: path times do not match the tree at cell " +
                                  std::to_string(k));
        }
        const CellRule rule = cell_rule(spec, cell);
        const double x = path.values[k];
        const double z = path.values[k + 1];
        double mid = rule.left * x + rule.right * z;
        if (rule.sd > 0.0) {
            mid += rule.sd * keyed_normal(scope, {level + 1, static_cast<std::int64_t>(k)});
        }
        out.degenerate_cells += rule.degenerate ? 1 : 0;
        out.times[2 * k] = path.times[k];
        out.values[2 * k] = x;
        out.times[2 * k + 1] = cell.m;
        out.values[2 * k + 1] = mid;
    }
    out.times[2 * cells] = path.times[cells];
    out.values[2 * cells] = path.values[cells];
    return out;
}

} // namespace gmp

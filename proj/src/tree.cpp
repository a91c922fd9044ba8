#include "gmp/tree.hpp"

#include "gmp/error.hpp"
#include "gmp/format.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace gmp {

NodeIndex node_from_flat(std::int64_t flat) {
    if (flat < 0) {
        throw InvalidArgument("negative flat node index");
    }
    if (flat == 0) {
        return {0, 0};
    }
    const int n = std::bit_width(static_cast<std::uint64_t>(flat));
    return {n, flat - (std::int64_t{1} << (n - 1))};
}

Support SupportTree::node(int n, std::int64_t k) const {
    if (n < 0 || n > depth_) {
        throw InvalidArgument("tree level " + std::to_string(n) + " outside 0.." +
                              std::to_string(depth_));
    }
    if (n == 0) {
        if (k != 0) {
            throw InvalidArgument("level 0 has the single node (0, 0)");
        }
        return {0.0, 1.0, 1.0};
    }
    if (k < 0 || k >= (std::int64_t{1} << (n - 1))) {
        throw InvalidArgument("node position " + std::to_string(k) + " outside level " +
                              std::to_string(n));
    }
    if (is_uniform()) {
        const double kk = static_cast<double>(k);
        return {std::ldexp(2.0 * kk, -n), std::ldexp(2.0 * kk + 1.0, -n),
                std::ldexp(2.0 * (kk + 1.0), -n)};
    }
    return nodes_[static_cast<std::size_t>(flat_index({n, k}))];
}

double SupportTree::mesh(int n) const {
    if (n < 1 || n > depth_) {
        throw InvalidArgument("mesh is defined for levels 1.." + std::to_string(depth_));
    }
    if (is_uniform()) {
        return std::ldexp(1.0, -n + 1);
    }
    double widest = 0.0;
    const std::int64_t count = std::int64_t{1} << (n - 1);
    for (std::int64_t k = 0; k < count; ++k) {
        const Support s = node(n, k);
        widest = std::max(widest, s.r - s.l);
    }
    return widest;
}

std::int64_t SupportTree::locate(int n, double t) const {
    if (n < 1 || n > depth_) {
        throw InvalidArgument("locate: level outside 1.." + std::to_string(depth_));
    }
    const std::int64_t last = (std::int64_t{1} << (n - 1)) - 1;
    if (is_uniform()) {
        const double scaled = std::floor(std::ldexp(t, n - 1));
        return std::clamp(static_cast<std::int64_t>(scaled), std::int64_t{0}, last);
    }
    std::int64_t k = 0;
    for (int level = 1; level < n; ++level) {
        k = 2 * k + (t < node(level, k).m ? 0 : 1);
    }
    return k;
}

SupportTree uniform_tree(int depth) {
    if (depth < 0 || depth > SupportTree::kMaxDepth) {
        throw InvalidArgument("uniform tree depth " + std::to_string(depth) + " outside 0.." +
                              std::to_string(SupportTree::kMaxDepth));
    }
    SupportTree tree;
    tree.depth_ = depth;
    tree.description_ = "uniform";
    return tree;
}

SupportTree general_tree(int depth, const std::function<double(double, double)>& rule,
                         std::string name) {
    if (depth < 0 || depth > SupportTree::kMaxGeneralDepth) {
        throw InvalidArgument("general tree depth " + std::to_string(depth) + " outside 0.." +
                              std::to_string(SupportTree::kMaxGeneralDepth));
    }
    SupportTree tree;
    tree.depth_ = depth;
    tree.description_ = std::move(name);
    tree.nodes_.resize(std::size_t{1} << depth);
    tree.nodes_[0] = {0.0, 1.0, 1.0};
    for (int n = 1; n <= depth; ++n) {
        const std::int64_t count = std::int64_t{1} << (n - 1);
        for (std::int64_t k = 0; k < count; ++k) {
            double l = 0.0;
            double r = 1.0;
            if (n > 1) {
                const Support parent = tree.nodes_[static_cast<std::size_t>(flat_index({n - 1, k / 2}))];
                l = (k % 2 == 0) ? parent.l : parent.m;
                r = (k % 2 == 0) ? parent.m : parent.r;
            }
            const double m = rule(l, r);
            if (!(m > l && m < r)) {
                throw InvalidArgument("midpoint rule returned " + format_real(m) +
                                      " outside the open interval (" + format_real(l) + ", " +
                                      format_real(r) + ")");
            }
            tree.nodes_[static_cast<std::size_t>(flat_index({n, k}))] = {l, m, r};
        }
    }
    return tree;
}

std::vector<double> prefix_order_times(const SupportTree& tree, int levels) {
    if (levels < 0 || levels > tree.depth()) {
        throw InvalidArgument("prefix order at level " + std::to_string(levels) +
                              " exceeds tree depth " + std::to_string(tree.depth()));
    }
    const std::size_t count = (std::size_t{1} << levels) + 1;
    std::vector<double> times(count);
    if (tree.is_uniform()) {
        for (std::size_t i = 0; i < count; ++i) {
            times[i] = std::ldexp(static_cast<double>(i), -levels);
        }
        return times;
    }
    // Level-n split points sit at odd positions of the level-n grid.
    times[0] = 0.0;
    times[count - 1] = 1.0;
    for (int n = 1; n <= levels; ++n) {
        const std::size_t stride = std::size_t{1} << (levels - n);
        const std::int64_t nodes = std::int64_t{1} << (n - 1);
        for (std::int64_t k = 0; k < nodes; ++k) {
            times[(2 * static_cast<std::size_t>(k) + 1) * stride] = tree.node(n, k).m;
        }
    }
    return times;
}

std::optional<NodeIndex> node_at_midpoint(const SupportTree& tree, int levels, double t) {
    if (levels > tree.depth()) {
        throw InvalidArgument("node_at_midpoint: level exceeds tree depth");
    }
    for (int n = 1; n <= levels; ++n) {
        const std::int64_t k = tree.locate(n, t);
        if (tree.node(n, k).m == t) {
            return NodeIndex{n, k};
        }
    }
    return std::nullopt;
}

} // namespace gmp

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gmp {

/// Node (n, k) of the support tree. Level 0 holds the single root element
/// (0, 0); level n >= 1 holds k = 0 .. 2^{n-1} - 1.
struct NodeIndex {
    int n = 0;
    std::int64_t k = 0;

    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Flat enumeration [n, k] = 2^{n-1} + k, with [0, 0] = 0.
constexpr std::int64_t flat_index(NodeIndex node) {
    return node.n == 0 ? 0 : (std::int64_t{1} << (node.n - 1)) + node.k;
}

NodeIndex node_from_flat(std::int64_t flat);

/// Support [l, r] of a node and its split point m. The root element (0, 0)
/// is not split; it is reported as (0, 1, 1).
struct Support {
    double l = 0.0;
    double m = 0.0;
    double r = 0.0;
};

/// Nested binary tree of supports S_{n,k} over [0, 1].
///
/// Level-1 is the whole interval split at m_{1,0}; the children of (n, k)
/// are (n+1, 2k) = [l, m] and (n+1, 2k+1) = [m, r]. Intervals are
/// half-open [l, r) except that t = 1 belongs to the last interval of
/// every level.
///
/// Uniform trees are evaluated from the dyadic formulas and are exact in
/// binary floating point; general trees store their endpoints.
class SupportTree {
  public:
    static constexpr int kMaxDepth = 30;
    static constexpr int kMaxGeneralDepth = 24;

    int depth() const { return depth_; }
    bool is_uniform() const { return nodes_.empty(); }
    const std::string& description() const { return description_; }

    /// Requires 0 <= n <= depth and 0 <= k < 2^{n-1} (k = 0 at n = 0).
    Support node(int n, std::int64_t k) const;
    Support node(NodeIndex idx) const { return node(idx.n, idx.k); }

    /// max_k (r_{n,k} - l_{n,k}) for 1 <= n <= depth.
    double mesh(int n) const;

    /// Position k of the level-n node whose interval contains t.
    std::int64_t locate(int n, double t) const;

  private:
    friend SupportTree uniform_tree(int depth);
    friend SupportTree general_tree(int depth,
                                    const std::function<double(double, double)>& rule,
                                    std::string name);

    int depth_ = 0;
    std::string description_;
    std::vector<Support> nodes_; // indexed by flat index; slot 0 is the root
};

SupportTree uniform_tree(int depth);

/// Builds the tree by recursively splitting each support at rule(l, r),
/// which must lie strictly inside (l, r).
SupportTree general_tree(int depth, const std::function<double(double, double)>& rule,
                         std::string name = "general");

/// Sorted t_0 = 0 < t_1 < ... < t_{2^N} = 1: the root endpoints and all
/// split points of levels 1..N.
std::vector<double> prefix_order_times(const SupportTree& tree, int levels);

/// The node of level <= levels whose split point is exactly t, if any.
std::optional<NodeIndex> node_at_midpoint(const SupportTree& tree, int levels, double t);

} // namespace gmp

#pragma once

#include "gmp/basis.hpp"
#include "gmp/process.hpp"
#include "gmp/rng.hpp"
#include "gmp/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gmp {

/// xi_{n,k} for all nodes of levels 0..N, indexed by flat index.
struct CoefficientTable {
    KeyScope scope;
    int levels = 0;
    std::vector<double> xi;

    double operator[](NodeIndex idx) const { return xi[static_cast<std::size_t>(flat_index(idx))]; }
};

CoefficientTable sample_coefficients(KeyScope scope, int levels);

/// A sample path on a finite time grid.
struct PathSample {
    std::vector<double> times;
    std::vector<double> values;
    int level = 0;
    KeyScope scope;
    /// Cells where h was flat and the value was propagated deterministically.
    int degenerate_cells = 0;
};

/// X^N(t) = sum_{n <= N} sum_k Psi_{n,k}(t) xi_{n,k} at each grid time,
/// visiting only the N + 1 elements whose supports contain t.
PathSample synthesize_path(const Basis& basis, const CoefficientTable& xi,
                           std::span<const double> grid);

PathSample synthesize_path(const ProcessSpec& spec, const SupportTree& tree,
                           const CoefficientTable& xi, int levels,
                           std::span<const double> grid);

/// Z^N: on each cell [t_x, t_z] of the conditioning grid, the bridge mean
/// of X given the values at both ends.
class ConditionalExpectationPath {
  public:
    /// Throws DegenerateIncrement when h(t_z) == h(t_x) on some cell.
    ConditionalExpectationPath(ProcessSpec spec, std::vector<double> times,
                               std::vector<double> values);

    double operator()(double t) const;

    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }

  private:
    ProcessSpec spec_;
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> h_;
    std::vector<double> g_;
};

ConditionalExpectationPath conditional_expectation_path(const ProcessSpec& spec,
                                                        const PathSample& on_grid);

/// Midpoint draw of one refinement cell: value = left * x + right * z + sd * xi.
/// Flat cells (h(m) == h(l)) propagate g(m)/g(l) * x with sd = 0.
struct CellRule {
    double left = 0.0;
    double right = 0.0;
    double sd = 0.0;
    bool degenerate = false;
};

CellRule cell_rule(const ProcessSpec& spec, const Support& cell);

/// Extends a path from the level-N grid to the level-(N+1) grid: each new
/// split point m_{N+1,k} is drawn from the bridge law between its framing
/// values with xi_{N+1,k} keyed on the path's scope. Existing values are
/// copied bit-for-bit.
PathSample refine(const ProcessSpec& spec, const SupportTree& tree, const PathSample& path,
                  KeyScope scope);

inline PathSample refine(const ProcessSpec& spec, const SupportTree& tree,
                         const PathSample& path) {
    return refine(spec, tree, path, path.scope);
}

} // namespace gmp

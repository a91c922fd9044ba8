#pragma once

#include "gmp/process.hpp"
#include "gmp/tree.hpp"

#include <cstdint>
#include <vector>

namespace gmp {

/// Normalization of the two branches of Psi_{n,k} / Phi_{n,k}.
struct Coefficients {
    double L = 0.0;
    double R = 0.0;
};

/// One basis element together with h memoized at its support endpoints.
/// For the root element (0, 0), L = 1 / sqrt(h(1) - h(0)) and R is unused.
struct BasisElement {
    NodeIndex index;
    Support support;
    double L = 0.0;
    double R = 0.0;
    double hl = 0.0;
    double hm = 0.0;
    double hr = 0.0;
};

/// L = sqrt((h(r)-h(m)) / ((h(r)-h(l)) (h(m)-h(l)))),
/// R = sqrt((h(m)-h(l)) / ((h(r)-h(l)) (h(r)-h(m)))).
/// Throws DegenerateIncrement when h(m) == h(l) or h(r) == h(m).
Coefficients coefficients(const ProcessSpec& spec, const SupportTree& tree, int n,
                          std::int64_t k);

BasisElement make_element(const ProcessSpec& spec, const SupportTree& tree, NodeIndex idx);

/// Psi_{n,k}: L g(t) (h(t) - h(l)) on [l, m], R g(t) (h(r) - h(t)) on (m, r),
/// zero elsewhere. At t = m the left formula is used; both agree there.
double psi(const ProcessSpec& spec, const BasisElement& elem, double t);

/// Psi_{0,0}(t) = g(t) (h(t) - h(0)) / sqrt(h(1) - h(0)).
double psi00(const ProcessSpec& spec, double t);

/// Phi_{n,k}: L f(t) on [l, m), -R f(t) on [m, r) (t = 1 closes the last
/// interval), zero elsewhere. For (0, 0): f(t) / sqrt(h(1) - h(0)).
double phi(const ProcessSpec& spec, const BasisElement& elem, double t);

double phi00(const ProcessSpec& spec, double t);

/// rho^N(t, s) = sum_{n <= N} sum_k Psi_{n,k}(t) Psi_{n,k}(s), summed over
/// the single chain of supports containing t (and s).
double partial_covariance(const ProcessSpec& spec, const SupportTree& tree, int levels,
                          double t, double s);

/// All elements of levels 0..N for one (spec, tree), with h cached at every
/// support endpoint. Immutable; safe to share across threads.
class Basis {
  public:
    Basis(ProcessSpec spec, SupportTree tree, int levels);

    const ProcessSpec& spec() const { return spec_; }
    const SupportTree& tree() const { return tree_; }
    int levels() const { return levels_; }

    /// Element by flat index [n, k].
    const BasisElement& element(std::int64_t flat) const {
        return elements_[static_cast<std::size_t>(flat)];
    }
    const BasisElement& element(NodeIndex idx) const { return element(flat_index(idx)); }
    std::size_t size() const { return elements_.size(); }

    /// Calls visit(flat, Psi_{n,k}(t)) for the root and, per level, the one
    /// element whose interval contains t. Evaluates h(t) and g(t) once.
    template <class Visit>
    void for_each_active(double t, Visit&& visit) const;

    double partial_covariance(int levels, double t, double s) const;

  private:
    ProcessSpec spec_;
    SupportTree tree_;
    int levels_;
    std::vector<BasisElement> elements_;
};

namespace detail {

/// Psi for a known h(t), g(t).
inline double psi_value(const BasisElement& e, double t, double ht, double gt) {
    if (e.index.n == 0) {
        return gt * (ht - e.hl) * e.L;
    }
    const Support& s = e.support;
    if (t < s.l || t > s.r) {
        return 0.0;
    }
    if (t <= s.m) {
        return e.L * gt * (ht - e.hl);
    }
    if (t >= s.r) {
        return 0.0;
    }
    return e.R * gt * (e.hr - ht);
}

} // namespace detail

template <class Visit>
void Basis::for_each_active(double t, Visit&& visit) const {
    const double ht = spec_.h(t);
    const double gt = spec_.g(t);
    visit(std::int64_t{0}, detail::psi_value(elements_[0], t, ht, gt));
    for (int n = 1; n <= levels_; ++n) {
        const std::int64_t flat = flat_index({n, tree_.locate(n, t)});
        visit(flat, detail::psi_value(elements_[static_cast<std::size_t>(flat)], t, ht, gt));
    }
}

} // namespace gmp

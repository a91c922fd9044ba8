#include "gmp/basis.hpp"

#include "gmp/error.hpp"
#include "gmp/format.hpp"

#include <cmath>

namespace gmp {

namespace {

Coefficients coefficients_from_h(double hl, double hm, double hr, NodeIndex idx) {
    const double left = hm - hl;
    const double right = hr - hm;
    if (!(left > 0.0) || !(right > 0.0)) {
        throw DegenerateIncrement("degenerate support for basis element (" +
                                  std::to_string(idx.n) + ", " + std::to_string(idx.k) +
                                  "): h is flat on one branch");
    }
    const double total = hr - hl;
    return {std::sqrt(right / (total * left)), std::sqrt(left / (total * right))};
}

double root_scale(const ProcessSpec& spec) {
    const double total = spec.h(1.0) - spec.h(0.0);
    if (!(total > 0.0)) {
        throw DegenerateIncrement("h(1) == h(0): the process is identically zero");
    }
    return 1.0 / std::sqrt(total);
}

} // namespace

Coefficients coefficients(const ProcessSpec& spec, const SupportTree& tree, int n,
                          std::int64_t k) {
    if (n < 1) {
        throw InvalidArgument("coefficients are defined for levels n >= 1");
    }
    const Support s = tree.node(n, k);
    return coefficients_from_h(spec.h(s.l), spec.h(s.m), spec.h(s.r), {n, k});
}

BasisElement make_element(const ProcessSpec& spec, const SupportTree& tree, NodeIndex idx) {
    BasisElement e;
    e.index = idx;
    e.support = tree.node(idx);
    e.hl = spec.h(e.support.l);
    e.hm = spec.h(e.support.m);
    e.hr = spec.h(e.support.r);
    if (idx.n == 0) {
        e.L = root_scale(spec);
        e.R = 0.0;
        return e;
    }
    const Coefficients c = coefficients_from_h(e.hl, e.hm, e.hr, idx);
    e.L = c.L;
    e.R = c.R;
    return e;
}

double psi(const ProcessSpec& spec, const BasisElement& elem, double t) {
    if (elem.index.n != 0 && (t <= elem.support.l || t >= elem.support.r)) {
        return 0.0;
    }
    return detail::psi_value(elem, t, spec.h(t), spec.g(t));
}

double psi00(const ProcessSpec& spec, double t) {
    return spec.g(t) * (spec.h(t) - spec.h(0.0)) * root_scale(spec);
}

double phi(const ProcessSpec& spec, const BasisElement& elem, double t) {
    if (elem.index.n == 0) {
        return spec.f(t) * elem.L;
    }
    const Support& s = elem.support;
    const bool closes_last = (t == 1.0 && s.r == 1.0);
    if (t < s.l || (t >= s.r && !closes_last)) {
        return 0.0;
    }
    return t < s.m ? elem.L * spec.f(t) : -elem.R * spec.f(t);
}

double phi00(const ProcessSpec& spec, double t) { return spec.f(t) * root_scale(spec); }

double partial_covariance(const ProcessSpec& spec, const SupportTree& tree, int levels,
                          double t, double s) {
    if (levels < 0 || levels > tree.depth()) {
        throw InvalidArgument("partial covariance: level exceeds tree depth");
    }
    double sum = psi00(spec, t) * psi00(spec, s);
    for (int n = 1; n <= levels; ++n) {
        const std::int64_t k = tree.locate(n, t);
        if (tree.locate(n, s) != k) {
            // Supports are nested: once the chains split they never rejoin.
            break;
        }
        const BasisElement e = make_element(spec, tree, {n, k});
        sum += psi(spec, e, t) * psi(spec, e, s);
    }
    return sum;
}

Basis::Basis(ProcessSpec spec, SupportTree tree, int levels)
    : spec_(std::move(spec)), tree_(std::move(tree)), levels_(levels) {
    if (levels_ < 0 || levels_ > tree_.depth()) {
        throw InvalidArgument("basis level " + std::to_string(levels_) +
                              " exceeds tree depth " + std::to_string(tree_.depth()));
    }
    const std::size_t count = std::size_t{1} << levels_;
    elements_.reserve(count);
    for (std::size_t flat = 0; flat < count; ++flat) {
        elements_.push_back(make_element(spec_, tree_, node_from_flat(static_cast<std::int64_t>(flat))));
    }
}

double Basis::partial_covariance(int levels, double t, double s) const {
    if (levels < 0 || levels > levels_) {
        throw InvalidArgument("partial covariance: level exceeds basis level");
    }
    const double ht = spec_.h(t);
    const double gt = spec_.g(t);
    const double hs = spec_.h(s);
    const double gs = spec_.g(s);
    double sum = detail::psi_value(elements_[0], t, ht, gt) *
                 detail::psi_value(elements_[0], s, hs, gs);
    for (int n = 1; n <= levels; ++n) {
        const std::int64_t k = tree_.locate(n, t);
        if (tree_.locate(n, s) != k) {
            break;
        }
        const BasisElement& e = elements_[static_cast<std::size_t>(flat_index({n, k}))];
        sum += detail::psi_value(e, t, ht, gt) * detail::psi_value(e, s, hs, gs);
    }
    return sum;
}

} // namespace gmp

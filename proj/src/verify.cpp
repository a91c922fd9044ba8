#include "gmp/verify.hpp"

#include "gmp/basis.hpp"
#include "gmp/format.hpp"
#include "gmp/measures.hpp"
#include "gmp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gmp {

namespace {

std::string node_name(NodeIndex idx) {
    return "(" + std::to_string(idx.n) + "," + std::to_string(idx.k) + ")";
}

bool nested(const Support& inner, const Support& outer) {
    return inner.l >= outer.l && inner.r <= outer.r;
}

void record(CheckResult& res, double err, const std::string& where) {
    if (err > res.measured || std::isnan(err)) {
        res.measured = err;
        res.worst = where;
    }
}

void finish(CheckResult& res) { res.passed = !std::isnan(res.measured) && res.measured <= res.tolerance; }

} // namespace

CheckResult check_orthonormality(const ProcessSpec& spec, const SupportTree& tree, int levels,
                                 int panels, double tol) {
    CheckResult res{"orthonormality", false, 0.0, tol, ""};
    const Basis basis(spec, tree, levels);
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const BasisElement& ea = basis.element(static_cast<std::int64_t>(a));
        for (std::size_t b = a; b < basis.size(); ++b) {
            const BasisElement& eb = basis.element(static_cast<std::int64_t>(b));
            // Supports are nested or disjoint; disjoint pairs integrate to 0.
            const Support& small = eb.support;
            if (!nested(small, ea.support)) {
                continue;
            }
            const double cuts[] = {ea.support.m, small.l, small.m};
            const int n = std::max(2, static_cast<int>(panels * (small.r - small.l)));
            const double ip = piecewise_simpson(
                [&](double t) { return phi(spec, ea, t) * phi(spec, eb, t); }, small.l, small.r,
                cuts, n);
            const double err = std::abs(ip - (a == b ? 1.0 : 0.0));
            record(res, err, "<" + node_name(ea.index) + "," + node_name(eb.index) + ">");
        }
    }
    finish(res);
    return res;
}

CheckResult check_zero_mean(const ProcessSpec& spec, const SupportTree& tree, int levels,
                            int panels, double tol) {
    CheckResult res{"zero_mean_against_f", false, 0.0, tol, ""};
    const Basis basis(spec, tree, levels);
    for (std::size_t a = 1; a < basis.size(); ++a) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(a));
        const double cuts[] = {e.support.m};
        const int n = std::max(2, static_cast<int>(panels * (e.support.r - e.support.l)));
        const double ip = piecewise_simpson([&](double t) { return spec.f(t) * phi(spec, e, t); },
                                            e.support.l, e.support.r, cuts, n);
        record(res, std::abs(ip), node_name(e.index));
    }
    finish(res);
    return res;
}

CheckResult check_reproducing_identity(const ProcessSpec& spec, const SupportTree& tree,
                                       int levels, int samples, std::uint64_t seed, int panels,
                                       double tol) {
    CheckResult res{"reproducing_identity", false, 0.0, tol, ""};
    const Basis basis(spec, tree, levels);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(pick(rng)));
        const Support& s = e.support;
        const double t = s.l + unit(rng) * (s.r - s.l);
        const double gt = spec.g(t);
        const double cuts[] = {s.l, s.m, s.r};
        const double lo = e.index.n == 0 ? 0.0 : s.l;
        const int n = std::max(2, static_cast<int>(panels * (t - lo)));
        const double integral = piecewise_simpson(
            [&](double u) { return gt * spec.f(u) * phi(spec, e, u); }, lo, t, cuts, n);
        const double direct = psi(spec, e, t);
        record(res, std::abs(direct - integral), node_name(e.index) + " t=" + format_real(t));
    }
    finish(res);
    return res;
}

CheckResult check_bridge_oracle(const ProcessSpec& spec, int samples, std::uint64_t seed,
                                double tol) {
    CheckResult res{"bridge_vs_oracle", false, 0.0, tol, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        double t[3];
        do {
            for (double& v : t) {
                v = unit(rng);
            }
            std::sort(t, t + 3);
        } while (t[1] - t[0] < 1e-3 || t[2] - t[1] < 1e-3);
        const double x = normal(rng) * std::sqrt(covariance(spec, t[0], t[0]));
        const double z = normal(rng) * std::sqrt(covariance(spec, t[2], t[2]));
        const BridgeLaw direct = bridge_law(spec, t[0], x, t[2], z, t[1]);
        const BridgeLaw oracle = gaussian_conditional_oracle(gaussian_vector(spec, t), x, z);
        const double err =
            std::max(std::abs(direct.mean - oracle.mean) / std::max(1.0, std::abs(oracle.mean)),
                     std::abs(direct.variance - oracle.variance) /
                         std::max(1.0, std::abs(oracle.variance)));
        record(res, err,
               "t=(" + format_real(t[0]) + "," + format_real(t[1]) + "," + format_real(t[2]) + ")");
    }
    finish(res);
    return res;
}

CheckResult check_coefficient_identities(const ProcessSpec& spec, const SupportTree& tree,
                                         int levels, double tol) {
    CheckResult res{"coefficient_identities", false, 0.0, tol, ""};
    const Basis basis(spec, tree, levels);
    for (std::size_t a = 1; a < basis.size(); ++a) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(a));
        const double dl = e.hm - e.hl;
        const double dr = e.hr - e.hm;
        const double norm = e.L * e.L * dl + e.R * e.R * dr;
        const double ortho = (e.L * dl - e.R * dr) / (e.L * dl);
        record(res, std::max(std::abs(norm - 1.0), std::abs(ortho)), node_name(e.index));
    }
    finish(res);
    return res;
}

CheckResult check_covariance_convergence(const ProcessSpec& spec, const SupportTree& tree,
                                         int levels, double tol) {
    CheckResult res{"covariance_convergence", false, 0.0, tol, ""};
    const Basis basis(spec, tree, levels);
    const std::vector<double> grid = prefix_order_times(tree, levels);
    for (double t : grid) {
        for (double s : grid) {
            const double exact = covariance(spec, t, s);
            const double err =
                std::abs(basis.partial_covariance(levels, t, s) - exact) / std::max(1.0, std::abs(exact));
            record(res, err, "on-grid (" + format_real(t) + "," + format_real(s) + ")");
        }
    }
    // Off-grid diagonal: partial sums of squares grow towards rho(t, t).
    for (double t : uniform_grid(33)) {
        const double exact = covariance(spec, t, t);
        double prev = 0.0;
        for (int n = 0; n <= levels; ++n) {
            const double cur = basis.partial_covariance(n, t, t);
            const double slack = tol * std::max(1.0, std::abs(exact));
            if (cur < prev - slack || cur > exact + slack) {
                record(res, std::max(prev - cur, cur - exact),
                       "diagonal t=" + format_real(t) + " n=" + std::to_string(n));
            }
            prev = cur;
        }
    }
    finish(res);
    return res;
}

CheckResult check_sup_bound(const ProcessSpec& spec, const SupportTree& tree, int levels,
                            int points) {
    CheckResult res{"sup_bound", false, 0.0, 0.0, ""};
    const double norms = sup_norm([&](double t) { return spec.g(t); }) *
                         sup_norm([&](double t) { return spec.f(t); });
    const Basis basis(spec, tree, levels);
    for (std::size_t a = 1; a < basis.size(); ++a) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(a));
        const Support& s = e.support;
        const double bound = std::sqrt((s.r - s.m) * (s.m - s.l) / (s.r - s.l)) * norms;
        double peak = 0.0;
        for (int i = 0; i <= points; ++i) {
            const double t = s.l + (s.r - s.l) * static_cast<double>(i) / points;
            peak = std::max(peak, std::abs(psi(spec, e, t)));
        }
        peak = std::max(peak, std::abs(psi(spec, e, s.m)));
        // Excess over the bound, relative; <= 0 means the bound holds.
        record(res, (peak - bound) / bound, node_name(e.index));
    }
    res.measured = std::max(res.measured, 0.0);
    res.tolerance = 1e-12;
    finish(res);
    return res;
}

CheckResult check_coarse_vanishing(const ProcessSpec& spec, const SupportTree& tree, int levels) {
    CheckResult res{"coarse_grid_vanishing", false, 0.0, 0.0, ""};
    const Basis basis(spec, tree, levels);
    for (std::size_t a = 1; a < basis.size(); ++a) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(a));
        for (double t : prefix_order_times(tree, e.index.n - 1)) {
            record(res, std::abs(psi(spec, e, t)), node_name(e.index) + " t=" + format_real(t));
        }
    }
    finish(res);
    return res;
}

std::vector<CheckResult> run_invariant_suite(const ProcessSpec& spec, const SupportTree& tree,
                                             int levels) {
    const int small = std::min(levels, 5);
    return {check_orthonormality(spec, tree, small),
            check_zero_mean(spec, tree, small),
            check_reproducing_identity(spec, tree, small),
            check_bridge_oracle(spec),
            check_coefficient_identities(spec, tree, levels),
            check_covariance_convergence(spec, tree, std::min(levels, 6)),
            check_sup_bound(spec, tree, levels),
            check_coarse_vanishing(spec, tree, std::min(levels, 8))};
}

} // namespace gmp

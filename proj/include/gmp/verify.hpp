#pragma once

#include "gmp/process.hpp"
#include "gmp/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmp {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    /// Where the largest error occurred.
    std::string worst;
};

/// Max-entrywise |Gram - I| of {Phi_{n,k} : n <= levels} under composite
/// Simpson with `panels` panels per unit length.
CheckResult check_orthonormality(const ProcessSpec& spec, const SupportTree& tree, int levels,
                                 int panels = 1 << 12, double tol = 1e-8);

/// |(f, Phi_{n,k})| for 1 <= n <= levels.
CheckResult check_zero_mean(const ProcessSpec& spec, const SupportTree& tree, int levels,
                            int panels = 1 << 12, double tol = 1e-10);

/// Psi_{n,k}(t) against int_0^t g(t) f(u) Phi_{n,k}(u) du at random (n, k, t).
CheckResult check_reproducing_identity(const ProcessSpec& spec, const SupportTree& tree,
                                       int levels, int samples = 20, std::uint64_t seed = 1,
                                       int panels = 1 << 12, double tol = 1e-8);

/// bridge_law against the 3x3 Schur-complement oracle at random instances;
/// error is |a - b| / max(1, |b|).
CheckResult check_bridge_oracle(const ProcessSpec& spec, int samples = 100,
                                std::uint64_t seed = 2, double tol = 1e-10);

/// Unit norm and f-orthogonality of the (L, R) coefficients.
CheckResult check_coefficient_identities(const ProcessSpec& spec, const SupportTree& tree,
                                         int levels, double tol = 1e-12);

/// rho^N == rho on the level-N grid (relative), and rho^n(t, t)
/// non-decreasing in n and bounded by rho(t, t) on an off-grid sample.
CheckResult check_covariance_convergence(const ProcessSpec& spec, const SupportTree& tree,
                                         int levels, double tol = 1e-10);

/// max_t |Psi_{n,k}(t)| <= sqrt((r-m)(m-l)/(r-l)) |g|_inf |f|_inf on a
/// grid of `points` samples per support.
CheckResult check_sup_bound(const ProcessSpec& spec, const SupportTree& tree, int levels,
                            int points = 1 << 10);

/// Psi_{n,k} vanishes on the level-(n-1) grid.
CheckResult check_coarse_vanishing(const ProcessSpec& spec, const SupportTree& tree, int levels);

/// Every check above; the Gram and zero-mean suites use levels <= 5.
std::vector<CheckResult> run_invariant_suite(const ProcessSpec& spec, const SupportTree& tree,
                                             int levels);

} // namespace gmp

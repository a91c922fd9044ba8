#pragma once

#include "gmp/kernels.hpp"
#include "gmp/process.hpp"
#include "gmp/sampler.hpp"
#include "gmp/tree.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace gmp {

/// Centered Gaussian vector. Construction checks symmetry (relative 1e-12)
/// and an eigenvalue floor of -1e-10 (relative to the largest eigenvalue).
class GaussianVector {
  public:
    explicit GaussianVector(Eigen::MatrixXd covariance);

    const Eigen::MatrixXd& covariance() const { return cov_; }
    Eigen::Index dimension() const { return cov_.rows(); }

  private:
    Eigen::MatrixXd cov_;
};

/// [g(t_i) g(t_j) h(min(t_i, t_j))].
Eigen::MatrixXd covariance_matrix(const ProcessSpec& spec, std::span<const double> times);

GaussianVector gaussian_vector(const ProcessSpec& spec, std::span<const double> times);

struct DensityValue {
    double value = 0.0;
    double log_value = 0.0;
    /// Diagonal jitter added to make the Cholesky factorization succeed
    /// (0 when none was needed).
    double jitter = 0.0;
};

/// Multivariate normal density at x, by Cholesky factorization. Falls back
/// to a 1e-12 (relative) diagonal jitter and reports it.
DensityValue gaussian_density(const GaussianVector& law, std::span<const double> x);

/// p^N(x_1, ..., x_{2^N}) = prod_k p(x_{k+1}, t_{k+1} | x_k, t_k) with x_0 = 0
/// along the sorted level-N times t_0 = 0 < ... < t_{2^N}. values[k - 1]
/// is the value at t_k.
double finite_dim_density(const ProcessSpec& spec, const SupportTree& tree, int levels,
                          std::span<const double> values);

double log_finite_dim_density(const ProcessSpec& spec, const SupportTree& tree, int levels,
                              std::span<const double> values);

/// exp(-1/2 lambda^T R^N lambda), R^N_{pq} = rho^N(t_p, t_q).
std::complex<double> characteristic_function(const ProcessSpec& spec, const SupportTree& tree,
                                             int levels, std::span<const double> times,
                                             std::span<const double> lambdas);

struct QuadratureResult {
    double value = 0.0;
    /// Richardson estimate of the error in `value`.
    double error_estimate = 0.0;
    bool converged = false;
};

/// Characteristic functional of the path law against the measure
/// theta(t) dt:  exp(-1/2 int_0^1 (f(u) int_u^1 g(s) theta(s) ds)^2 du).
/// Nested composite Simpson on 2^10 outer panels, Richardson-checked
/// against 2^9; `converged` when the estimate is below `tol`.
QuadratureResult characteristic_functional_density(const ProcessSpec& spec, const RealFn& theta,
                                                   double tol = 1e-9);

/// exp(-1/2 iint rho(t, s) theta(t) theta(s) dt ds) by tensor-product
/// Simpson (2^10 panels per axis) on the triangle s <= t. Independent of
/// the nested route above; used to validate it.
QuadratureResult characteristic_functional_double(const ProcessSpec& spec, const RealFn& theta,
                                                  double tol = 1e-9);

/// Conditional law of the middle coordinate of a 3-dimensional Gaussian
/// given the outer two, by Schur complement. Throws SingularMatrix when the
/// outer 2x2 block is singular.
BridgeLaw gaussian_conditional_oracle(const GaussianVector& law, double x, double z);

/// Sample moments of a path collection on a common grid (parallel kernel,
/// bit-stable across thread counts).
Moments empirical_moments(const PathBatch& batch);
Moments empirical_moments(std::span<const PathSample> paths);

/// One row of a covariance-convergence table.
struct CovErrorRow {
    int level = 0;
    double sup_error = 0.0;
    double mean_error = 0.0;
    /// sup_error is strictly below the previous row's (true for the first row).
    bool decreasing = true;
};

/// sup and mean of |rho^N(t, s) - rho(t, s)| over grid x grid for each
/// N in [min_level, max_level].
std::vector<CovErrorRow> covariance_error_table(const ProcessSpec& spec, const SupportTree& tree,
                                                int min_level, int max_level,
                                                std::span<const double> grid);

/// t_i = i / points, i = 0 .. points - 1.
std::vector<double> uniform_grid(int points);

} // namespace gmp

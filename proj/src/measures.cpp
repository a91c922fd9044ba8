#include "gmp/measures.hpp"

#include "gmp/basis.hpp"
#include "gmp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmp {

GaussianVector::GaussianVector(Eigen::MatrixXd covariance) : cov_(std::move(covariance)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() == 0) {
        throw InvalidArgument("covariance must be a non-empty square matrix");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidArgument("covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_, Eigen::EigenvaluesOnly);
    const double floor = -1e-10 * std::max(1.0, eig.eigenvalues().maxCoeff());
    if (eig.eigenvalues().minCoeff() < floor) {
        throw InvalidArgument("covariance is not positive semi-definite");
    }
}

Eigen::MatrixXd covariance_matrix(const ProcessSpec& spec, std::span<const double> times) {
    const auto n = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            cov(i, j) = cov(j, i) = covariance(spec, times[static_cast<std::size_t>(i)],
                                               times[static_cast<std::size_t>(j)]);
        }
    }
    return cov;
}

GaussianVector gaussian_vector(const ProcessSpec& spec, std::span<const double> times) {
    return GaussianVector(covariance_matrix(spec, times));
}

DensityValue gaussian_density(const GaussianVector& law, std::span<const double> x) {
    const Eigen::Index n = law.dimension();
    if (static_cast<Eigen::Index>(x.size()) != n) {
        throw InvalidArgument("density point has the wrong dimension");
    }
    DensityValue out;
    const double scale = std::max(1.0, law.covariance().diagonal().maxCoeff());
    Eigen::LLT<Eigen::MatrixXd> llt(law.covariance());
    // Rounding can leave a tiny positive pivot on an exactly singular matrix.
    const auto degenerate = [&] {
        return llt.info() != Eigen::Success ||
               llt.matrixLLT().diagonal().array().square().minCoeff() <= 1e-14 * scale;
    };
    if (degenerate()) {
        out.jitter = 1e-12 * scale;
        Eigen::MatrixXd jittered = law.covariance();
        jittered.diagonal().array() += out.jitter;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success) {
            throw SingularMatrix("covariance is singular even after diagonal jitter");
        }
    }
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
    const Eigen::VectorXd w = llt.matrixL().solve(v);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    out.log_value = -0.5 * (w.squaredNorm() + log_det + static_cast<double>(n) *
                                                          std::log(2.0 * std::numbers::pi));
    out.value = std::exp(out.log_value);
    return out;
}

namespace {

std::vector<double> checked_times(const SupportTree& tree, int levels, std::size_t values) {
    std::vector<double> times = prefix_order_times(tree, levels);
    if (values + 1 != times.size()) {
        throw InvalidArgument("finite-dimensional density needs 2^N values");
    }
    return times;
}

} // namespace

double finite_dim_density(const ProcessSpec& spec, const SupportTree& tree, int levels,
                          std::span<const double> values) {
    const std::vector<double> times = checked_times(tree, levels, values.size());
    double density = 1.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        density *= transition_density(spec, prev, times[k], values[k], times[k + 1]);
        prev = values[k];
    }
    return density;
}

double log_finite_dim_density(const ProcessSpec& spec, const SupportTree& tree, int levels,
                              std::span<const double> values) {
    const std::vector<double> times = checked_times(tree, levels, values.size());
    double log_density = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double t0 = times[k];
        const double t1 = times[k + 1];
        const double dh = spec.h(t1) - spec.h(t0);
        if (!(dh > 0.0)) {
            throw DegenerateIncrement("finite-dimensional density: flat h between grid points");
        }
        const double g1 = spec.g(t1);
        const double u = values[k] / g1 - prev / spec.g(t0);
        log_density += -u * u / (2.0 * dh) - std::log(std::abs(g1)) -
                       0.5 * std::log(2.0 * std::numbers::pi * dh);
        prev = values[k];
    }
    return log_density;
}

std::complex<double> characteristic_function(const ProcessSpec& spec, const SupportTree& tree,
                                             int levels, std::span<const double> times,
                                             std::span<const double> lambdas) {
    if (times.size() != lambdas.size()) {
        throw InvalidArgument("characteristic function: times and lambdas differ in length");
    }
    const Basis basis(spec, tree, levels);
    double quad = 0.0;
    for (std::size_t p = 0; p < times.size(); ++p) {
        for (std::size_t q = 0; q < times.size(); ++q) {
            quad += lambdas[p] * lambdas[q] * basis.partial_covariance(levels, times[p], times[q]);
        }
    }
    return {std::exp(-0.5 * quad), 0.0};
}

namespace {

// int_0^1 f(u)^2 (int_u^1 g theta)^2 du on `panels` uniform panels.
double nested_exponent(const ProcessSpec& spec, const RealFn& theta, int panels) {
    const double step = 1.0 / panels;
    auto weight = [&](double s) { return spec.g(s) * theta(s); };
    std::vector<double> tail(static_cast<std::size_t>(panels) + 1, 0.0);
    double right = weight(1.0);
    for (int j = panels - 1; j >= 0; --j) {
        const double a = static_cast<double>(j) * step;
        const double left = weight(a);
        const double piece = step / 6.0 * (left + 4.0 * weight(a + 0.5 * step) + right);
        tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j) + 1] + piece;
        right = left;
    }
    double odd = 0.0;
    double even = 0.0;
    double ends = 0.0;
    for (int j = 0; j <= panels; ++j) {
        const double u = static_cast<double>(j) * step;
        const double fu = spec.f(u);
        const double v = fu * fu * tail[static_cast<std::size_t>(j)] * tail[static_cast<std::size_t>(j)];
        if (j == 0 || j == panels) {
            ends += v;
        } else {
            (j & 1 ? odd : even) += v;
        }
    }
    return step / 3.0 * (ends + 4.0 * odd + 2.0 * even);
}

std::vector<double> simpson_weights(int panels) {
    std::vector<double> w(static_cast<std::size_t>(panels) + 1);
    for (int j = 0; j <= panels; ++j) {
        w[static_cast<std::size_t>(j)] = (j == 0 || j == panels) ? 1.0 : (j & 1 ? 4.0 : 2.0);
    }
    return w;
}

// iint rho theta theta over the unit square = 2 * int_0^1 int_0^1 F(t, t v) t dv dt
// with F(t, s) = g(t) theta(t) g(s) h(s) theta(s) for s <= t.
double double_exponent(const ProcessSpec& spec, const RealFn& theta, int panels) {
    const double step = 1.0 / panels;
    const std::vector<double> w = simpson_weights(panels);
    double total = 0.0;
    for (int i = 1; i <= panels; ++i) {
        const double t = static_cast<double>(i) * step;
        const double outer = spec.g(t) * theta(t) * t;
        double inner = 0.0;
        for (int j = 0; j <= panels; ++j) {
            const double s = t * static_cast<double>(j) * step;
            inner += w[static_cast<std::size_t>(j)] * spec.g(s) * spec.h(s) * theta(s);
        }
        total += w[static_cast<std::size_t>(i)] * outer * inner;
    }
    return 2.0 * total * (step / 3.0) * (step / 3.0);
}

QuadratureResult richardson(double coarse, double fine, double tol) {
    const double extrapolated = fine + (fine - coarse) / 15.0;
    const double exponent_error = std::abs(fine - coarse) / 15.0;
    QuadratureResult r;
    r.value = std::exp(-0.5 * extrapolated);
    r.error_estimate = 0.5 * r.value * exponent_error;
    r.converged = r.error_estimate <= tol;
    return r;
}

} // namespace

QuadratureResult characteristic_functional_density(const ProcessSpec& spec, const RealFn& theta,
                                                   double tol) {
    return richardson(nested_exponent(spec, theta, 512), nested_exponent(spec, theta, 1024), tol);
}

QuadratureResult characteristic_functional_double(const ProcessSpec& spec, const RealFn& theta,
                                                  double tol) {
    return richardson(double_exponent(spec, theta, 512), double_exponent(spec, theta, 1024), tol);
}

BridgeLaw gaussian_conditional_oracle(const GaussianVector& law, double x, double z) {
    if (law.dimension() != 3) {
        throw InvalidArgument("conditional oracle expects a 3-dimensional law (t_x, t_y, t_z)");
    }
    const Eigen::MatrixXd& c = law.covariance();
    Eigen::Matrix2d outer;
    outer << c(0, 0), c(0, 2), c(2, 0), c(2, 2);
    const Eigen::Vector2d cross(c(1, 0), c(1, 2));
    const double det = outer.determinant();
    if (!(std::abs(det) > 1e-14 * std::max(1.0, outer.cwiseAbs().maxCoeff() *
                                                      outer.cwiseAbs().maxCoeff()))) {
        throw SingularMatrix("conditioning block is singular");
    }
    const Eigen::Vector2d gain = outer.partialPivLu().solve(cross);
    BridgeLaw law_y;
    law_y.mean = gain[0] * x + gain[1] * z;
    law_y.variance = c(1, 1) - gain.dot(cross);
    return law_y;
}

Moments empirical_moments(const PathBatch& batch) { return parallel::moments(batch); }

Moments empirical_moments(std::span<const PathSample> paths) {
    if (paths.size() < 2) {
        throw InvalidArgument("moments need at least two paths");
    }
    return parallel::moments(make_batch(paths));
}

std::vector<CovErrorRow> covariance_error_table(const ProcessSpec& spec, const SupportTree& tree,
                                                int min_level, int max_level,
                                                std::span<const double> grid) {
    if (min_level < 0 || max_level < min_level || max_level > tree.depth()) {
        throw InvalidArgument("covariance table: invalid level range");
    }
    if (grid.empty()) {
        throw InvalidArgument("covariance table: empty grid");
    }
    const Basis basis(spec, tree, max_level);
    std::vector<double> exact(grid.size() * grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            exact[i * grid.size() + j] = covariance(spec, grid[i], grid[j]);
        }
    }
    std::vector<CovErrorRow> rows;
    for (int n = min_level; n <= max_level; ++n) {
        CovErrorRow row;
        row.level = n;
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double err =
                    std::abs(basis.partial_covariance(n, grid[i], grid[j]) - exact[i * grid.size() + j]);
                row.sup_error = std::max(row.sup_error, err);
                sum += err;
            }
        }
        row.mean_error = sum / static_cast<double>(grid.size() * grid.size());
        row.decreasing = rows.empty() || row.sup_error < rows.back().sup_error;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> uniform_grid(int points) {
    if (points < 1) {
        throw InvalidArgument("grid needs at least one point");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / points;
    }
    return grid;
}

} // namespace gmp

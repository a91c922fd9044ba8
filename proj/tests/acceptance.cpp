// Acceptance criteria 1-10. One PASS/FAIL line per criterion; exit status 1
// when any criterion fails.

#include "gmp/basis.hpp"
#include "gmp/fpt.hpp"
#include "gmp/kernels.hpp"
#include "gmp/measures.hpp"
#include "gmp/sampler.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out = body();
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    bool ok = out.passed;
    std::string timing = std::to_string(seconds).substr(0, 6) + " s";
    if (limit_seconds > 0.0) {
        timing += " (limit " + std::to_string(static_cast<int>(limit_seconds)) + " s)";
        ok = ok && seconds < limit_seconds;
    }
    failures += ok ? 0 : 1;
    std::printf("%s %2d %s: %s; %s\n", ok ? "PASS" : "FAIL", id, name, out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Composite Simpson with `panels` subintervals; each Simpson pair samples
// its own endpoints one ulp inside so jumps at pair boundaries are resolved.
std::vector<double> simpson_weights_and_nodes(int panels, std::vector<double>& nodes) {
    std::vector<double> weights;
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; p += 2) {
        const double a = p * h;
        const double b = (p + 2) * h;
        nodes.push_back(std::nextafter(a, b));
        nodes.push_back(a + h);
        nodes.push_back(std::nextafter(b, a));
        weights.push_back(h / 3.0);
        weights.push_back(4.0 * h / 3.0);
        weights.push_back(h / 3.0);
    }
    return weights;
}

Outcome criterion_orthonormality() {
    std::vector<double> nodes;
    const auto weights = simpson_weights_and_nodes(1 << 12, nodes);
    double worst = 0.0;
    for (const auto& spec : {gmp::make_wiener(), gmp::make_ou(0.5), gmp::make_ou(2.0)}) {
        const gmp::Basis basis(spec, gmp::uniform_tree(5), 5);
        std::vector<std::vector<double>> values(basis.size());
        for (std::size_t e = 0; e < basis.size(); ++e) {
            values[e].resize(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                values[e][i] = gmp::phi(spec, basis.element(static_cast<std::int64_t>(e)), nodes[i]);
            }
        }
        for (std::size_t a = 0; a < basis.size(); ++a) {
            for (std::size_t b = a; b < basis.size(); ++b) {
                double ip = 0.0;
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    ip += weights[i] * values[a][i] * values[b][i];
                }
                worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
            }
        }
    }
    return {worst < 1e-8, "max |G - I| = " + num(worst) + " (tol 1e-8) over wiener, ou:0.5, ou:2"};
}

Outcome criterion_bridge() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int instances = 0;
    while (instances < 100) {
        const int kind = static_cast<int>(rng() % 3);
        const auto spec = kind == 0 ? gmp::make_wiener() : gmp::make_ou(kind == 1 ? 3.0 * u(rng) : -3.0 * u(rng));
        std::vector<double> t{u(rng), u(rng), u(rng)};
        std::sort(t.begin(), t.end());
        if (t[1] - t[0] < 1e-3 || t[2] - t[1] < 1e-3) {
            continue;
        }
        ++instances;
        const double x = 4.0 * u(rng) - 2.0;
        const double z = 4.0 * u(rng) - 2.0;
        const auto law = gmp::bridge_law(spec, t[0], x, t[2], z, t[1]);
        const auto ref = gmp::gaussian_conditional_oracle(gmp::gaussian_vector(spec, t), x, z);
        worst = std::max(worst, std::abs(law.mean - ref.mean) / std::max(1.0, std::abs(ref.mean)));
        worst = std::max(worst, std::abs(law.variance - ref.variance) / std::max(1.0, ref.variance));
    }
    return {worst <= 1e-10, "max error = " + num(worst) + " (tol 1e-10) on 100 instances"};
}

Outcome criterion_parseval() {
    const auto rows = gmp::covariance_error_table(gmp::make_wiener(), gmp::uniform_tree(12), 2, 12,
                                                  gmp::uniform_grid(129));
    bool monotone = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        monotone = monotone && rows[i].sup_error < rows[i - 1].sup_error;
        const double dec = std::log2(rows[i - 1].sup_error / rows[i].sup_error);
        lo = std::min(lo, dec);
        hi = std::max(hi, dec);
    }
    const double last = rows.back().sup_error;
    const bool ok = monotone && last < 1e-3 && lo >= 0.8 && hi <= 1.2;
    return {ok, std::string(monotone ? "monotone" : "NOT monotone") + ", sup error at N=12 = " +
                    num(last) + " (< 1e-3), log2 decrement in [" + num(lo) + ", " + num(hi) +
                    "] (need [0.8, 1.2])"};
}

Outcome criterion_density() {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z(0.0, 0.8);
    const auto tree = gmp::uniform_tree(2);
    auto times = gmp::prefix_order_times(tree, 2);
    times.erase(times.begin());
    double worst = 0.0;
    for (const auto& spec : {gmp::make_wiener(), gmp::make_ou(1.0)}) {
        const auto law = gmp::gaussian_vector(spec, times);
        for (int i = 0; i < 25; ++i) {
            std::vector<double> x(times.size());
            for (double& v : x) {
                v = z(rng);
            }
            const double p = gmp::finite_dim_density(spec, tree, 2, x);
            const double ref = gmp::gaussian_density(law, x).value;
            worst = std::max(worst, std::abs(p - ref) / ref);
        }
    }
    return {worst <= 1e-8, "max relative error = " + num(worst) + " (tol 1e-8) on 50 points"};
}

gmp::SynthesisPlan plan_for(const gmp::ProcessSpec& spec, int levels, std::vector<double> grid) {
    const gmp::Basis basis(spec, gmp::uniform_tree(levels), levels);
    return gmp::make_synthesis_plan(basis, grid);
}

Outcome criterion_sampling_law() {
    const auto spec = gmp::make_ou(1.0);
    const auto tree = gmp::uniform_tree(6);
    const auto grid = gmp::prefix_order_times(tree, 6);
    const auto batch = gmp::parallel::synthesize(plan_for(spec, 6, grid), 0, 0, 100000);
    const auto m = gmp::empirical_moments(batch);
    int outside = 0;
    int entries = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) {
            const auto a = static_cast<Eigen::Index>(i);
            const auto b = static_cast<Eigen::Index>(j);
            const double err = std::abs(m.covariance(a, b) - gmp::covariance(spec, grid[i], grid[j]));
            const double se = m.covariance_se(a, b);
            ++entries;
            if (se == 0.0) {
                outside += err == 0.0 ? 0 : 1;
                continue;
            }
            worst = std::max(worst, err / se);
            outside += err <= 3.0 * se ? 0 : 1;
        }
    }
    return {outside == 0, "ou:1, M = 1e5, N = 6, seed 0: " + std::to_string(outside) + " of " +
                              std::to_string(entries) + " entries outside 3 SE, max |z| = " + num(worst)};
}

Outcome criterion_refinement_exactness() {
    std::mt19937_64 rng(6);
    const auto tree = gmp::uniform_tree(10);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto spec = i % 2 == 0 ? gmp::make_wiener() : gmp::make_ou(static_cast<double>(rng() % 7) - 3.0);
        const int levels = static_cast<int>(rng() % 9);
        const gmp::KeyScope scope{rng(), rng()};
        const auto grid = gmp::prefix_order_times(tree, levels);
        const auto path = gmp::synthesize_path(spec, tree, gmp::sample_coefficients(scope, levels), levels, grid);
        const auto fine = gmp::refine(spec, tree, path, scope);
        for (std::size_t k = 0; k < path.values.size(); ++k) {
            if (std::bit_cast<std::uint64_t>(fine.values[2 * k]) != std::bit_cast<std::uint64_t>(path.values[k]) ||
                fine.times[2 * k] != path.times[k]) {
                ++mismatches;
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " bit mismatches over 1000 random paths"};
}

Outcome criterion_law_equivalence() {
    const auto spec = gmp::make_ou(1.0);
    const auto tree = gmp::uniform_tree(5);
    constexpr std::size_t kPaths = 100000;
    const auto direct =
        gmp::parallel::synthesize(plan_for(spec, 5, gmp::prefix_order_times(tree, 5)), 0, 0, kPaths);
    // Refinement starts from independent keys (disjoint path ids).
    auto refined =
        gmp::parallel::synthesize(plan_for(spec, 0, gmp::prefix_order_times(tree, 0)), 0, kPaths, kPaths);
    for (int j = 0; j < 5; ++j) {
        refined = gmp::parallel::refine(gmp::make_refinement_plan(spec, tree, j), refined);
    }
    const auto a = gmp::empirical_moments(direct);
    const auto b = gmp::empirical_moments(refined);
    int outside = 0;
    int entries = 0;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.covariance.rows(); ++i) {
        for (Eigen::Index j = i; j < a.covariance.cols(); ++j) {
            const double diff = std::abs(a.covariance(i, j) - b.covariance(i, j));
            const double se = std::hypot(a.covariance_se(i, j), b.covariance_se(i, j));
            ++entries;
            if (se == 0.0) {
                outside += diff == 0.0 ? 0 : 1;
                continue;
            }
            worst = std::max(worst, diff / se);
            outside += diff <= 3.0 * se ? 0 : 1;
        }
    }

    // With shared keys the two samplers agree path by path.
    auto shared = gmp::parallel::synthesize(plan_for(spec, 0, gmp::prefix_order_times(tree, 0)), 0, 0, 1000);
    for (int j = 0; j < 5; ++j) {
        shared = gmp::parallel::refine(gmp::make_refinement_plan(spec, tree, j), shared);
    }
    double pathwise = 0.0;
    for (std::size_t i = 0; i < shared.values.size(); ++i) {
        pathwise = std::max(pathwise, std::abs(shared.values[i] - direct.values[i]));
    }
    return {outside == 0 && pathwise <= 1e-12,
            "ou:1, D_5, 2 x 1e5 independent paths: " + std::to_string(outside) + " of " +
                std::to_string(entries) + " entries outside 3 SE, max |z| = " + num(worst) +
                "; shared-key pathwise max diff = " + num(pathwise)};
}

Outcome criterion_sup_bound() {
    const int points = 1 << 14;
    double worst_excess = 0.0;
    double worst_gap = 0.0;
    for (const auto& spec : {gmp::make_wiener(), gmp::make_ou(0.5), gmp::make_ou(2.0)}) {
        const bool wiener = spec.label() == "wiener";
        const double gf = gmp::sup_norm([&](double t) { return spec.g(t); }, points) *
                          gmp::sup_norm([&](double t) { return spec.f(t); }, points);
        const gmp::Basis basis(spec, gmp::uniform_tree(10), 10);
        std::vector<double> ht(points + 1);
        std::vector<double> gt(points + 1);
        for (int i = 0; i <= points; ++i) {
            const double t = static_cast<double>(i) / points;
            ht[static_cast<std::size_t>(i)] = spec.h(t);
            gt[static_cast<std::size_t>(i)] = spec.g(t);
        }
        for (std::size_t flat = 1; flat < basis.size(); ++flat) {
            const auto& e = basis.element(static_cast<std::int64_t>(flat));
            const int first = static_cast<int>(std::floor(e.support.l * points));
            const int last = static_cast<int>(std::ceil(e.support.r * points));
            double peak = 0.0;
            for (int i = first; i <= last; ++i) {
                const double t = static_cast<double>(i) / points;
                const auto u = static_cast<std::size_t>(i);
                peak = std::max(peak, std::abs(gmp::detail::psi_value(e, t, ht[u], gt[u])));
            }
            const double bound = std::pow(2.0, -(e.index.n + 1) / 2.0) * gf;
            worst_excess = std::max(worst_excess, (peak - bound) / bound);
            if (wiener) {
                worst_gap = std::max(worst_gap, std::abs(peak - bound) / bound);
            }
        }
    }
    return {worst_excess <= 0.0 && worst_gap <= 1e-12,
            "max (peak - bound)/bound = " + num(worst_excess) +
                " over wiener, ou:0.5, ou:2, n <= 10; wiener attainment gap = " + num(worst_gap) +
                " (tol 1e-12)"};
}

Outcome criterion_characteristic() {
    const auto spec = gmp::make_ou(1.0);
    const auto tree = gmp::uniform_tree(6);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> times(10);
    std::vector<double> lambdas(10);
    for (int i = 0; i < 10; ++i) {
        times[static_cast<std::size_t>(i)] = u(rng);
        lambdas[static_cast<std::size_t>(i)] = 6.0 * u(rng) - 3.0;
    }
    constexpr std::size_t kPaths = 100000;
    const auto batch = gmp::parallel::synthesize(plan_for(spec, 6, times), 0, 0, kPaths);
    int outside = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double lambda = lambdas[i];
        double c = 0.0;
        double s = 0.0;
        double c2 = 0.0;
        double s2 = 0.0;
        for (std::size_t p = 0; p < kPaths; ++p) {
            const double x = lambda * batch.row(p)[i];
            c += std::cos(x);
            s += std::sin(x);
            c2 += std::cos(x) * std::cos(x);
            s2 += std::sin(x) * std::sin(x);
        }
        const double n = static_cast<double>(kPaths);
        const std::complex<double> mc(c / n, s / n);
        const double var = (c2 / n - mc.real() * mc.real()) + (s2 / n - mc.imag() * mc.imag());
        const double se = std::sqrt(var / (n - 1.0));
        const auto exact = gmp::characteristic_function(spec, tree, 6, std::vector<double>{times[i]},
                                                        std::vector<double>{lambda});
        const double z = std::abs(mc - exact) / se;
        worst = std::max(worst, z);
        outside += z <= 3.0 ? 0 : 1;
    }
    return {outside == 0, "ou:1, N = 6, M = 1e5: " + std::to_string(outside) +
                              " of 10 (t, lambda) outside 3 SE, max |z| = " + num(worst)};
}

Outcome criterion_fpt() {
    const auto spec = gmp::make_wiener();
    const auto tree = gmp::uniform_tree(12);
    gmp::FptConfig c;
    c.boundary = 1.0;
    c.coarse_level = 4;
    c.target_level = 12;
    c.paths = 10000;
    c.seed = 0;
    const auto full = gmp::run_fpt_exhaustive(spec, tree, c);

    c.band = std::numeric_limits<double>::infinity();
    const auto everything = gmp::run_fpt_adaptive(spec, tree, c);
    std::size_t decision_mismatches = 0;
    for (std::size_t p = 0; p < c.paths; ++p) {
        const bool same = everything.paths[p].crossed == full.paths[p].crossed &&
                          (!full.paths[p].crossed ||
                           everything.paths[p].crossing_time == full.paths[p].crossing_time);
        decision_mismatches += same ? 0 : 1;
    }

    c.band = 0.5;
    const auto banded = gmp::run_fpt_adaptive(spec, tree, c);
    const double z = std::abs(banded.survival - full.survival) / full.survival_se;
    const bool ok = decision_mismatches == 0 && z <= 3.0;
    return {ok, "wiener, b = 1, depth 12, 1e4 paths: infinite band " +
                    std::to_string(decision_mismatches) + " decision mismatches; band 0.5 survival " +
                    num(banded.survival) + " vs exhaustive " + num(full.survival) + " (|z| = " +
                    num(z) + ", refined fraction " + num(banded.refined_fraction) + ")"};
}

} // namespace

int main() {
    report(1, "orthonormality", 5.0, criterion_orthonormality);
    report(2, "bridge law vs oracle", 1.0, criterion_bridge);
    report(3, "Parseval convergence", 10.0, criterion_parseval);
    report(4, "finite-dimensional density", 1.0, criterion_density);
    report(5, "sampling law", 60.0, criterion_sampling_law);
    report(6, "refinement exactness", 5.0, criterion_refinement_exactness);
    report(7, "sampler law equivalence", 120.0, criterion_law_equivalence);
    report(8, "sup bound", 0.0, criterion_sup_bound);
    report(9, "characteristic function", 0.0, criterion_characteristic);
    report(10, "FPT self-consistency", 120.0, criterion_fpt);
    return failures == 0 ? 0 : 1;
}

#include "gmp/error.hpp"
#include "gmp/process.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using doctest::Approx;

namespace {

double ou_h(double alpha, double t) { return (1.0 - std::exp(-2.0 * alpha * t)) / (2.0 * alpha); }

double ou_cov(double alpha, double t, double s) {
    return std::exp(alpha * (t + s)) * ou_h(alpha, std::min(t, s));
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gmp_test_process";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("wiener preset") {
    const auto w = gmp::make_wiener();
    CHECK(w.h(0.5) == 0.5);
    CHECK(w.g(0.3) == 1.0);
    CHECK(w.f(0.7) == 1.0);
    CHECK(w.label() == "wiener");
    CHECK(gmp::covariance(w, 0.25, 0.75) == 0.25);
}

TEST_CASE("ou preset") {
    const auto zero = gmp::make_ou(0.0);
    const auto w = gmp::make_wiener();
    for (double t = 0.0; t <= 1.0; t += 0.125) {
        for (double s = 0.0; s <= 1.0; s += 0.125) {
            CHECK(gmp::covariance(zero, t, s) == gmp::covariance(w, t, s));
        }
    }

    const auto ou1 = gmp::make_ou(1.0);
    const double h1 = oracle::gauss_legendre([](double u) { return std::exp(-2.0 * u); }, 0.0, 1.0, 8);
    CHECK(ou1.h(1.0) == Approx(h1).epsilon(1e-14));
    CHECK(ou1.h(1.0) == Approx(0.432332358381693654).epsilon(1e-15));
    CHECK(gmp::covariance(ou1, 0.5, 0.5) ==
          Approx(std::numbers::e * (1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-15));

    for (double alpha : {-1.5, 0.5, 2.0}) {
        const auto ou = gmp::make_ou(alpha);
        CHECK(ou.g(0.4) == Approx(std::exp(alpha * 0.4)));
        CHECK(ou.f(0.4) == Approx(std::exp(-alpha * 0.4)));
        for (double t : {0.1, 0.45, 0.9}) {
            for (double s : {0.2, 0.45, 1.0}) {
                CHECK(gmp::covariance(ou, t, s) == Approx(ou_cov(alpha, t, s)).epsilon(1e-14));
            }
        }
    }
    CHECK(gmp::make_ou(2.0).label() == "ou:2");
    CHECK_THROWS_AS(gmp::make_ou(std::nan("")), gmp::InvalidArgument);
}

TEST_CASE("custom processes integrate h") {
    const auto flat = gmp::make_custom([](double) { return 1.0; }, [](double) { return 1.0; }, 1e-12);
    CHECK(std::abs(flat.h(0.5) - 0.5) <= 1e-12);

    const auto ou_like = gmp::make_custom([](double t) { return std::exp(-t); },
                                          [](double t) { return std::exp(t); }, 1e-12);
    CHECK(std::abs(ou_like.h(1.0) - (1.0 - std::exp(-2.0)) / 2.0) <= 1e-10);

    const auto ramp = gmp::make_custom([](double t) { return t; }, [](double) { return 1.0; }, 1e-12);
    CHECK(std::abs(ramp.h(1.0) - 1.0 / 3.0) <= 1e-10);
    for (double t : {0.0, 0.001, 0.3, 0.77, 0.999}) {
        CHECK(std::abs(ramp.h(t) - t * t * t / 3.0) <= 1e-12);
    }
    CHECK(ramp.h(0.0) == 0.0);
}

TEST_CASE("custom process validation") {
    CHECK_THROWS_AS(gmp::make_custom([](double) { return 1.0; }, [](double t) { return t - 0.3; }),
                    gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::make_custom([](double) { return 1.0; }, [](double t) { return t; }),
                    gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::make_custom([](double t) { return t > 0.5 ? INFINITY : 1.0; },
                                     [](double) { return 1.0; }),
                    gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::make_custom(nullptr, [](double) { return 1.0; }), gmp::InvalidArgument);
    // A negative g is allowed as long as it never vanishes.
    CHECK_NOTHROW(gmp::make_custom([](double) { return 1.0; }, [](double) { return -2.0; }));
}

TEST_CASE("transition density") {
    const auto w = gmp::make_wiener();
    CHECK(gmp::transition_density(w, 0.0, 0.0, 0.0, 1.0) ==
          Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));

    for (double alpha : {-1.0, 0.5, 2.0}) {
        const auto ou = gmp::make_ou(alpha);
        const double t0 = 0.2;
        const double t = 0.7;
        const double x0 = 0.4;
        // Conditional of the 2-point joint law.
        const double c00 = ou_cov(alpha, t0, t0);
        const double c01 = ou_cov(alpha, t0, t);
        const double c11 = ou_cov(alpha, t, t);
        const double mean = c01 / c00 * x0;
        const double var = c11 - c01 * c01 / c00;
        CHECK(mean == Approx(x0 * std::exp(alpha * (t - t0))).epsilon(1e-13));
        for (double x : {-1.0, 0.0, 0.3, 1.7}) {
            CHECK(gmp::transition_density(ou, x0, t0, x, t) ==
                  Approx(oracle::normal_pdf(x, mean, var)).epsilon(1e-12));
        }
        const double sd = std::sqrt(var);
        const double mass = oracle::gauss_legendre(
            [&](double x) { return gmp::transition_density(ou, x0, t0, x, t); }, mean - 10.0 * sd,
            mean + 10.0 * sd, 200);
        CHECK(std::abs(mass - 1.0) <= 1e-8);
    }

    const auto neg = gmp::make_custom([](double) { return 1.0; }, [](double) { return -1.0; });
    CHECK(gmp::transition_density(neg, 0.0, 0.0, 0.5, 1.0) > 0.0);

    const auto lazy = gmp::make_custom([](double t) { return std::max(0.0, t - 0.5); },
                                       [](double) { return 1.0; });
    CHECK_THROWS_AS(gmp::transition_density(lazy, 0.0, 0.1, 0.0, 0.3), gmp::DegenerateIncrement);
}

TEST_CASE("bridge law") {
    const auto w = gmp::make_wiener();
    const auto mid = gmp::bridge_law(w, 0.0, 0.0, 1.0, 0.0, 0.5);
    CHECK(mid.mean == 0.0);
    CHECK(mid.variance == Approx(0.25).epsilon(1e-15));
    for (double t : {0.1, 0.5, 0.8}) {
        const auto b = gmp::bridge_law(w, 0.0, 1.5, 1.0, -0.5, t);
        CHECK(b.mean == Approx((1.0 - t) * 1.5 + t * -0.5).epsilon(1e-14));
    }

    const auto ou = gmp::make_ou(1.3);
    const auto base = gmp::bridge_law(ou, 0.1, 0.7, 0.9, -0.2, 0.4);
    const auto scaled = gmp::bridge_law(ou, 0.1, 3.0 * 0.7, 0.9, 3.0 * -0.2, 0.4);
    CHECK(scaled.mean == Approx(3.0 * base.mean).epsilon(1e-14));
    CHECK(scaled.variance == base.variance);
    const auto weights = gmp::bridge_weights(ou, 0.1, 0.4, 0.9);
    CHECK(weights.left * 0.7 + weights.right * -0.2 == Approx(base.mean).epsilon(1e-14));
    CHECK(weights.variance == base.variance);

    const auto lazy = gmp::make_custom([](double t) { return std::max(0.0, t - 0.5); },
                                       [](double) { return 1.0; });
    CHECK_THROWS_AS(gmp::bridge_law(lazy, 0.0, 0.0, 0.4, 0.0, 0.2), gmp::DegenerateIncrement);
    CHECK_THROWS_AS(gmp::bridge_law(lazy, 0.1, 0.0, 0.9, 0.0, 0.3), gmp::DegenerateIncrement);
    // Flat only on the right: exact zero-variance law.
    const auto lazy_late = gmp::make_custom([](double t) { return std::max(0.0, 0.5 - t); },
                                            [](double) { return 1.0; });
    const auto right_flat = gmp::bridge_law(lazy_late, 0.0, 0.0, 0.9, 1.0, 0.6);
    CHECK(right_flat.variance == 0.0);
}

TEST_CASE("covariance matrices are symmetric positive semi-definite") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& spec : {gmp::make_wiener(), gmp::make_ou(0.5), gmp::make_ou(-2.0)}) {
        for (int m : {2, 16, 64}) {
            std::vector<double> t(static_cast<std::size_t>(m));
            for (double& x : t) {
                x = u(rng);
            }
            Eigen::MatrixXd c(m, m);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    c(i, j) = gmp::covariance(spec, t[static_cast<std::size_t>(i)],
                                              t[static_cast<std::size_t>(j)]);
                }
            }
            CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
        }
        CHECK(gmp::covariance(spec, 0.0, 0.6) == 0.0);
    }
}

TEST_CASE("tabulated functions and selectors") {
    const gmp::TabulatedFunction tab({0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
    CHECK(tab(0.25) == 2.0);
    CHECK(tab(0.75) == 2.5);
    CHECK(tab(1.0) == 2.0);
    CHECK_THROWS_AS(gmp::TabulatedFunction({0.0, 0.5}, {1.0, 2.0}), gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::TabulatedFunction({0.0, 0.5, 0.5, 1.0}, {1, 2, 3, 4}), gmp::InvalidArgument);

    const auto f_path = scratch("f.txt");
    const auto g_path = scratch("g.txt");
    {
        std::ofstream f(f_path);
        f << "# time, value\n0, 1\n0.5 , 1\n1,1\n";
        std::ofstream g(g_path);
        g << "0 2\n1 2\n";
    }
    const auto table = gmp::load_table(f_path);
    CHECK(table.times().size() == 3);
    const std::string selector = "custom:" + f_path.string() + "," + g_path.string();
    const auto spec = gmp::parse_process(selector);
    CHECK(spec.label() == selector);
    CHECK(std::abs(spec.h(0.3) - 0.3) <= 1e-12);
    CHECK(spec.g(0.3) == 2.0);

    CHECK(gmp::parse_process("wiener").label() == "wiener");
    const auto ou = gmp::parse_process("ou:1.0");
    CHECK(ou.label() == "ou:1.0");
    CHECK(ou.h(1.0) == gmp::make_ou(1.0).h(1.0));
    CHECK_THROWS_AS(gmp::parse_process("ou:abc"), gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::parse_process("brownian"), gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::parse_process("custom:only-one"), gmp::InvalidArgument);
    CHECK_THROWS_AS(gmp::parse_process("custom:/no/such/f,/no/such/g"), gmp::InvalidArgument);
}

TEST_CASE("sup norm") {
    CHECK(gmp::sup_norm([](double t) { return -3.0 * t; }) == 3.0);
    CHECK(gmp::sup_norm([](double t) { return std::exp(2.0 * t); }) == Approx(std::exp(2.0)));
}

#include "gmp/process.hpp"

#include "gmp/error.hpp"
#include "gmp/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace gmp {

ProcessSpec::ProcessSpec(std::string label, RealFn f, RealFn g, RealFn h)
    : label_(std::move(label)), f_(std::move(f)), g_(std::move(g)), h_(std::move(h)) {}

ProcessSpec ProcessSpec::with_label(std::string label) const {
    ProcessSpec copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

ProcessSpec make_wiener() {
    return ProcessSpec(
        "wiener", [](double) { return 1.0; }, [](double) { return 1.0; },
        [](double t) { return t; });
}

ProcessSpec make_ou(double alpha) {
    if (!std::isfinite(alpha)) {
        throw InvalidArgument("ou: alpha must be finite");
    }
    std::string label = "ou:" + format_real(alpha);
    if (alpha == 0.0) {
        return make_wiener().with_label(std::move(label));
    }
    return ProcessSpec(
        std::move(label), [alpha](double t) { return std::exp(-alpha * t); },
        [alpha](double t) { return std::exp(alpha * t); },
        [alpha](double t) { return -std::expm1(-2.0 * alpha * t) / (2.0 * alpha); });
}

namespace {

// Cumulative integral of f^2 on a uniform knot grid; between knots the
// remainder is integrated on demand.
struct CumulativeSquare {
    static constexpr int kKnots = 1024;

    RealFn f;
    double panel_tol = 0.0;
    std::vector<double> at_knot;

    double square(double u) const {
        const double v = f(u);
        return v * v;
    }

    double operator()(double t) const {
        if (t <= 0.0) {
            return 0.0;
        }
        if (t >= 1.0) {
            return at_knot.back();
        }
        const int j = std::min(kKnots - 1, static_cast<int>(t * kKnots));
        const double a = static_cast<double>(j) / kKnots;
        return at_knot[j] +
               adaptive_simpson([this](double u) { return square(u); }, a, t, panel_tol, 30);
    }
};

} // namespace

ProcessSpec make_custom(RealFn f, RealFn g, double quad_tol,
                        std::span<const double> check_times, std::string label) {
    if (!f || !g) {
        throw InvalidArgument("custom process: f and g must be callable");
    }
    if (!(quad_tol > 0.0)) {
        throw InvalidArgument("custom process: quadrature tolerance must be positive");
    }

    std::vector<double> grid;
    constexpr int kCheck = 4096;
    grid.reserve(kCheck + 1 + check_times.size());
    for (int i = 0; i <= kCheck; ++i) {
        grid.push_back(static_cast<double>(i) / kCheck);
    }
    grid.insert(grid.end(), check_times.begin(), check_times.end());
    std::sort(grid.begin(), grid.end());

    double prev_g = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double fv = f(t);
        const double gv = g(t);
        if (!std::isfinite(fv) || !std::isfinite(gv)) {
            throw InvalidArgument("custom process: non-finite f or g at t = " + format_real(t));
        }
        if (gv == 0.0 || (i > 0 && std::signbit(gv) != std::signbit(prev_g))) {
            throw InvalidArgument("custom process: g has a zero near t = " + format_real(t));
        }
        prev_g = gv;
    }

    auto cumulative = std::make_shared<CumulativeSquare>();
    cumulative->f = f;
    cumulative->panel_tol = quad_tol / CumulativeSquare::kKnots;
    cumulative->at_knot.assign(CumulativeSquare::kKnots + 1, 0.0);
    for (int j = 0; j < CumulativeSquare::kKnots; ++j) {
        const double a = static_cast<double>(j) / CumulativeSquare::kKnots;
        const double b = static_cast<double>(j + 1) / CumulativeSquare::kKnots;
        cumulative->at_knot[j + 1] =
            cumulative->at_knot[j] +
            adaptive_simpson([&](double u) { return cumulative->square(u); }, a, b,
                             cumulative->panel_tol, 30);
    }

    return ProcessSpec(std::move(label), std::move(f), std::move(g),
                       [cumulative](double t) { return (*cumulative)(t); });
}

double covariance(const ProcessSpec& spec, double t, double s) {
    return spec.g(t) * spec.g(s) * spec.h(std::min(t, s));
}

double transition_density(const ProcessSpec& spec, double x0, double t0, double x,
                          double t) {
    const double dh = spec.h(t) - spec.h(t0);
    if (!(dh > 0.0)) {
        throw DegenerateIncrement("transition density: h(t) == h(t0) at t0 = " +
                                  format_real(t0) + ", t = " + format_real(t));
    }
    const double gt = spec.g(t);
    const double u = x / gt - x0 / spec.g(t0);
    return std::exp(-u * u / (2.0 * dh)) /
           (std::abs(gt) * std::sqrt(2.0 * std::numbers::pi * dh));
}

BridgeWeights bridge_weights(const ProcessSpec& spec, double tx, double ty, double tz) {
    const double hx = spec.h(tx);
    const double hy = spec.h(ty);
    const double hz = spec.h(tz);
    const double left_inc = hy - hx;
    const double right_inc = hz - hy;
    if (!(left_inc > 0.0) || !(right_inc >= 0.0)) {
        throw DegenerateIncrement("bridge law: flat h on [" + format_real(tx) + ", " +
                                  format_real(tz) + "] around " + format_real(ty));
    }
    const double total = hz - hx;
    const double gy = spec.g(ty);
    BridgeWeights w;
    w.left = gy / spec.g(tx) * (right_inc / total);
    w.right = gy / spec.g(tz) * (left_inc / total);
    w.variance = gy * gy * left_inc * right_inc / total;
    return w;
}

BridgeLaw bridge_law(const ProcessSpec& spec, double tx, double x, double tz, double z,
                     double ty) {
    const BridgeWeights w = bridge_weights(spec, tx, ty, tz);
    return {w.left * x + w.right * z, w.variance};
}

TabulatedFunction::TabulatedFunction(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size() || times_.size() < 2) {
        throw InvalidArgument("table: need at least two (time, value) rows");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
            throw InvalidArgument("table: non-finite entry in row " + std::to_string(i + 1));
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw InvalidArgument("table: times must be strictly increasing");
        }
    }
    if (times_.front() > 0.0 || times_.back() < 1.0) {
        throw InvalidArgument("table: times must cover [0, 1]");
    }
}

double TabulatedFunction::operator()(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) {
        return values_.front();
    }
    if (it == times_.end()) {
        return values_.back();
    }
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    const double t0 = times_[j - 1];
    const double t1 = times_[j];
    const double w = (t - t0) / (t1 - t0);
    return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

TabulatedFunction load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open table " + path.string());
    }
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string a;
        std::string b;
        std::string extra;
        if (!(fields >> a)) {
            continue;
        }
        double t = 0.0;
        double v = 0.0;
        if (!(fields >> b) || (fields >> extra) || !parse_real(a, t) || !parse_real(b, v)) {
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected two numeric columns");
        }
        times.push_back(t);
        values.push_back(v);
    }
    return TabulatedFunction(std::move(times), std::move(values));
}

ProcessSpec parse_process(const std::string& selector) {
    if (selector == "wiener") {
        return make_wiener();
    }
    if (selector.rfind("ou:", 0) == 0) {
        double alpha = 0.0;
        if (!parse_real(std::string_view(selector).substr(3), alpha) || !std::isfinite(alpha)) {
            throw InvalidArgument("bad OU parameter in selector '" + selector + "'");
        }
        return make_ou(alpha).with_label(selector);
    }
    if (selector.rfind("custom:", 0) == 0) {
        const std::string rest = selector.substr(7);
        const auto comma = rest.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == rest.size()) {
            throw InvalidArgument("custom selector needs '<f-table>,<g-table>'");
        }
        auto f = std::make_shared<TabulatedFunction>(load_table(rest.substr(0, comma)));
        auto g = std::make_shared<TabulatedFunction>(load_table(rest.substr(comma + 1)));
        std::vector<double> knots(g->times().begin(), g->times().end());
        knots.erase(std::remove_if(knots.begin(), knots.end(),
                                   [](double t) { return t < 0.0 || t > 1.0; }),
                    knots.end());
        return make_custom([f](double t) { return (*f)(t); },
                           [g](double t) { return (*g)(t); }, 1e-12, knots, selector);
    }
    throw InvalidArgument("unknown process selector '" + selector +
                          "' (expected wiener, ou:<alpha> or custom:<f>,<g>)");
}

double sup_norm(const RealFn& fn, int n) {
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        best = std::max(best, std::abs(fn(static_cast<double>(i) / n)));
    }
    return best;
}

} // namespace gmp

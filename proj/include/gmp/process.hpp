#pragma once

#include "gmp/quadrature.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gmp {

/// A centered Gaussian Markov process on [0, 1] in Doob form
///
///     X_t = g(t) * int_0^t f(u) dW_u,     h(t) = int_0^t f(u)^2 du,
///
/// so that E[X_t X_s] = g(t) g(s) h(min(t, s)).
///
/// Immutable once built. Custom processes tabulate h at construction, so
/// concurrent readers never touch shared mutable state.
class ProcessSpec {
  public:
    ProcessSpec(std::string label, RealFn f, RealFn g, RealFn h);

    double f(double t) const { return f_(t); }
    double g(double t) const { return g_(t); }
    double h(double t) const { return h_(t); }

    const std::string& label() const { return label_; }
    ProcessSpec with_label(std::string label) const;

  private:
    std::string label_;
    RealFn f_;
    RealFn g_;
    RealFn h_;
};

ProcessSpec make_wiener();

/// Ornstein-Uhlenbeck dX = alpha X dt + dW, X_0 = 0, i.e.
/// X_t = int_0^t e^{alpha (t - u)} dW_u with g = e^{alpha t}, f = e^{-alpha t}
/// and h = (1 - e^{-2 alpha t}) / (2 alpha). alpha == 0 is the Wiener process.
ProcessSpec make_ou(double alpha);

/// User-supplied f and g; h is integrated with adaptive Simpson to absolute
/// tolerance `quad_tol`. g is checked for zeros (including sign changes)
/// and f, g for non-finite values on a 4097-point uniform grid plus
/// `check_times`. A zero of g strictly between checked points cannot be
/// detected.
ProcessSpec make_custom(RealFn f, RealFn g, double quad_tol = 1e-12,
                        std::span<const double> check_times = {},
                        std::string label = "custom");

/// g(t) g(s) h(min(t, s)).
double covariance(const ProcessSpec& spec, double t, double s);

/// Density of X_t at x given X_{t0} = x0. Throws DegenerateIncrement when
/// h(t) == h(t0), where the law is the Dirac mass at g(t)/g(t0) * x0.
double transition_density(const ProcessSpec& spec, double x0, double t0,
                          double x, double t);

/// Law of X_{ty} given X_{tx} = x and X_{tz} = z.
struct BridgeLaw {
    double mean = 0.0;
    double variance = 0.0;
};

/// The bridge mean is linear in the framing values:
/// mean = left * x + right * z. The weights and variance depend on times only.
struct BridgeWeights {
    double left = 0.0;
    double right = 0.0;
    double variance = 0.0;
};

/// Throws DegenerateIncrement when h(ty) == h(tx) (which covers
/// h(tz) == h(tx)). A flat right side h(tz) == h(ty) is the exact law with
/// variance 0.
BridgeWeights bridge_weights(const ProcessSpec& spec, double tx, double ty, double tz);

BridgeLaw bridge_law(const ProcessSpec& spec, double tx, double x, double tz,
                     double z, double ty);

/// Piecewise-linear interpolant through (time, value) knots. Times must be
/// strictly increasing and cover [0, 1].
class TabulatedFunction {
  public:
    TabulatedFunction(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;

    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }

  private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Reads a two-column table; columns separated by commas and/or whitespace,
/// '#' starts a comment.
TabulatedFunction load_table(const std::filesystem::path& path);

/// Selector grammar: "wiener" | "ou:<alpha>" | "custom:<f-table>,<g-table>".
/// The returned spec is labelled with the selector string verbatim.
ProcessSpec parse_process(const std::string& selector);

/// max |fn| over an (n+1)-point uniform grid on [0, 1].
double sup_norm(const RealFn& fn, int n = 1 << 14);

} // namespace gmp

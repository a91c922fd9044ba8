#pragma once

#include <functional>
#include <span>

namespace gmp {

using RealFn = std::function<double(double)>;

/// Adaptive Simpson with Richardson correction, absolute tolerance `tol`.
/// Recursion depth is capped; the returned estimate is the best available
/// at the cap.
double adaptive_simpson(const RealFn& fn, double a, double b, double tol,
                        int max_depth = 48);

/// Composite Simpson on `panels` uniform panels (panels is rounded up to
/// an even count).
double composite_simpson(const RealFn& fn, double a, double b, int panels);

/// Composite Simpson over [a, b] split at `breakpoints`. Every piece is
/// sampled strictly inside, with the piece endpoints replaced by their
/// neighbouring floating-point values, so functions that jump at a
/// breakpoint are integrated by one-sided limits. Panels are distributed
/// proportionally to piece length (at least 2 per piece).
double piecewise_simpson(const RealFn& fn, double a, double b,
                         std::span<const double> breakpoints, int panels);

} // namespace gmp

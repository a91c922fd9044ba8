#include "gmp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gmp {

namespace {

double simpson_step(const RealFn& fn, double a, double fa, double b, double fb,
                    double tol, double whole, double fm, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(fn, a, fa, m, fm, 0.5 * tol, left, flm, depth - 1) +
           simpson_step(fn, m, fm, b, fb, 0.5 * tol, right, frm, depth - 1);
}

} // namespace

double adaptive_simpson(const RealFn& fn, double a, double b, double tol,
                        int max_depth) {
    if (a == b) {
        return 0.0;
    }
    const double fa = fn(a);
    const double fb = fn(b);
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    // Start from two halves: a single three-point panel can miss mass that
    // sits between its samples.
    const double q1 = 0.5 * (a + m);
    const double q3 = 0.5 * (m + b);
    const double fq1 = fn(q1);
    const double fq3 = fn(q3);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fq1 + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fq3 + fb);
    return simpson_step(fn, a, fa, m, fm, 0.5 * tol, left, fq1, max_depth) +
           simpson_step(fn, m, fm, b, fb, 0.5 * tol, right, fq3, max_depth);
}

double composite_simpson(const RealFn& fn, double a, double b, int panels) {
    panels = std::max(2, panels + (panels & 1));
    const double step = (b - a) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; ++i) {
        const double v = fn(a + i * step);
        (i & 1 ? odd : even) += v;
    }
    return step / 3.0 * (fn(a) + 4.0 * odd + 2.0 * even + fn(b));
}

double piecewise_simpson(const RealFn& fn, double a, double b,
                         std::span<const double> breakpoints, int panels) {
    if (!(b > a)) {
        return 0.0;
    }
    std::vector<double> cuts{a, b};
    for (double c : breakpoints) {
        if (c > a && c < b) {
            cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        int n = static_cast<int>(std::ceil(panels * (hi - lo) / (b - a)));
        n = std::max(2, n + (n & 1));
        const double step = (hi - lo) / n;
        const double inner_lo = std::nextafter(lo, hi);
        const double inner_hi = std::nextafter(hi, lo);
        double odd = 0.0;
        double even = 0.0;
        for (int j = 1; j < n; ++j) {
            const double v = fn(lo + j * step);
            (j & 1 ? odd : even) += v;
        }
        total += step / 3.0 * (fn(inner_lo) + 4.0 * odd + 2.0 * even + fn(inner_hi));
    }
    return total;
}

} // namespace gmp

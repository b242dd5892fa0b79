#pragma once

// One-dimensional bracketing searches.

#include "fluxmix/errors.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace fluxmix {

struct search_result
{
    double x = 0.0;
    double objective = 0.0;
    double bracket_width = 0.0;
    int iterations = 0;
};

/// Golden-section maximisation of `f` on [lo, hi] until the bracket is no
/// wider than `tol`. Throws bracket_error when the maximum sits on the
/// boundary, i.e. when the bracket holds no interior maximum.
template <class F>
search_result golden_section_maximize(F&& f, double lo, double hi, double tol,
                                      int max_iterations = 200)
{
    if (!(lo < hi))
        throw invalid_argument_error("golden-section bracket needs lo < hi");
    if (!(tol > 0.0))
        throw invalid_argument_error("golden-section tolerance must be positive");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double f_lo = f(lo);
    const double f_hi = f(hi);

    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int it = 0;
    while (b - a > tol && it < max_iterations) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++it;
    }
    search_result r;
    r.iterations = it;
    r.bracket_width = b - a;
    if (f1 >= f2) {
        r.x = x1;
        r.objective = f1;
    } else {
        r.x = x2;
        r.objective = f2;
    }
    // An interior maximum must beat both ends of the original bracket.
    if (f_lo >= r.objective || f_hi >= r.objective)
        throw bracket_error("no interior maximum in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]; maximum lies on the boundary");
    return r;
}

/// Bisection for a sign change of `g` on [lo, hi]. Stops once |g(mid)| <=
/// value_tol or the bracket is narrower than x_tol.
template <class G>
search_result bisect_root(G&& g, double lo, double hi, double value_tol,
                          double x_tol = 1e-14, int max_iterations = 200)
{
    if (!(lo < hi))
        throw invalid_argument_error("bisection bracket needs lo < hi");
    double g_lo = g(lo);
    const double g_hi = g(hi);
    if (g_lo == 0.0)
        return {lo, 0.0, 0.0, 0};
    if (g_hi == 0.0)
        return {hi, 0.0, 0.0, 0};
    if ((g_lo > 0.0) == (g_hi > 0.0))
        throw bracket_error("no sign change in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");

    double a = lo;
    double b = hi;
    search_result r;
    for (int it = 1; it <= max_iterations; ++it) {
        const double mid = 0.5 * (a + b);
        const double g_mid = g(mid);
        r = {mid, g_mid, b - a, it};
        if (std::abs(g_mid) <= value_tol || (b - a) <= x_tol)
            break;
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            a = mid;
            g_lo = g_mid;
        } else {
            b = mid;
        }
    }
    r.bracket_width = b - a;
    return r;
}

} // namespace fluxmix

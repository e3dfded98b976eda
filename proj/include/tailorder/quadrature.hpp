#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tailorder::quadrature {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
};

inline constexpr double relative_tolerance = 1e-12;
inline constexpr unsigned max_depth = 24;

/// Integral over [0, inf) by adaptive 15-point Gauss-Kronrod. Non-finite
/// integrand values (which only appear where the exponential weight has
/// underflowed) contribute zero.
template <class F>
Result half_line(F&& f) {
    auto guarded = [&](double w) {
        const double v = f(w);
        return std::isfinite(v) ? v : 0.0;
    };
    Result r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        guarded, 0.0, std::numeric_limits<double>::infinity(), max_depth, relative_tolerance, &r.abs_error);
    return r;
}

/// Integral over the finite interval [a, b].
template <class F>
Result interval(F&& f, double a, double b) {
    auto guarded = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };
    Result r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        guarded, a, b, max_depth, relative_tolerance, &r.abs_error);
    return r;
}

} // namespace tailorder::quadrature

#pragma once

#include <cmath>
#include <string>

#include "tailorder/distribution.hpp"

namespace tailorder {

enum class IntegrationMethod { closed_form, quadrature };

/// Upper-tail integral int_p^1 Q(u) du of a spec.
struct TailIntegral {
    double p = 0.0;
    double value = 0.0;
    IntegrationMethod method = IntegrationMethod::closed_form;
    double abs_error_estimate = 0.0;
};

namespace detail {

inline void require_finite_mean(const DistributionSpec& spec, const char* what) {
    if (!spec.has_finite_mean())
        throw UnsupportedMeasureError(std::string(what) + ": " + spec.tag() + " spec has infinite mean");
}

inline void require_tvar_level(double p, const char* what) {
    if (!(p >= 0.0 && p < 1.0))
        throw DomainError(std::string(what) + ": p must lie in [0,1), got " + std::to_string(p));
}

/// (1/(1-p)) int_p^1 Q(u) du at a level given as a (p, 1-p) pair.
/// Closed form when registered unless quadrature is forced.
inline TailIntegral tail_average(const DistributionSpec& spec, Level p, bool force_quadrature = false) {
    TailIntegral r;
    r.p = p.lower;
    if (!force_quadrature) {
        if (auto cf = spec.tail_average_closed_form(p)) {
            r.value = *cf;
            return r;
        }
    }
    const auto q = spec.tail_average_quadrature(p);
    r.value = q.value;
    r.abs_error_estimate = q.abs_error;
    r.method = IntegrationMethod::quadrature;
    return r;
}

} // namespace detail

/// int_p^1 VaR[X;u] du, closed form where registered, quadrature otherwise
/// (or always, with IntegrationMethod::quadrature).
inline TailIntegral tail_integral(const DistributionSpec& spec, double p,
                                  IntegrationMethod preferred = IntegrationMethod::closed_form) {
    detail::require_tvar_level(p, "tail_integral");
    detail::require_finite_mean(spec, "tail_integral");
    auto r = detail::tail_average(spec, Level::from_lower(p), preferred == IntegrationMethod::quadrature);
    const double w = 1.0 - p;
    r.value *= w;
    r.abs_error_estimate *= w;
    return r;
}

/// TVaR[X;p] = (1/(1-p)) int_p^1 VaR[X;u] du; tvar(spec, 0) is the mean.
inline double tvar(const DistributionSpec& spec, double p) {
    detail::require_tvar_level(p, "tvar");
    detail::require_finite_mean(spec, "tvar");
    if (p == 0.0) return spec.mean().value();
    return detail::tail_average(spec, Level::from_lower(p)).value;
}

/// TVaR of the residual X_t at level p. Because the residual quantile is
/// Q(p + (1-p)F(t)) - t, this equals TVaR[X; p + (1-p)F(t)] - t.
inline double residual_tvar(const DistributionSpec& spec, double t, double p,
                            IntegrationMethod preferred = IntegrationMethod::closed_form) {
    detail::require_tvar_level(p, "residual_tvar");
    detail::require_finite_mean(spec, "residual_tvar");
    const Level at = deductible_level(spec, t);
    const Level u = residual_level(Level::from_lower(p), at);
    if (u.lower == 0.0 && preferred != IntegrationMethod::quadrature) return tvar(spec, 0.0) - t;
    return detail::tail_average(spec, u, preferred == IntegrationMethod::quadrature).value - t;
}

/// m(t) = E[X - t | X > t].
inline double mean_residual_life(const DistributionSpec& spec, double t) {
    return residual_tvar(spec, t, 0.0);
}

/// m(t) by the survival-integral route int_t^inf F_bar(y) dy / F_bar(t),
/// used to cross-check mean_residual_life. Requires a finite lower endpoint
/// or a deductible inside the support.
inline double mean_residual_life_from_survival(const DistributionSpec& spec, double t) {
    detail::require_finite_mean(spec, "mean_residual_life");
    const Level at = deductible_level(spec, t);
    // Below the lower endpoint the survival is 1 up to it.
    double start = t;
    double head = 0.0;
    const auto lo = spec.lower();
    if (lo.is_finite() && t < lo.value()) {
        head = lo.value() - t;
        start = lo.value();
    }
    const auto up = spec.upper();
    quadrature::Result body;
    if (up.is_finite()) {
        body = quadrature::interval([&](double y) { return spec.cdf_level(y).upper; }, start, up.value());
    } else {
        body = quadrature::half_line([&](double y) { return spec.cdf_level(start + y).upper; });
    }
    return (head + body.value) / at.upper;
}

/// E[max{X, F^{-1}(p)}] = p F^{-1}(p) + int_p^1 F^{-1}(u) du.
inline double mean_floored(const DistributionSpec& spec, double p) {
    require_open_probability(p, "mean_floored");
    detail::require_finite_mean(spec, "mean_floored");
    return p * quantile(spec, p) + tail_integral(spec, p).value;
}

/// TVaR at level q of the floored variable max{X, F^{-1}(p)}.
inline double tvar_floored(const DistributionSpec& spec, double p, double q) {
    require_open_probability(p, "tvar_floored");
    require_open_probability(q, "tvar_floored");
    detail::require_finite_mean(spec, "tvar_floored");
    if (q >= p) return tvar(spec, q);
    return (tail_integral(spec, p).value + quantile(spec, p) * (p - q)) / (1.0 - q);
}

} // namespace tailorder

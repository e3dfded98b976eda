#pragma once

#include <cmath>
#include <string>

#include "tailorder/error.hpp"
#include "tailorder/level.hpp"

namespace tailorder {

/// Distortion h : [0,1] -> [0,1] applied to a survival function.
///
/// Power:      h(u) = u^alpha
/// DualPower:  h(u) = 1 - (1 - u)^beta
/// Identity:   h(u) = u
class Distortion {
public:
    enum class Kind { identity, power, dual_power };

    static Distortion identity() { return Distortion(Kind::identity, 1.0); }

    static Distortion power(double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw ParameterError("power distortion: alpha must be positive, got " + std::to_string(alpha));
        return Distortion(Kind::power, alpha);
    }

    static Distortion dual_power(double beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw ParameterError("dual-power distortion: beta must be positive, got " + std::to_string(beta));
        return Distortion(Kind::dual_power, beta);
    }

    Kind kind() const { return kind_; }
    /// alpha for Power, beta for DualPower, 1 for Identity.
    double exponent() const { return exponent_; }

    double operator()(double u) const { return apply({1.0 - u, u}).upper; }

    double inverse(double v) const { return inverse({1.0 - v, v}).upper; }

    /// Maps a (cdf, survival) pair of the base distribution to the pair of
    /// the distorted one; the survival component goes through h.
    Level apply(Level base) const {
        switch (kind_) {
        case Kind::power: {
            if (base.upper <= 0.0) return {1.0, 0.0};
            const double ls = exponent_ * base.log_upper();
            return {-std::expm1(ls), std::exp(ls)};
        }
        case Kind::dual_power: {
            if (base.lower <= 0.0) return {0.0, 1.0};
            const double lf = exponent_ * base.log_lower();
            return {std::exp(lf), -std::expm1(lf)};
        }
        default:
            return base;
        }
    }

    /// Inverse of apply(): the base (cdf, survival) pair whose image is `d`.
    Level inverse(Level d) const {
        switch (kind_) {
        case Kind::power: {
            if (d.upper <= 0.0) return {1.0, 0.0};
            const double ls = d.log_upper() / exponent_;
            return {-std::expm1(ls), std::exp(ls)};
        }
        case Kind::dual_power: {
            if (d.lower <= 0.0) return {0.0, 1.0};
            const double lf = d.log_lower() / exponent_;
            return {std::exp(lf), -std::expm1(lf)};
        }
        default:
            return d;
        }
    }

    /// Factor applied to the Pareto-type tail index of the base.
    double tail_index_factor() const { return kind_ == Kind::power ? exponent_ : 1.0; }

    friend bool operator==(const Distortion&, const Distortion&) = default;

private:
    Distortion(Kind k, double e) : kind_(k), exponent_(e) {}

    Kind kind_;
    double exponent_;
};

} // namespace tailorder

#pragma once

#include <cmath>

namespace tailorder {

/// A probability carried together with its complement, each computed
/// directly so that neither suffers cancellation near 0 or 1.
/// For a cdf evaluation `lower` is F(x) and `upper` is the survival 1 - F(x);
/// for a quantile level `lower` is p and `upper` is 1 - p.
struct Level {
    double lower = 0.0;
    double upper = 1.0;

    static Level from_lower(double p) { return {p, 1.0 - p}; }
    static Level from_upper(double s) { return {1.0 - s, s}; }

    /// ln(upper) and ln(lower), taken from whichever component is stored
    /// without rounding loss (the one below 1/2 is exact relative to itself).
    double log_upper() const { return lower < 0.5 ? std::log1p(-lower) : std::log(upper); }
    double log_lower() const { return upper < 0.5 ? std::log1p(-upper) : std::log(lower); }
};

/// Level p + (1 - p) F(t): the quantile level of the unconditional
/// distribution that corresponds to level p of the residual at t.
inline Level residual_level(Level p, Level at_t) {
    return {p.lower + p.upper * at_t.lower, p.upper * at_t.upper};
}

} // namespace tailorder

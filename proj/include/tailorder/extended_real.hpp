#pragma once

#include <cmath>
#include <ostream>
#include <string>

namespace tailorder {

/// A real number or one of the two infinities. Support endpoints and means
/// use this instead of large sentinel floats.
class ExtendedReal {
public:
    enum class Kind { finite, pos_inf, neg_inf };

    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {} // NOLINT(google-explicit-constructor)

    static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::pos_inf); }
    static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::neg_inf); }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

    /// Finite value; only meaningful when is_finite().
    constexpr double value() const { return value_; }

    /// Conversion to IEEE double, infinities mapped to +-inf.
    double as_double() const {
        switch (kind_) {
        case Kind::pos_inf: return INFINITY;
        case Kind::neg_inf: return -INFINITY;
        default: return value_;
        }
    }

    /// True when x lies strictly below this endpoint.
    bool above(double x) const {
        if (kind_ == Kind::pos_inf) return true;
        if (kind_ == Kind::neg_inf) return false;
        return x < value_;
    }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::finite || a.value_ == b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& e) {
        switch (e.kind_) {
        case Kind::pos_inf: return os << "+inf";
        case Kind::neg_inf: return os << "-inf";
        default: return os << e.value_;
        }
    }

private:
    constexpr explicit ExtendedReal(Kind k) : kind_(k) {}

    Kind kind_ = Kind::finite;
    double value_ = 0.0;
};

inline ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) {
    return a.as_double() <= b.as_double() ? a : b;
}

inline ExtendedReal max(const ExtendedReal& a, const ExtendedReal& b) {
    return a.as_double() >= b.as_double() ? a : b;
}

} // namespace tailorder

#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "tailorder/distortion.hpp"
#include "tailorder/error.hpp"
#include "tailorder/extended_real.hpp"
#include "tailorder/level.hpp"
#include "tailorder/quadrature.hpp"

namespace tailorder {

// ---------------------------------------------------------------------------
// Families
//
// Every family provides
//   Level cdf_level(double x)      -> {F(x), 1 - F(x)}
//   double quantile(Level)         -> inf{x : F(x) >= p}
//   ExtendedReal lower(), upper()  -> support endpoints
//   ExtendedReal mean()
//   double tail_index()            -> Pareto-type tail index (inf if lighter)
//   std::optional<double> tail_average(Level)
//                                  -> closed form of (1/(1-p)) int_p^1 Q(u) du
// ---------------------------------------------------------------------------

/// Generalized Pareto, survival (1 + xi (x - mu)/sigma)^(-1/xi) for x >= mu.
struct Gpd {
    double xi;
    double mu;
    double sigma;

    /// Shapes this close to zero use the exponential branch.
    static constexpr double exponential_threshold = 1e-12;

    bool exponential() const { return std::abs(xi) < exponential_threshold; }

    Level cdf_level(double x) const {
        if (x <= mu) return {0.0, 1.0};
        const double z = (x - mu) / sigma;
        if (exponential()) return {-std::expm1(-z), std::exp(-z)};
        const double arg = xi * z;
        if (arg <= -1.0) return {1.0, 0.0};
        const double ls = -std::log1p(arg) / xi;
        return {-std::expm1(ls), std::exp(ls)};
    }

    double quantile(Level p) const {
        const double ls = p.log_upper();
        if (exponential()) return mu - sigma * ls;
        return mu + sigma * std::expm1(-xi * ls) / xi;
    }

    ExtendedReal lower() const { return mu; }
    ExtendedReal upper() const {
        if (xi < 0.0 && !exponential()) return mu - sigma / xi;
        return ExtendedReal::pos_inf();
    }
    ExtendedReal mean() const {
        if (xi >= 1.0) return ExtendedReal::pos_inf();
        return mu + sigma / (1.0 - xi);
    }
    double tail_index() const {
        return xi > 0.0 && !exponential() ? 1.0 / xi : std::numeric_limits<double>::infinity();
    }
    std::optional<double> tail_average(Level p) const {
        if (xi >= 1.0) return std::nullopt;
        const double ls = p.log_upper();
        if (exponential()) return mu + sigma * (1.0 - ls);
        return mu + sigma * (std::expm1(-xi * ls) / xi + 1.0) / (1.0 - xi);
    }
};

/// Classical Pareto P(a, k): survival (k/x)^a for x > k.
struct ClassicalPareto {
    double a;
    double k;

    Level cdf_level(double x) const {
        if (x <= k) return {0.0, 1.0};
        const double ls = a * std::log(k / x);
        return {-std::expm1(ls), std::exp(ls)};
    }
    double quantile(Level p) const { return k * std::exp(-p.log_upper() / a); }
    ExtendedReal lower() const { return k; }
    ExtendedReal upper() const { return ExtendedReal::pos_inf(); }
    ExtendedReal mean() const {
        if (a <= 1.0) return ExtendedReal::pos_inf();
        return a * k / (a - 1.0);
    }
    double tail_index() const { return a; }
    std::optional<double> tail_average(Level p) const {
        if (a <= 1.0) return std::nullopt;
        return a * quantile(p) / (a - 1.0);
    }
};

/// Logistic: survival 1 / (1 + exp((x - mu)/sigma)).
struct Logistic {
    double mu;
    double sigma;

    Level cdf_level(double x) const {
        const double z = (x - mu) / sigma;
        return {1.0 / (1.0 + std::exp(-z)), 1.0 / (1.0 + std::exp(z))};
    }
    double quantile(Level p) const { return mu + sigma * (p.log_lower() - p.log_upper()); }
    ExtendedReal lower() const { return ExtendedReal::neg_inf(); }
    ExtendedReal upper() const { return ExtendedReal::pos_inf(); }
    ExtendedReal mean() const { return mu; }
    double tail_index() const { return std::numeric_limits<double>::infinity(); }
    std::optional<double> tail_average(Level p) const {
        // (1/s) int_0^s ln((1-v)/v) dv = -(p ln p)/s - ln s, with p = 1 - s.
        const double plogp = p.lower > 0.0 ? p.lower * p.log_lower() : 0.0;
        return mu + sigma * (-plogp / p.upper - p.log_upper());
    }
};

/// Log-logistic with survival 1 / (1 + (x/scale)^shape), x > 0, so that
/// exp(Logistic(mu, sigma)) is LogLogistic(e^mu, 1/sigma).
struct LogLogistic {
    double scale;
    double shape;

    Level cdf_level(double x) const {
        if (x <= 0.0) return {0.0, 1.0};
        const double r = shape * std::log(x / scale);
        return {1.0 / (1.0 + std::exp(-r)), 1.0 / (1.0 + std::exp(r))};
    }
    double quantile(Level p) const {
        return scale * std::exp((p.log_lower() - p.log_upper()) / shape);
    }
    ExtendedReal lower() const { return 0.0; }
    ExtendedReal upper() const { return ExtendedReal::pos_inf(); }
    ExtendedReal mean() const {
        if (shape <= 1.0) return ExtendedReal::pos_inf();
        const double b = std::numbers::pi / shape;
        return scale * b / std::sin(b);
    }
    double tail_index() const { return shape; }
    std::optional<double> tail_average(Level) const { return std::nullopt; }
};

/// Uniform on (lo, hi).
struct Uniform {
    double lo;
    double hi;

    Level cdf_level(double x) const {
        if (x <= lo) return {0.0, 1.0};
        if (x >= hi) return {1.0, 0.0};
        const double w = hi - lo;
        return {(x - lo) / w, (hi - x) / w};
    }
    double quantile(Level p) const {
        const double w = hi - lo;
        return p.lower < 0.5 ? lo + p.lower * w : hi - p.upper * w;
    }
    ExtendedReal lower() const { return lo; }
    ExtendedReal upper() const { return hi; }
    ExtendedReal mean() const { return 0.5 * (lo + hi); }
    double tail_index() const { return std::numeric_limits<double>::infinity(); }
    std::optional<double> tail_average(Level p) const { return hi - 0.5 * p.upper * (hi - lo); }
};

/// Point mass p0 at x = p0 mixed with Uniform(p0, 1) of weight 1 - p0, i.e.
/// F(x) = 0 for x < p0, x on [p0, 1), 1 beyond.
struct Ce1Mixture {
    double p0;

    Level cdf_level(double x) const {
        if (x < p0) return {0.0, 1.0};
        if (x >= 1.0) return {1.0, 0.0};
        return {x, 1.0 - x};
    }
    double quantile(Level p) const { return p.lower <= p0 ? p0 : p.lower; }
    ExtendedReal lower() const { return p0; }
    ExtendedReal upper() const { return 1.0; }
    ExtendedReal mean() const { return (p0 * p0 + 1.0) / 2.0; }
    double tail_index() const { return std::numeric_limits<double>::infinity(); }
    std::optional<double> tail_average(Level p) const {
        if (p.lower >= p0) return 1.0 - 0.5 * p.upper;
        return ((1.0 - p0 * p0) / 2.0 + (p0 - p.lower) * p0) / p.upper;
    }
};

class DistributionSpec;

/// Survival h(F_bar(x)) of a base spec. Kept symbolically.
struct Distorted {
    std::shared_ptr<const DistributionSpec> base;
    Distortion distortion;
};

// ---------------------------------------------------------------------------

/// Immutable claim-size model. Construct through the named factories, which
/// validate parameters.
class DistributionSpec {
public:
    using Family = std::variant<Gpd, ClassicalPareto, Logistic, LogLogistic, Uniform, Ce1Mixture, Distorted>;

    static DistributionSpec gpd(double xi, double mu, double sigma) {
        require_finite("gpd", "xi", xi);
        require_finite("gpd", "mu", mu);
        require_positive("gpd", "sigma", sigma);
        return DistributionSpec(Gpd{xi, mu, sigma});
    }
    static DistributionSpec pareto(double a, double k) {
        require_positive("pareto", "a", a);
        require_positive("pareto", "k", k);
        return DistributionSpec(ClassicalPareto{a, k});
    }
    static DistributionSpec logistic(double mu, double sigma) {
        require_finite("logistic", "mu", mu);
        require_positive("logistic", "sigma", sigma);
        return DistributionSpec(Logistic{mu, sigma});
    }
    static DistributionSpec loglogistic(double scale, double shape) {
        require_positive("loglogistic", "scale", scale);
        require_positive("loglogistic", "shape", shape);
        return DistributionSpec(LogLogistic{scale, shape});
    }
    static DistributionSpec uniform(double lo, double hi) {
        require_finite("uniform", "lo", lo);
        require_finite("uniform", "hi", hi);
        if (!(hi > lo)) throw ParameterError("uniform: hi must exceed lo");
        return DistributionSpec(Uniform{lo, hi});
    }
    static DistributionSpec ce1_mixture(double p0) {
        if (!(p0 > 0.0 && p0 < 1.0)) throw ParameterError("ce1_mixture: p0 must lie in (0,1)");
        return DistributionSpec(Ce1Mixture{p0});
    }
    static DistributionSpec distorted(DistributionSpec base, Distortion d) {
        return DistributionSpec(Distorted{std::make_shared<const DistributionSpec>(std::move(base)), d});
    }

    const Family& family() const { return family_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&family_); }

    /// Short family tag, matching the spec-file "family" field.
    std::string tag() const {
        return std::visit(
            [](const auto& f) -> std::string {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Gpd>) return "gpd";
                else if constexpr (std::is_same_v<T, ClassicalPareto>) return "pareto";
                else if constexpr (std::is_same_v<T, Logistic>) return "logistic";
                else if constexpr (std::is_same_v<T, LogLogistic>) return "loglogistic";
                else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
                else if constexpr (std::is_same_v<T, Ce1Mixture>) return "ce1_mixture";
                else return "distorted";
            },
            family_);
    }

    Level cdf_level(double x) const {
        return std::visit(
            [x](const auto& f) -> Level {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return f.distortion.apply(f.base->cdf_level(x));
                else
                    return f.cdf_level(x);
            },
            family_);
    }

    double quantile_at(Level p) const {
        return std::visit(
            [p](const auto& f) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return f.base->quantile_at(f.distortion.inverse(p));
                else
                    return f.quantile(p);
            },
            family_);
    }

    ExtendedReal lower() const {
        return std::visit(
            [](const auto& f) -> ExtendedReal {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return f.base->lower();
                else
                    return f.lower();
            },
            family_);
    }

    ExtendedReal upper() const {
        return std::visit(
            [](const auto& f) -> ExtendedReal {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return f.base->upper();
                else
                    return f.upper();
            },
            family_);
    }

    double tail_index() const {
        return std::visit(
            [](const auto& f) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return f.base->tail_index() * f.distortion.tail_index_factor();
                else
                    return f.tail_index();
            },
            family_);
    }

    /// Closed form of the upper-tail average of the quantile, if registered.
    std::optional<double> tail_average_closed_form(Level p) const {
        return std::visit(
            [p](const auto& f) -> std::optional<double> {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>) {
                    if (f.distortion.kind() == Distortion::Kind::identity)
                        return f.base->tail_average_closed_form(p);
                    return std::nullopt;
                } else {
                    return f.tail_average(p);
                }
            },
            family_);
    }

    bool has_finite_mean() const {
        return std::visit(
            [this](const auto& f) -> bool {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return tail_index() > 1.0;
                else
                    return f.mean().is_finite();
            },
            family_);
    }

    /// Upper-tail average (1/(1-p)) int_p^1 Q(u) du by quadrature, with the
    /// substitution u = 1 - (1-p) e^{-w}, which turns it into an Exp(1)
    /// expectation on [0, inf).
    quadrature::Result tail_average_quadrature(Level p) const {
        return quadrature::half_line([&](double w) {
            const double e = std::exp(-w);
            if (e == 0.0) return 0.0;
            const Level u{p.lower - p.upper * std::expm1(-w), p.upper * e};
            if (u.upper <= 0.0) return 0.0;
            return quantile_at(u) * e;
        });
    }

    /// Lower-half integral int_0^{1/2} Q(u) du by quadrature, u = e^{-w}/2.
    quadrature::Result lower_half_integral_quadrature() const {
        return quadrature::half_line([&](double w) {
            const double e = 0.5 * std::exp(-w);
            if (e == 0.0) return 0.0;
            return quantile_at({e, 1.0 - e}) * e;
        });
    }

    /// Mean; +inf when the finite-mean condition fails.
    ExtendedReal mean() const {
        if (const auto* d = as<Distorted>()) {
            if (!has_finite_mean()) return ExtendedReal::pos_inf();
            if (d->distortion.kind() == Distortion::Kind::identity) return d->base->mean();
            const auto lo = lower_half_integral_quadrature();
            const auto hi = tail_average_quadrature({0.5, 0.5});
            return lo.value + 0.5 * hi.value;
        }
        return std::visit(
            [](const auto& f) -> ExtendedReal {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Distorted>)
                    return ExtendedReal::pos_inf(); // unreachable
                else
                    return f.mean();
            },
            family_);
    }

private:
    explicit DistributionSpec(Family f) : family_(std::move(f)) {}

    static void require_finite(const char* fam, const char* field, double v) {
        if (!std::isfinite(v))
            throw ParameterError(std::string(fam) + ": " + field + " must be finite");
    }
    static void require_positive(const char* fam, const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParameterError(std::string(fam) + ": " + field + " must be positive, got " + std::to_string(v));
    }

    Family family_;
};

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

struct Description {
    ExtendedReal mean;
    ExtendedReal lower;
    ExtendedReal upper;
};

inline double cdf(const DistributionSpec& spec, double x) { return spec.cdf_level(x).lower; }

inline double survival(const DistributionSpec& spec, double x) { return spec.cdf_level(x).upper; }

inline void require_open_probability(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError(std::string(what) + ": p must lie in (0,1), got " + std::to_string(p));
}

/// Left-continuous generalized inverse inf{x : F(x) >= p}.
inline double quantile(const DistributionSpec& spec, double p) {
    require_open_probability(p, "quantile");
    return spec.quantile_at(Level::from_lower(p));
}

inline Description describe(const DistributionSpec& spec) {
    return {spec.mean(), spec.lower(), spec.upper()};
}

/// Throws unless t lies strictly below the right endpoint, and returns the
/// (cdf, survival) pair at t.
inline Level deductible_level(const DistributionSpec& spec, double t) {
    if (!std::isfinite(t)) throw DomainError("deductible must be finite");
    if (!spec.upper().above(t))
        throw DomainError("deductible t=" + std::to_string(t) + " is not below the right endpoint of the support");
    const Level at = spec.cdf_level(t);
    if (!(at.upper > 0.0))
        throw DomainError("survival underflows at deductible t=" + std::to_string(t));
    return at;
}

/// VaR of the residual X_t = [X - t | X > t] at level p:
/// F^{-1}(p + (1 - p) F(t)) - t.
inline double residual_quantile(const DistributionSpec& spec, double t, double p) {
    require_open_probability(p, "residual_quantile");
    const Level at = deductible_level(spec, t);
    return spec.quantile_at(residual_level(Level::from_lower(p), at)) - t;
}

inline DistributionSpec apply_distortion(const DistributionSpec& spec, const Distortion& d) {
    return DistributionSpec::distorted(spec, d);
}

} // namespace tailorder

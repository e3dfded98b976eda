#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tailorder/distribution.hpp"
#include "tailorder/error.hpp"

namespace tailorder {

/// Sorted claim sample. Immutable after construction.
class EmpiricalSample {
public:
    explicit EmpiricalSample(std::vector<double> values, std::string provenance = {})
        : values_(std::move(values)), provenance_(std::move(provenance)) {
        if (values_.empty()) throw DomainError("empirical sample must contain at least one value");
        for (double v : values_)
            if (!std::isfinite(v)) throw DomainError("empirical sample contains a non-finite value");
        std::sort(values_.begin(), values_.end());
    }

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::string& provenance() const { return provenance_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    double mean() const { return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size()); }

    /// Number of values strictly greater than x.
    std::size_t count_above(double x) const {
        return static_cast<std::size_t>(values_.end() - std::upper_bound(values_.begin(), values_.end(), x));
    }

    double survival(double x) const {
        return static_cast<double>(count_above(x)) / static_cast<double>(size());
    }

private:
    std::vector<double> values_;
    std::string provenance_;
};

namespace detail {

/// ceil(n p) guarded against p*n landing one ulp above an integer.
inline std::size_t order_index(std::size_t n, double p) {
    const double np = static_cast<double>(n) * p;
    const double guard = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);
    auto i = static_cast<std::size_t>(std::ceil(np - guard));
    return std::clamp<std::size_t>(i, 1, n);
}

} // namespace detail

/// x_(ceil(n p)): the left-continuous inverse of the empirical cdf.
inline double empirical_quantile(const EmpiricalSample& s, double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw DomainError("empirical_quantile: p must lie in (0,1], got " + std::to_string(p));
    return s.values()[detail::order_index(s.size(), p) - 1];
}

/// (1/(1-p)) int_p^1 empirical_quantile(u) du as an exact weighted sum of
/// order statistics; p = 0 gives the arithmetic mean.
inline double empirical_tvar(const EmpiricalSample& s, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw DomainError("empirical_tvar: p must lie in [0,1), got " + std::to_string(p));
    if (p == 0.0) return s.mean();
    const auto& x = s.values();
    const std::size_t n = s.size();
    const double np = static_cast<double>(n) * p;
    // Order statistic x_(i) covers ((i-1)/n, i/n]; the first one reaching past p
    // is i0 = floor(n p) + 1 and only its part above p counts.
    auto i0 = static_cast<std::size_t>(std::floor(np)) + 1;
    if (i0 > n) i0 = n;
    double acc = x[i0 - 1] * (static_cast<double>(i0) - np);
    for (std::size_t i = i0; i < n; ++i) acc += x[i];
    return acc / (static_cast<double>(n) * (1.0 - p));
}

// ---------------------------------------------------------------------------
// P-P plot of survival functions
// ---------------------------------------------------------------------------

struct PpPoint {
    double t;
    double sf_x;
    double sf_y;
};

struct PpPlot {
    std::vector<PpPoint> points;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
};

/// Points (F_bar_n(t), G_bar_n(t)) at t = -inf and at every pooled jump
/// location, in increasing t, so the curve runs from (1,1) to (0,0).
inline PpPlot pp_plot(const EmpiricalSample& sx, const EmpiricalSample& sy) {
    std::vector<double> pooled;
    pooled.reserve(sx.size() + sy.size());
    std::merge(sx.values().begin(), sx.values().end(), sy.values().begin(), sy.values().end(),
               std::back_inserter(pooled));
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    PpPlot plot;
    plot.n_x = sx.size();
    plot.n_y = sy.size();
    plot.points.reserve(pooled.size() + 1);
    plot.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    for (double t : pooled) plot.points.push_back({t, sx.survival(t), sy.survival(t)});
    return plot;
}

struct StarShapeOptions {
    /// Relative decrease of the ratio below which a step is not counted.
    double ratio_tolerance = 1e-12;
    /// Minimum number of consecutive decreasing steps forming a violation.
    std::size_t min_run = 2;
    /// Required drop of the ratio over a run, in standard errors of the
    /// empirical ratio at the run's end. Ignored when sample sizes are
    /// unknown (0) or z <= 0.
    double z = 3.0;
};

struct StarShapeViolation {
    std::size_t first_index = 0; ///< index into the point list where the run starts
    std::size_t last_index = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
    double ratio_begin = 0.0;
    double ratio_end = 0.0;
    double z_score = 0.0; ///< relative drop over standard error (inf if unknown sizes)
};

struct StarShapeResult {
    bool star_shaped = true;
    std::vector<StarShapeViolation> violations;
};

/// Star shape of the P-P curve with respect to the origin, i.e. y/x
/// nondecreasing as x decreases (G_bar/F_bar nondecreasing in t, the hazard
/// rate criterion). Points with x = 0 or y = 0 are skipped.
inline StarShapeResult star_shape_check(const std::vector<PpPoint>& points, const StarShapeOptions& opt = {},
                                        std::size_t n_x = 0, std::size_t n_y = 0) {
    std::vector<std::size_t> idx;
    std::vector<double> ratio;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].sf_x > 0.0 && points[i].sf_y > 0.0) {
            idx.push_back(i);
            ratio.push_back(points[i].sf_y / points[i].sf_x);
        }
    }
    const bool use_se = n_x > 0 && n_y > 0 && opt.z > 0.0;

    StarShapeResult res;
    std::size_t i = 0;
    while (i + 1 < ratio.size()) {
        std::size_t j = i;
        while (j + 1 < ratio.size() && ratio[j + 1] < ratio[j] * (1.0 - opt.ratio_tolerance)) ++j;
        if (j - i >= opt.min_run && j > i) {
            const auto& end = points[idx[j]];
            const double drop = 1.0 - ratio[j] / ratio[i];
            double z = std::numeric_limits<double>::infinity();
            bool flagged = true;
            if (use_se) {
                const double se = std::sqrt(1.0 / (static_cast<double>(n_x) * end.sf_x) +
                                            1.0 / (static_cast<double>(n_y) * end.sf_y));
                z = drop / se;
                flagged = z > opt.z;
            }
            if (flagged) {
                res.violations.push_back({idx[i], idx[j], points[idx[i]].t, end.t, ratio[i], ratio[j], z});
            }
        }
        i = std::max(j, i + 1);
    }
    res.star_shaped = res.violations.empty();
    return res;
}

inline StarShapeResult star_shape_check(const PpPlot& plot, const StarShapeOptions& opt = {}) {
    return star_shape_check(plot.points, opt, plot.n_x, plot.n_y);
}

// ---------------------------------------------------------------------------
// Classical Pareto fit and goodness of fit
// ---------------------------------------------------------------------------

/// D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
inline double ks_statistic(const EmpiricalSample& s, const DistributionSpec& spec) {
    const auto& x = s.values();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(spec, x[i]);
        const double hi = static_cast<double>(i + 1) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

struct ParetoFit {
    double k = 0.0;
    double a = 0.0;
    double loglik = 0.0;
    double ks = 0.0;

    DistributionSpec spec() const { return DistributionSpec::pareto(a, k); }
    /// a k / (a - 1), +inf when a <= 1.
    ExtendedReal mean() const { return spec().mean(); }
};

/// Maximum likelihood: k = sample minimum, a = n / sum ln(x_i / k).
inline ParetoFit fit_pareto_mle(const EmpiricalSample& s) {
    if (s.size() < 2) throw DomainError("fit_pareto_mle: need at least two observations");
    if (!(s.min() > 0.0)) throw DomainError("fit_pareto_mle: all observations must be positive");
    if (s.min() == s.max()) throw DegenerateFitError("fit_pareto_mle: all observations are equal");
    const double n = static_cast<double>(s.size());
    const double k = s.min();
    double sum_log_ratio = 0.0;
    double sum_log = 0.0;
    for (double v : s.values()) {
        sum_log_ratio += std::log(v / k);
        sum_log += std::log(v);
    }
    ParetoFit fit;
    fit.k = k;
    fit.a = n / sum_log_ratio;
    fit.loglik = n * std::log(fit.a) + n * fit.a * std::log(k) - (fit.a + 1.0) * sum_log;
    fit.ks = ks_statistic(s, fit.spec());
    return fit;
}

} // namespace tailorder

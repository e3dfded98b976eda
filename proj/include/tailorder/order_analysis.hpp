#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tailorder/distribution.hpp"
#include "tailorder/error.hpp"
#include "tailorder/parallel.hpp"
#include "tailorder/risk_measures.hpp"

namespace tailorder {

// ---------------------------------------------------------------------------
// H_t and L_t
// ---------------------------------------------------------------------------

/// H_t(p) = G_t^{-1}(p) - F_t^{-1}(p), the difference of residual quantiles
/// of y and x at deductible t.
inline double h_function(const DistributionSpec& x, const DistributionSpec& y, double t, double p) {
    return residual_quantile(y, t, p) - residual_quantile(x, t, p);
}

/// L_t(p) = int_p^1 H_t(u) du = (1 - p)(TVaR[Y_t;p] - TVaR[X_t;p]).
inline double l_function(const DistributionSpec& x, const DistributionSpec& y, double t, double p) {
    return (1.0 - p) * (residual_tvar(y, t, p) - residual_tvar(x, t, p));
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Chebyshev-Lobatto points on [lo, hi], clustered at both ends.
inline std::vector<double> chebyshev_grid(std::size_t n = 512, double lo = 1e-4, double hi = 1.0 - 1e-6) {
    if (n < 2) throw DomainError("chebyshev_grid: need at least two points");
    std::vector<double> g(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = mid - half * std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

/// Default p-grid: 512 Chebyshev points on (1e-4, 1 - 1e-6).
inline std::vector<double> default_p_grid() { return chebyshev_grid(); }

/// n equally spaced points on [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n < 1) throw DomainError("linear_grid: need at least one point");
    if (n == 1) return {lo};
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

/// Deductibles at the quantiles i/(n+1), i = 1..n, of each spec, plus five
/// points below the lower support endpoint where both cdfs vanish. Only t
/// strictly below both right endpoints are kept.
inline std::vector<double> default_t_grid(const DistributionSpec& x, const DistributionSpec& y,
                                          std::size_t n_quantiles = 99) {
    std::vector<double> g;
    for (std::size_t i = 1; i <= n_quantiles; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(n_quantiles + 1);
        g.push_back(quantile(x, q));
        g.push_back(quantile(y, q));
    }
    const auto lo = min(x.lower(), y.lower());
    if (lo.is_finite()) {
        const double w = std::max(1.0, std::abs(lo.value()));
        for (double f : {1.0, 0.5, 0.25, 0.1, 0.01}) g.push_back(lo.value() - w * f);
    }
    const auto up = min(x.upper(), y.upper());
    std::erase_if(g, [&](double t) { return !std::isfinite(t) || !up.above(t); });
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

/// Largest spacing between `value` and its grid neighbours; the resolution
/// with which a grid-located quantity is known.
inline double grid_resolution(const std::vector<double>& grid, double value) {
    if (grid.size() < 2) return 0.0;
    auto it = std::lower_bound(grid.begin(), grid.end(), value);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - grid.begin()), grid.size() - 1);
    double r = 0.0;
    if (i > 0) r = std::max(r, grid[i] - grid[i - 1]);
    if (i + 1 < grid.size()) r = std::max(r, grid[i + 1] - grid[i]);
    return r;
}

inline void validate_p_grid(const std::vector<double>& p_grid, std::size_t min_points = 64) {
    if (p_grid.size() < min_points)
        throw DomainError("p-grid needs at least " + std::to_string(min_points) + " points");
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > 0.0 && p_grid[i] < 1.0)) throw DomainError("p-grid points must lie in (0,1)");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw DomainError("p-grid must be strictly increasing");
    }
}

// ---------------------------------------------------------------------------
// Crossing analysis
// ---------------------------------------------------------------------------

enum class Classification { t1, t2, indeterminate };
enum class Direction { none, minus_to_plus, plus_to_minus };

inline const char* to_string(Classification c) {
    switch (c) {
    case Classification::t1: return "T1";
    case Classification::t2: return "T2";
    default: return "indeterminate";
    }
}

inline const char* to_string(Direction d) {
    switch (d) {
    case Direction::minus_to_plus: return "minus-to-plus";
    case Direction::plus_to_minus: return "plus-to-minus";
    default: return "none";
    }
}

struct AnalysisOptions {
    /// |H_t(p)| < zero_tolerance * (1 + scale) counts as zero and is discarded;
    /// scale is the largest |residual quantile| on the grid.
    double zero_tolerance = 1e-10;
    /// L_t(p) < -l_tolerance * (1 - p)(1 + |TVaR[X_t;p]| + |TVaR[Y_t;p]|) is negative.
    double l_tolerance = 1e-9;
    /// Width at which bisection stops.
    double bisection_tolerance = 1e-10;
};

/// Sign structure of H_t over a p-grid at one deductible.
struct CrossingReport {
    double t = 0.0;
    Classification classification = Classification::indeterminate;
    std::size_t sign_changes = 0;
    Direction last_change_direction = Direction::none;
    /// Up-crossing point of H_t, refined by bisection.
    std::optional<double> p_t;
    /// inf{p : L_t(q) >= 0 for all q >= p}, grid-located then bisected.
    std::optional<double> p_prime_t;
    double min_h = 0.0;
    double zero_tol = 0.0;
};

namespace detail {

template <class Pred>
double bisect_boundary(double lo, double hi, double tol, Pred&& is_right) {
    // Invariant: !is_right(lo), is_right(hi).
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (is_right(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace detail

/// Counts sign changes of H_t on the grid (zeros discarded), refines the
/// up-crossing point when the last change is from - to +, and locates the
/// threshold p'_t of L_t. The classification field is left indeterminate;
/// classify_t() fills it in.
inline CrossingReport sign_change_analysis(const DistributionSpec& x, const DistributionSpec& y, double t,
                                           const std::vector<double>& p_grid, const AnalysisOptions& opt = {}) {
    validate_p_grid(p_grid);
    deductible_level(x, t);
    deductible_level(y, t);

    const std::size_t n = p_grid.size();
    std::vector<double> h(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double qx = residual_quantile(x, t, p_grid[i]);
        const double qy = residual_quantile(y, t, p_grid[i]);
        h[i] = qy - qx;
        scale = std::max({scale, std::abs(qx), std::abs(qy)});
    }

    CrossingReport r;
    r.t = t;
    r.zero_tol = opt.zero_tolerance * (1.0 + scale);
    r.min_h = *std::min_element(h.begin(), h.end());

    std::vector<int> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = std::abs(h[i]) < r.zero_tol ? 0 : (h[i] > 0.0 ? 1 : -1);

    int prev = 0;
    std::size_t last_neg = n; // index of last negative term preceding the final change
    std::size_t first_pos_after = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (sign[i] == 0) continue;
        if (prev != 0 && sign[i] != prev) {
            ++r.sign_changes;
            r.last_change_direction = sign[i] > 0 ? Direction::minus_to_plus : Direction::plus_to_minus;
            if (sign[i] > 0) first_pos_after = i;
        }
        if (sign[i] < 0) last_neg = i;
        prev = sign[i];
    }

    if (r.last_change_direction == Direction::minus_to_plus && first_pos_after < n && last_neg < first_pos_after) {
        // Between the last negative term and the first positive one only
        // discarded zeros remain; H_t turns positive in (p_{k-1}, p_k]. The
        // tolerance only decides the bracket: refining on the raw sign keeps
        // p_t free of a tolerance-sized bias.
        const std::size_t k = first_pos_after;
        r.p_t = detail::bisect_boundary(p_grid[k - 1], p_grid[k], opt.bisection_tolerance,
                                        [&](double p) { return h_function(x, y, t, p) > 0.0; });
    }

    if (x.has_finite_mean() && y.has_finite_mean()) {
        auto negative = [&](double p) {
            const double tx = residual_tvar(x, t, p);
            const double ty = residual_tvar(y, t, p);
            const double l = (1.0 - p) * (ty - tx);
            return l < -opt.l_tolerance * (1.0 - p) * (1.0 + std::abs(tx) + std::abs(ty));
        };
        auto raw_negative = [&](double p) { return residual_tvar(y, t, p) < residual_tvar(x, t, p); };
        std::optional<std::size_t> last_negative;
        for (std::size_t i = n; i-- > 0;) {
            if (negative(p_grid[i])) {
                last_negative = i;
                break;
            }
        }
        if (!last_negative) {
            r.p_prime_t = p_grid.front();
        } else if (*last_negative + 1 < n) {
            const std::size_t i = *last_negative;
            r.p_prime_t = detail::bisect_boundary(p_grid[i], p_grid[i + 1], opt.bisection_tolerance,
                                                  [&](double p) { return !raw_negative(p); });
        }
    }
    return r;
}

/// T1 when H_t >= -tol on the whole grid; T2 when the last sign change is
/// from - to + with an up-crossing point in (0,1); indeterminate otherwise.
inline CrossingReport classify_t(const DistributionSpec& x, const DistributionSpec& y, double t,
                                 const std::vector<double>& p_grid, const AnalysisOptions& opt = {}) {
    CrossingReport r = sign_change_analysis(x, y, t, p_grid, opt);
    if (r.min_h >= -r.zero_tol)
        r.classification = Classification::t1;
    else if (r.last_change_direction == Direction::minus_to_plus && r.p_t && *r.p_t > 0.0 && *r.p_t < 1.0)
        r.classification = Classification::t2;
    else
        r.classification = Classification::indeterminate;
    return r;
}

enum class P0Mode { conservative, exact };

inline const char* to_string(P0Mode m) { return m == P0Mode::exact ? "exact" : "conservative"; }

struct P0Estimate {
    double p0 = 0.0;
    /// Local p-grid spacing at p0.
    double resolution = 0.0;
    bool feasible = false;
    P0Mode mode = P0Mode::conservative;
    std::vector<CrossingReport> per_t;
};

/// Smallest level p0 at which TVaR[X_t;p] <= TVaR[Y_t;p] is certified for
/// every t of the grid and p >= p0. Conservative mode takes the largest
/// up-crossing point over T2; exact mode the largest p'_t. With no T2
/// deductibles p0 is the smallest grid point.
inline P0Estimate estimate_p0(const DistributionSpec& x, const DistributionSpec& y, const std::vector<double>& t_grid,
                              const std::vector<double>& p_grid, P0Mode mode, const AnalysisOptions& opt = {}) {
    if (t_grid.empty()) throw DomainError("estimate_p0: empty t-grid");
    validate_p_grid(p_grid);

    P0Estimate est;
    est.mode = mode;
    est.per_t.resize(t_grid.size());
    detail::parallel_for(t_grid.size(), [&](std::size_t i) { est.per_t[i] = classify_t(x, y, t_grid[i], p_grid, opt); });

    est.feasible = true;
    double p0 = p_grid.front();
    for (const auto& r : est.per_t) {
        if (r.classification == Classification::indeterminate) {
            est.feasible = false;
            continue;
        }
        if (r.classification != Classification::t2) continue;
        if (mode == P0Mode::conservative) {
            p0 = std::max(p0, *r.p_t);
        } else if (r.p_prime_t) {
            p0 = std::max(p0, *r.p_prime_t);
        } else {
            est.feasible = false;
        }
    }
    est.p0 = p0;
    est.resolution = grid_resolution(p_grid, p0);
    return est;
}

/// Exact p0 for two classical Pareto risks,
/// 1 - [a_X (a_Y - 1) k_X / (a_Y (a_X - 1) k_Y)]^{a_X a_Y / (a_Y - a_X)},
/// valid when a_X > a_Y > 1, k_X > k_Y and E[X] > E[Y].
inline double pareto_p0_closed_form(const ClassicalPareto& x, const ClassicalPareto& y) {
    if (!(x.a > y.a && y.a > 1.0))
        throw OrderingConditionsError("condition (ii) a_X > a_Y > 1 does not hold");
    if (!(x.k > y.k)) throw OrderingConditionsError("condition (iii) k_X > k_Y does not hold");
    const double mx = x.a * x.k / (x.a - 1.0);
    const double my = y.a * y.k / (y.a - 1.0);
    if (!(mx > my))
        throw OrderingConditionsError("condition (i) a_X k_X/(a_X - 1) > a_Y k_Y/(a_Y - 1) does not hold");
    const double ratio = x.a * (y.a - 1.0) * x.k / (y.a * (x.a - 1.0) * y.k);
    const double exponent = x.a * y.a / (y.a - x.a);
    return -std::expm1(exponent * std::log(ratio));
}

inline double pareto_p0_closed_form(const DistributionSpec& x, const DistributionSpec& y) {
    const auto* px = x.as<ClassicalPareto>();
    const auto* py = y.as<ClassicalPareto>();
    if (!px || !py) throw ParameterError("pareto_p0_closed_form: both specs must be classical Pareto");
    return pareto_p0_closed_form(*px, *py);
}

// ---------------------------------------------------------------------------
// Order checks
// ---------------------------------------------------------------------------

struct OrderKind {
    enum class Type { st, hr, mrl, p_rl, tvar_rl };
    Type type = Type::st;
    double level = 0.0; ///< p for p-rl, p0 for p0-tvar-rl

    static OrderKind st() { return {Type::st, 0.0}; }
    static OrderKind hr() { return {Type::hr, 0.0}; }
    static OrderKind mrl() { return {Type::mrl, 0.0}; }
    static OrderKind p_rl(double p) { return {Type::p_rl, p}; }
    static OrderKind tvar_rl(double p0) { return {Type::tvar_rl, p0}; }

    friend bool operator==(const OrderKind&, const OrderKind&) = default;
};

inline std::string to_string(const OrderKind& k) {
    switch (k.type) {
    case OrderKind::Type::st: return "st";
    case OrderKind::Type::hr: return "hr";
    case OrderKind::Type::mrl: return "mrl";
    case OrderKind::Type::p_rl: return "p-rl(" + std::to_string(k.level) + ")";
    default: return "p0-tvar-rl(" + std::to_string(k.level) + ")";
    }
}

struct Witness {
    std::optional<double> t;
    std::optional<double> p;
    /// rhs - lhs of the violated inequality (negative).
    double margin = 0.0;
};

struct OrderVerdict {
    OrderKind kind;
    bool holds = true;
    std::optional<Witness> violation_witness;
    std::size_t t_points = 0;
    std::size_t p_points = 0;
};

/// Checks X <= Y in the requested order on the given grids. A pair
/// (lhs, rhs) violates when rhs - lhs < -tol (1 + max(|lhs|, |rhs|)); the
/// first violation in t-major order is kept as witness.
inline OrderVerdict check_order(const DistributionSpec& x, const DistributionSpec& y, const OrderKind& kind,
                                const std::vector<double>& t_grid, const std::vector<double>& p_grid,
                                double tol = 1e-9) {
    using Type = OrderKind::Type;
    OrderVerdict v;
    v.kind = kind;
    if ((kind.type == Type::p_rl || kind.type == Type::tvar_rl) && !(kind.level > 0.0 && kind.level < 1.0))
        throw DomainError("order level must lie in (0,1)");
    if (kind.type == Type::mrl || kind.type == Type::tvar_rl) {
        detail::require_finite_mean(x, "check_order");
        detail::require_finite_mean(y, "check_order");
    }

    std::vector<double> ps;
    switch (kind.type) {
    case Type::st:
    case Type::hr: ps = p_grid; break;
    case Type::mrl: ps = {0.0}; break;
    case Type::p_rl: ps = {kind.level}; break;
    case Type::tvar_rl:
        ps.push_back(kind.level);
        for (double p : p_grid)
            if (p > kind.level) ps.push_back(p);
        break;
    }
    std::vector<double> ts = kind.type == Type::st ? std::vector<double>{0.0} : t_grid;
    v.t_points = kind.type == Type::st ? 0 : ts.size();
    v.p_points = kind.type == Type::mrl ? 0 : ps.size();

    auto compare = [&](double t, double p, double& lhs, double& rhs) {
        switch (kind.type) {
        case Type::st:
            lhs = quantile(x, p);
            rhs = quantile(y, p);
            break;
        case Type::hr:
        case Type::p_rl:
            lhs = residual_quantile(x, t, p);
            rhs = residual_quantile(y, t, p);
            break;
        case Type::mrl:
            lhs = mean_residual_life(x, t);
            rhs = mean_residual_life(y, t);
            break;
        case Type::tvar_rl:
            lhs = residual_tvar(x, t, p);
            rhs = residual_tvar(y, t, p);
            break;
        }
    };

    std::vector<std::optional<Witness>> first(ts.size());
    detail::parallel_for(ts.size(), [&](std::size_t i) {
        for (double p : ps) {
            double lhs = 0.0, rhs = 0.0;
            compare(ts[i], p, lhs, rhs);
            const double margin = rhs - lhs;
            if (margin < -tol * (1.0 + std::max(std::abs(lhs), std::abs(rhs)))) {
                Witness w;
                if (kind.type != Type::st) w.t = ts[i];
                if (kind.type != Type::mrl) w.p = p;
                w.margin = margin;
                first[i] = w;
                return;
            }
        }
    });
    for (auto& w : first) {
        if (w) {
            v.holds = false;
            v.violation_witness = w;
            break;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Bivariate plot data
// ---------------------------------------------------------------------------

/// H_t(p) over a t x p grid; row-major, rows indexed by t. The displayed
/// G^{-1}(p + (1-p)G(t)) - F^{-1}(p + (1-p)F(t)) equals H_t(p) because the
/// two -t terms cancel.
struct HGrid {
    std::vector<double> t;
    std::vector<double> p;
    std::vector<double> h;

    double at(std::size_t ti, std::size_t pi) const { return h[ti * p.size() + pi]; }
};

inline HGrid bivariate_grid(const DistributionSpec& x, const DistributionSpec& y, const std::vector<double>& p_grid,
                            const std::vector<double>& t_grid) {
    HGrid g{t_grid, p_grid, std::vector<double>(t_grid.size() * p_grid.size())};
    detail::parallel_for(t_grid.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < p_grid.size(); ++j)
            g.h[i * p_grid.size() + j] = h_function(x, y, t_grid[i], p_grid[j]);
    });
    return g;
}

} // namespace tailorder

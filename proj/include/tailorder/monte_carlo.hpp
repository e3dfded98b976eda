#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tailorder/distribution.hpp"
#include "tailorder/empirical.hpp"
#include "tailorder/risk_measures.hpp"

namespace tailorder {

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

namespace detail {

/// Midpoint of a 53-bit grid: never 0 or 1.
inline double open_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

} // namespace detail

/// n independent draws by inverse-transform sampling. Deterministic for a
/// fixed seed.
inline std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = spec.quantile_at(Level::from_lower(detail::open_uniform(rng)));
    return out;
}

/// Monte Carlo TVaR of the residual X_t at level p by inverse-transform
/// sampling restricted to exceedances: u ~ Uniform(F(t), 1), x = Q(u) - t.
/// Deterministic for a fixed seed.
inline MonteCarloEstimate mc_residual_tvar(const DistributionSpec& spec, double t, double p, std::size_t n,
                                           std::uint64_t seed) {
    if (n < 1000) throw DomainError("mc_residual_tvar: need at least 1000 samples");
    detail::require_tvar_level(p, "mc_residual_tvar");
    detail::require_finite_mean(spec, "mc_residual_tvar");
    const Level at = deductible_level(spec, t);

    std::mt19937_64 rng(seed);
    std::vector<double> draws(n);
    for (auto& x : draws) {
        x = spec.quantile_at(residual_level(Level::from_lower(detail::open_uniform(rng)), at)) - t;
    }
    const EmpiricalSample sample(std::move(draws));

    MonteCarloEstimate r;
    r.estimate = empirical_tvar(sample, p);

    // Asymptotic variance of the expected-shortfall estimator:
    // (Var[X | X > VaR] + p (ES - VaR)^2) / (n (1 - p)).
    const double var_level = p > 0.0 ? empirical_quantile(sample, p) : sample.min();
    const auto& x = sample.values();
    const std::size_t first = p > 0.0 ? detail::order_index(n, p) : 0;
    const std::size_t m = n - first;
    double tail_var = 0.0;
    if (m > 1) {
        double mean = 0.0;
        for (std::size_t i = first; i < n; ++i) mean += x[i];
        mean /= static_cast<double>(m);
        for (std::size_t i = first; i < n; ++i) tail_var += (x[i] - mean) * (x[i] - mean);
        tail_var /= static_cast<double>(m - 1);
    }
    const double gap = r.estimate - var_level;
    r.std_error = std::sqrt((tail_var + p * gap * gap) / (static_cast<double>(n) * (1.0 - p)));
    return r;
}

} // namespace tailorder

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "tailorder/tailorder.hpp"

using namespace tailorder;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<DistributionSpec> zoo() {
    return {
        DistributionSpec::gpd(0.0, 0.0, 1.0),
        DistributionSpec::gpd(0.3, 1.0, 2.0),
        DistributionSpec::gpd(-0.5, 0.0, 1.0),
        DistributionSpec::pareto(2.0, 1.0),
        DistributionSpec::pareto(0.8, 3.0),
        DistributionSpec::logistic(0.0, 1.0),
        DistributionSpec::logistic(-2.0, 0.5),
        DistributionSpec::loglogistic(2.0, 3.0),
        DistributionSpec::uniform(-1.0, 3.0),
        DistributionSpec::ce1_mixture(0.5),
        DistributionSpec::distorted(DistributionSpec::uniform(0, 1), Distortion::power(0.45)),
        DistributionSpec::distorted(DistributionSpec::uniform(0, 1), Distortion::dual_power(2.75)),
        DistributionSpec::distorted(DistributionSpec::pareto(3.0, 1.0), Distortion::power(0.5)),
    };
}

const std::vector<double> probe_ps = {1e-9, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.9999, 1 - 1e-9};

} // namespace

TEST_CASE("cdf reference values", "[distributions]") {
    CHECK(cdf(DistributionSpec::logistic(0, 1), 0.0) == 0.5);
    CHECK_THAT(cdf(DistributionSpec::pareto(2, 1), 2.0), WithinAbs(0.75, 1e-15));
    CHECK(cdf(DistributionSpec::ce1_mixture(0.5), 0.4) == 0.0);
    CHECK_THAT(cdf(DistributionSpec::ce1_mixture(0.5), 0.5), WithinAbs(0.5, 1e-15));
    CHECK_THAT(cdf(DistributionSpec::ce1_mixture(0.5), 0.7), WithinAbs(0.7, 1e-15));
    CHECK_THAT(cdf(DistributionSpec::uniform(-1, 3), 0.0), WithinAbs(0.25, 1e-15));
}

TEST_CASE("survival reference values", "[distributions]") {
    CHECK_THAT(survival(DistributionSpec::pareto(2, 1), 2.0), WithinAbs(0.25, 1e-15));
    CHECK_THAT(survival(DistributionSpec::gpd(0, 0, 1), 1.0), WithinRel(std::exp(-1.0), 1e-14));
    CHECK_THAT(survival(DistributionSpec::gpd(0.5, 0, 1), 2.0), WithinRel(std::pow(2.0, -2.0), 1e-14));
    CHECK_THAT(survival(DistributionSpec::gpd(-0.5, 0, 1), 1.0), WithinRel(0.25, 1e-14));
    for (const auto& s : zoo()) {
        const auto lo = s.lower();
        if (lo.is_finite()) CHECK(survival(s, lo.value() - 1.0) == 1.0);
    }
}

TEST_CASE("survival and cdf are complementary and monotone", "[distributions]") {
    for (const auto& s : zoo()) {
        INFO(to_json(s).dump());
        double prev = 0.0;
        for (double p : probe_ps) {
            const double x = quantile(s, p);
            for (double y : {x - 0.1, x, x + 1e-3}) {
                CHECK_THAT(survival(s, y), WithinAbs(1.0 - cdf(s, y), 1e-12));
            }
            CHECK(cdf(s, x) >= prev);
            prev = cdf(s, x);
        }
    }
}

TEST_CASE("quantile is the left-continuous generalized inverse", "[distributions]") {
    for (const auto& s : zoo()) {
        INFO(to_json(s).dump());
        double prev = -std::numeric_limits<double>::infinity();
        for (double p : probe_ps) {
            const double x = quantile(s, p);
            CHECK(x >= prev);
            prev = x;
            // Galois connection: cdf(Q(p)) >= p and cdf(x) < p just left of Q(p).
            CHECK(cdf(s, x) >= p * (1 - 1e-12) - 1e-15);
            const double left = x - 1e-7 * std::max(1.0, std::abs(x));
            if (!(s.lower().is_finite() && left < s.lower().value())) CHECK(cdf(s, left) < p * (1 + 1e-12));
        }
    }
}

TEST_CASE("quantile reference values", "[distributions]") {
    for (double p : probe_ps) CHECK_THAT(quantile(DistributionSpec::uniform(0, 1), p), WithinAbs(p, 1e-15));
    CHECK_THAT(quantile(DistributionSpec::pareto(2, 1), 0.75), WithinRel(2.0, 1e-15));
    CHECK(quantile(DistributionSpec::ce1_mixture(0.5), 0.3) == 0.5);
    CHECK(quantile(DistributionSpec::ce1_mixture(0.5), 0.5) == 0.5);
    CHECK_THAT(quantile(DistributionSpec::ce1_mixture(0.5), 0.8), WithinAbs(0.8, 1e-15));
    // GPD quantile mu + sigma ((1-p)^-xi - 1)/xi and its exponential limit.
    CHECK_THAT(quantile(DistributionSpec::gpd(0.5, 1, 2), 0.75), WithinRel(1 + 2 * (2.0 - 1) / 0.5, 1e-14));
    CHECK_THAT(quantile(DistributionSpec::gpd(0, 0, 1), 0.5), WithinRel(std::log(2.0), 1e-14));
    CHECK_THAT(quantile(DistributionSpec::gpd(1e-13, 0, 1), 0.5), WithinRel(std::log(2.0), 1e-10));
    // Extreme tail stays accurate.
    CHECK_THAT(quantile(DistributionSpec::gpd(0, 0, 1), 1e-12), WithinRel(1e-12, 1e-9));
}

TEST_CASE("quantile rejects probabilities outside (0,1)", "[distributions][errors]") {
    const auto s = DistributionSpec::uniform(0, 1);
    CHECK_THROWS_AS(quantile(s, 0.0), DomainError);
    CHECK_THROWS_AS(quantile(s, 1.0), DomainError);
    CHECK_THROWS_AS(quantile(s, -0.5), DomainError);
    CHECK_THROWS_AS(quantile(s, std::nan("")), DomainError);
}

TEST_CASE("invalid parameters are rejected", "[distributions][errors]") {
    CHECK_THROWS_AS(DistributionSpec::pareto(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::pareto(2.0, -1.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::gpd(0.1, 0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::logistic(0.0, -1.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::loglogistic(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::loglogistic(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::uniform(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::ce1_mixture(0.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::ce1_mixture(1.0), ParameterError);
    CHECK_THROWS_AS(Distortion::power(0.0), ParameterError);
    CHECK_THROWS_AS(Distortion::dual_power(-2.0), ParameterError);
    CHECK_THROWS_AS(DistributionSpec::pareto(std::nan(""), 1.0), ParameterError);
}

TEST_CASE("describe reports support and mean", "[distributions]") {
    const auto ce = describe(DistributionSpec::ce1_mixture(0.5));
    CHECK(ce.mean.value() == 0.625);
    const auto par = describe(DistributionSpec::pareto(2, 1));
    CHECK(par.mean.value() == 2.0);
    CHECK(par.lower.value() == 1.0);
    CHECK(par.upper.is_pos_inf());
    const auto lg = describe(DistributionSpec::logistic(1.5, 3));
    CHECK(lg.mean.value() == 1.5);
    CHECK(lg.lower.is_neg_inf());
    CHECK(describe(DistributionSpec::gpd(-0.5, 1, 2)).upper.value() == 1 + 2 / 0.5);
    // Infinite means are reported, not thrown.
    CHECK(describe(DistributionSpec::pareto(1.0, 1)).mean.is_pos_inf());
    CHECK(describe(DistributionSpec::gpd(1.0, 0, 1)).mean.is_pos_inf());
    CHECK(describe(DistributionSpec::loglogistic(1, 0.5)).mean.is_pos_inf());
    CHECK_FALSE(DistributionSpec::pareto(0.9, 1).has_finite_mean());
    CHECK(DistributionSpec::pareto(1.1, 1).has_finite_mean());
}

TEST_CASE("means agree with a survival-integral oracle", "[distributions]") {
    // E[X] = lower + int_lower^upper S(x) dx for a finite lower endpoint.
    for (const auto& s : zoo()) {
        // Survival tails decaying slower than x^-2 are beyond the plain
        // half-line rule used as oracle here.
        if (!s.has_finite_mean() || !s.lower().is_finite() || s.tail_index() < 2) continue;
        INFO(to_json(s).dump());
        const double lo = s.lower().value();
        const auto up = s.upper();
        const double integral =
            up.is_finite()
                ? quadrature::interval([&](double x) { return survival(s, x); }, lo, up.value()).value
                : quadrature::half_line([&](double x) { return survival(s, lo + x); }).value;
        CHECK_THAT(s.mean().value(), WithinRel(lo + integral, 1e-8));
    }
    // Independent closed forms for the distorted uniforms.
    const auto pw = DistributionSpec::distorted(DistributionSpec::uniform(0, 1), Distortion::power(0.45));
    CHECK_THAT(pw.mean().value(), WithinRel(1 / 1.45, 1e-10));
    const auto dp = DistributionSpec::distorted(DistributionSpec::uniform(0, 1), Distortion::dual_power(2.75));
    CHECK_THAT(dp.mean().value(), WithinRel(2.75 / 3.75, 1e-10));
}

TEST_CASE("residual quantile reference values", "[distributions]") {
    const auto u = DistributionSpec::uniform(0, 1);
    CHECK_THAT(residual_quantile(u, 0.5, 0.5), WithinAbs(0.25, 1e-15));
    CHECK_THAT(residual_quantile(u, -1.0, 0.5), WithinAbs(1.5, 1e-15));
    CHECK_THAT(residual_quantile(DistributionSpec::pareto(2, 1), 4.0, 0.75), WithinRel(4.0, 1e-14));
    CHECK_THROWS_AS(residual_quantile(u, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(residual_quantile(u, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(residual_quantile(u, 0.5, 1.0), DomainError);
}

TEST_CASE("residual quantile matches numeric inversion of the residual cdf", "[distributions]") {
    for (const auto& s : zoo()) {
        INFO(to_json(s).dump());
        for (double tp : {0.1, 0.5, 0.9}) {
            const double t = quantile(s, tp);
            if (!s.upper().above(t)) continue;
            const double ft = cdf(s, t), st = survival(s, t);
            for (double p : {0.05, 0.3, 0.7, 0.95}) {
                // Residual cdf P(X - t <= y | X > t) = (F(t + y) - F(t)) / S(t).
                auto g = [&](double y) { return (cdf(s, t + y) - ft) / st - p; };
                double hi = 1.0;
                while (g(hi) < 0) hi *= 2;
                boost::math::tools::eps_tolerance<double> tol(50);
                const auto [a, b] = boost::math::tools::bisect(g, 0.0, hi, tol);
                CHECK_THAT(residual_quantile(s, t, p), WithinAbs(0.5 * (a + b), 1e-9 * (1 + b)));
            }
        }
    }
}

TEST_CASE("exp maps logistic quantiles to loglogistic quantiles", "[distributions]") {
    for (auto [mu, sigma] : {std::pair{0.0, 0.2}, {1.0, 0.5}, {-2.0, 2.0}}) {
        const auto lg = DistributionSpec::logistic(mu, sigma);
        const auto ll = DistributionSpec::loglogistic(std::exp(mu), 1.0 / sigma);
        for (double p : probe_ps) CHECK_THAT(quantile(ll, p), WithinRel(std::exp(quantile(lg, p)), 1e-12));
    }
}

TEST_CASE("distortions compose with the survival function", "[distributions]") {
    const auto base = DistributionSpec::pareto(2.5, 3.0);
    const auto ident = apply_distortion(base, Distortion::identity());
    const auto pw = apply_distortion(base, Distortion::power(0.7));
    const auto ref = DistributionSpec::pareto(2.5 * 0.7, 3.0);
    for (double x : {3.0, 3.5, 10.0, 1e3, 1e6}) {
        CHECK_THAT(survival(ident, x), WithinRel(survival(base, x), 1e-14));
        CHECK_THAT(survival(pw, x), WithinRel(survival(ref, x), 1e-13));
    }
    for (double p : probe_ps) CHECK_THAT(quantile(pw, p), WithinRel(quantile(ref, p), 1e-12));
    CHECK(pw.tail_index() == 2.5 * 0.7);

    const auto dp = apply_distortion(DistributionSpec::uniform(0, 1), Distortion::dual_power(2.75));
    for (double x : {0.01, 0.3, 0.5, 0.99})
        CHECK_THAT(survival(dp, x), WithinRel(1 - std::pow(x, 2.75), 1e-13));

    const auto heavy = apply_distortion(DistributionSpec::pareto(1.5, 1.0), Distortion::power(0.5));
    CHECK_FALSE(heavy.has_finite_mean());
    CHECK(heavy.mean().is_pos_inf());
}

TEST_CASE("distortion maps and inverses", "[distributions]") {
    for (const auto& d : {Distortion::identity(), Distortion::power(0.45), Distortion::dual_power(2.75)}) {
        CHECK(d(0.0) == 0.0);
        CHECK_THAT(d(1.0), WithinAbs(1.0, 1e-15));
        for (double v : {1e-6, 0.1, 0.5, 0.9}) CHECK_THAT(d.inverse(d(v)), WithinRel(v, 1e-12));
    }
}

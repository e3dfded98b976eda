#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "tailorder/tailorder.hpp"

using namespace tailorder;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("empirical sample construction", "[empirical]") {
    const EmpiricalSample s({3.0, 1.0, 2.0}, "inline");
    CHECK(s.values() == std::vector<double>{1, 2, 3});
    CHECK(s.provenance() == "inline");
    CHECK(s.mean() == 2.0);
    CHECK(s.survival(2.0) == 1.0 / 3.0);
    CHECK(s.survival(0.0) == 1.0);
    CHECK(s.survival(3.0) == 0.0);
    CHECK_THROWS_AS(EmpiricalSample({}), DomainError);
    CHECK_THROWS_AS(EmpiricalSample({1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(EmpiricalSample({1.0, std::numeric_limits<double>::infinity()}), DomainError);
}

TEST_CASE("empirical quantile", "[empirical]") {
    const EmpiricalSample s({1, 2, 3});
    CHECK(empirical_quantile(s, 0.5) == 2.0);
    CHECK(empirical_quantile(s, 1.0 / 3.0) == 1.0);
    CHECK(empirical_quantile(s, 0.34) == 2.0);
    CHECK(empirical_quantile(s, 0.1) == 1.0);
    CHECK(empirical_quantile(s, 1.0) == 3.0);
    // p = k/n computed in floating point still selects x_(k).
    const EmpiricalSample ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(empirical_quantile(ten, 0.7) == 7.0);
    CHECK(empirical_quantile(ten, 0.1 * 3) == 3.0);
    CHECK_THROWS_AS(empirical_quantile(s, 0.0), DomainError);
    CHECK_THROWS_AS(empirical_quantile(s, 1.5), DomainError);
}

TEST_CASE("empirical tvar", "[empirical]") {
    const EmpiricalSample s({1, 2, 3, 4});
    CHECK_THAT(empirical_tvar(s, 0.5), WithinAbs(3.5, 1e-15));
    // (3 * 0.15 + 4 * 0.25) / 0.4 by integrating the step quantile.
    CHECK_THAT(empirical_tvar(s, 0.6), WithinAbs(3.625, 1e-14));
    CHECK(empirical_tvar(s, 0.0) == 2.5);
    const EmpiricalSample one({7.5});
    for (double p : {0.0, 0.3, 0.99}) CHECK_THAT(empirical_tvar(one, p), WithinAbs(7.5, 1e-14));
    CHECK_THROWS_AS(empirical_tvar(s, 1.0), DomainError);
    CHECK_THROWS_AS(empirical_tvar(s, -0.1), DomainError);

    // Converges to the model value.
    const auto spec = DistributionSpec::uniform(0, 1);
    const EmpiricalSample big(sample(spec, 200'000, 5));
    CHECK_THAT(empirical_tvar(big, 0.8), WithinAbs(tvar(spec, 0.8), 2e-3));
}

TEST_CASE("P-P plot", "[empirical]") {
    const EmpiricalSample a({1, 2, 2, 5});
    const auto same = pp_plot(a, a);
    REQUIRE(same.points.size() == 4);
    CHECK(same.points.front().sf_x == 1.0);
    CHECK(same.points.front().sf_y == 1.0);
    CHECK(same.points.back().sf_x == 0.0);
    for (const auto& pt : same.points) CHECK(pt.sf_x == pt.sf_y);

    const auto step = pp_plot(EmpiricalSample({1.0}), EmpiricalSample({2.0}));
    REQUIRE(step.points.size() == 3);
    CHECK(step.points[1].t == 1.0);
    CHECK(step.points[1].sf_x == 0.0);
    CHECK(step.points[1].sf_y == 1.0);
    CHECK(step.points[2].sf_y == 0.0);
    CHECK(step.n_x == 1);
    CHECK(step.n_y == 1);
}

TEST_CASE("star shape check", "[empirical]") {
    std::vector<PpPoint> diag;
    for (int i = 10; i >= 1; --i) diag.push_back({static_cast<double>(i), i / 10.0, i / 10.0});
    CHECK(star_shape_check(diag).star_shaped);

    // Ratio drops over three consecutive points without sample sizes: flagged.
    const std::vector<PpPoint> bad = {{0, 1, 1}, {1, 0.8, 0.9}, {2, 0.6, 0.6}, {3, 0.5, 0.4}, {4, 0.4, 0.3}};
    const auto r = star_shape_check(bad);
    CHECK_FALSE(r.star_shaped);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].t_begin == 1.0);
    CHECK(r.violations[0].t_end == 4.0);

    constexpr std::size_t n = 10'000;
    const auto u1 = EmpiricalSample(sample(DistributionSpec::uniform(0, 1), n, 101));
    const auto u2 = EmpiricalSample(sample(DistributionSpec::uniform(0, 2), n, 102));
    CHECK(star_shape_check(pp_plot(u1, u2)).star_shaped);

    const auto e1 = EmpiricalSample(sample(DistributionSpec::gpd(0, 0, 1), n, 103));
    const auto e2 = EmpiricalSample(sample(DistributionSpec::gpd(0, 0, 2), n, 104));
    CHECK(star_shape_check(pp_plot(e1, e2)).star_shaped);

    const auto ce = EmpiricalSample(sample(DistributionSpec::ce1_mixture(0.5), n, 105));
    const auto res = star_shape_check(pp_plot(ce, u1));
    CHECK_FALSE(res.star_shaped);
    CHECK(res.violations.front().z_score > 3.0);
}

TEST_CASE("Pareto maximum likelihood fit", "[empirical]") {
    const auto fit = fit_pareto_mle(EmpiricalSample({1, 2, 4}));
    CHECK(fit.k == 1.0);
    CHECK_THAT(fit.a, WithinRel(1 / std::log(2.0), 1e-14));
    CHECK_THAT(fit.mean().value(), WithinRel(3.2589, 1e-4));
    // log L = n ln a + n a ln k - (a + 1) sum ln x.
    CHECK_THAT(fit.loglik, WithinRel(3 * std::log(fit.a) - (fit.a + 1) * std::log(8.0), 1e-13));

    const auto truth = DistributionSpec::pareto(3.0, 2.0);
    const auto syn = fit_pareto_mle(EmpiricalSample(sample(truth, 10'000, 77)));
    CHECK_THAT(syn.a, WithinAbs(3.0, 0.1));
    CHECK(syn.k >= 2.0);
    CHECK(syn.k <= 2.01);

    const auto c1a = fit_pareto_mle(EmpiricalSample(sample(DistributionSpec::pareto(3.5435, 4413.1532), 10'000, 78)));
    CHECK_THAT(c1a.mean().value(), WithinRel(6148.175, 0.02));

    CHECK_THROWS_AS(fit_pareto_mle(EmpiricalSample({5, 5, 5})), DegenerateFitError);
    CHECK_THROWS_AS(fit_pareto_mle(EmpiricalSample({5})), DomainError);
    CHECK_THROWS_AS(fit_pareto_mle(EmpiricalSample({-1, 2, 3})), DomainError);
    CHECK_THROWS_AS(fit_pareto_mle(EmpiricalSample({0, 2, 3})), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov statistic", "[empirical]") {
    const auto u = DistributionSpec::uniform(0, 1);
    CHECK(ks_statistic(EmpiricalSample({0.5}), u) == 0.5);
    CHECK_THAT(ks_statistic(EmpiricalSample({0.25, 0.75}), u), WithinAbs(0.25, 1e-15));

    const auto g = DistributionSpec::gpd(0.2, 1, 2);
    for (std::size_t n : {10u, 100u, 1000u}) {
        std::vector<double> mid;
        for (std::size_t i = 1; i <= n; ++i) mid.push_back(quantile(g, (i - 0.5) / static_cast<double>(n)));
        CHECK_THAT(ks_statistic(EmpiricalSample(mid), g), WithinAbs(0.5 / static_cast<double>(n), 1e-12));
    }

    constexpr std::size_t n = 10'000;
    const double bound = 1.36 / std::sqrt(static_cast<double>(n)) * 1.5;
    CHECK(ks_statistic(EmpiricalSample(sample(g, n, 31)), g) < bound);
    CHECK(ks_statistic(EmpiricalSample(sample(g, n, 31)), DistributionSpec::gpd(0.2, 1, 2.5)) > bound);
}

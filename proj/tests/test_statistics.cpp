#include "mecaoi/statistics.hpp"

#include "mecaoi/core_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace mecaoi;

TEST_CASE("student t quantiles") {
    CHECK(stats::student_t_quantile(0.99, 29) == doctest::Approx(2.756385903670).epsilon(1e-10));
    CHECK(stats::student_t_quantile(0.95, 1) == doctest::Approx(12.70620473617).epsilon(1e-10));
    CHECK_THROWS_AS(stats::student_t_quantile(1.0, 5), InvalidArgument);
    CHECK_THROWS_AS(stats::student_t_quantile(0.9, 0), InvalidArgument);
}

TEST_CASE("batch means interval") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto ci = stats::batch_means_interval(x, 0.95);
    CHECK(ci.mean == doctest::Approx(2.5));
    // sd = sqrt(5/3), t_{0.975,3} = 3.182446305
    CHECK(ci.halfwidth == doctest::Approx(3.182446305284 * std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-10));
    const std::vector<double> same(10, 1.5);
    CHECK(stats::batch_means_interval(same).halfwidth == 0.0);
    CHECK_THROWS_AS(stats::batch_means_interval(std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("kolmogorov survival reference values") {
    CHECK(stats::kolmogorov_survival(0.0) == 1.0);
    CHECK(stats::kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(1e-3));
    CHECK(stats::kolmogorov_survival(1.628) == doctest::Approx(0.01).epsilon(2e-3));
    CHECK(stats::kolmogorov_survival(3.0) < 1e-7);
}

TEST_CASE("KS accepts the right law and rejects a wrong one") {
    std::mt19937_64 rng(12345);
    std::exponential_distribution<double> expo(2.0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = expo(rng);
    auto cdf = [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-2.0 * x); };
    CHECK(stats::ks_test(xs, cdf).p_value > 0.01);
    auto wrong = [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-2.2 * x); };
    CHECK(stats::ks_test(xs, wrong).p_value < 0.01);
}

TEST_CASE("KS handles an atom at zero") {
    std::mt19937_64 rng(7);
    std::bernoulli_distribution zero(0.4);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> xs(4000);
    for (auto& x : xs) x = zero(rng) ? 0.0 : expo(rng);
    auto cdf = [](double x) { return x < 0 ? 0.0 : 0.4 + 0.6 * (1.0 - std::exp(-x)); };
    auto left = [](double x) { return x <= 0 ? 0.0 : 0.4 + 0.6 * (1.0 - std::exp(-x)); };
    CHECK(stats::ks_test(xs, cdf, left).p_value > 0.01);
    // Ignoring the atom makes the statistic at least the atom mass.
    auto continuous = [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); };
    CHECK(stats::ks_test(xs, continuous).statistic >= 0.35);
}

TEST_CASE("thinning") {
    const std::vector<double> xs{0, 1, 2, 3, 4, 5, 6};
    CHECK(stats::thin(xs, 3) == std::vector<double>{0, 3, 6});
    CHECK(stats::thin(xs, 3, 1) == std::vector<double>{1, 4});
    CHECK_THROWS_AS(stats::thin(xs, 0), InvalidArgument);
}

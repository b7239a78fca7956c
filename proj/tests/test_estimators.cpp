#include <doctest.h>

#include "fou/errors.hpp"
#include "fou/estimators.hpp"
#include "fou/filters.hpp"
#include "fou/montecarlo.hpp"
#include "fou/process.hpp"
#include "fou/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fou;

namespace {

SamplePath make_path(std::vector<double> values, double delta = 1.0) {
    return SamplePath{delta, std::move(values), std::nullopt};
}

SamplePath fou_path(std::uint64_t seed, std::size_t n = 1000, double horizon = 100.0) {
    return simulate_euler({2.0, 1.0, 0.7, 1.0}, n, horizon / static_cast<double>(n), seed);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_CASE("quadratic variation by hand") {
    const Filter diff({1.0, -1.0});
    const auto qv = generalized_quadratic_variation(std::vector<double>{0.0, 1.0, 0.0}, diff);
    CHECK(qv.windows == 2);
    CHECK(qv.value == 2.0);
    CHECK(qv.mean() == 1.0);

    const Filter db2 = make_daubechies2_filter();
    CHECK(generalized_quadratic_variation(std::vector<double>(50, 3.5), db2).value == 0.0);
    CHECK(generalized_quadratic_variation(std::vector<double>(50, 3.5), diff).value == 0.0);
    std::vector<double> ramp(50);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.25 * static_cast<double>(i);
    CHECK(generalized_quadratic_variation(ramp, db2).value == 0.0);
    CHECK(generalized_quadratic_variation(ramp, db2).windows == 47);

    CHECK_THROWS_AS(generalized_quadratic_variation(std::vector<double>{1.0, 2.0, 3.0}, db2), ParameterError);
}

TEST_CASE("hurst from variation ratios") {
    const QuadraticVariation va{10.0, 10};
    CHECK(hurst_from_variations(va, {20.0, 10}).value == doctest::Approx(0.5).epsilon(1e-15));
    const auto clamped = hurst_from_variations(va, {40.0, 10});
    CHECK(clamped.value == kHurstClampHi);
    CHECK(clamped.raw == doctest::Approx(1.0));
    CHECK(clamped.clamped);
    CHECK_THROWS_AS(hurst_from_variations({0.0, 10}, {1.0, 10}), EstimationError);

    // Window counts enter through the means.
    CHECK(hurst_from_variations({10.0, 10}, {16.0, 8}).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hurst_from_variations({4.0, 1}, {1.0, 1}).value == kHurstClampLo);
}

TEST_CASE("sigma by hand") {
    // Increments of +-1/2 at delta = 1/4 with H = 1/2: V mean = delta, so sigma = 1.
    const Filter diff({-1.0, 1.0});
    CHECK(filter_quadratic_form(diff.coeffs(), 0.5) == doctest::Approx(-2.0).epsilon(1e-15));
    const auto path = make_path({0.0, 0.5, 0.0, 0.5, 0.0}, 0.25);
    CHECK(estimate_sigma(path, diff, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(estimate_sigma(make_path({1.0, 1.0, 1.0}), diff, 0.5), EstimationError);
    CHECK_THROWS_AS(estimate_sigma(path, diff, 1.0), ParameterError);
}

TEST_CASE("expected variations on fBM covariance recover H and sigma exactly") {
    // E[(sum a_k X_{i+k})^2] from the exact fBM covariance, for every window of a 64-point path.
    for (double h : {0.3, 0.5, 0.7}) {
        const double sigma = 1.7;
        const double delta = 0.1;
        const std::size_t n = 64;
        auto cov = [&](std::size_t i, std::size_t j) {
            const double s = static_cast<double>(i) * delta;
            const double t = static_cast<double>(j) * delta;
            return 0.5 * sigma * sigma *
                   (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(s - t), 2 * h));
        };
        auto expected_v = [&](const Filter& f) {
            const auto a = f.coeffs();
            QuadraticVariation qv;
            qv.windows = n - a.size() + 1;
            for (std::size_t i = 0; i < qv.windows; ++i) {
                double e = 0.0;
                for (std::size_t k = 0; k < a.size(); ++k)
                    for (std::size_t l = 0; l < a.size(); ++l) e += a[k] * a[l] * cov(i + k, i + l);
                const double closed =
                    -0.5 * sigma * sigma * std::pow(delta, 2 * h) * filter_quadratic_form(a, h);
                CHECK(e == doctest::Approx(closed).epsilon(1e-9));
                qv.value += e;
            }
            return qv;
        };
        const Filter f = make_daubechies2_filter();
        const auto va = expected_v(f);
        const auto h_hat = hurst_from_variations(va, expected_v(dilate(f)));
        CAPTURE(h);
        CHECK(h_hat.value == doctest::Approx(h).epsilon(1e-9));
        CHECK(sigma_from_variation(va, f, h, delta) == doctest::Approx(sigma).epsilon(1e-9));
    }
}

TEST_CASE("second moment and lambda plug-in") {
    CHECK(empirical_second_moment(make_path({9.0, 1.0, 1.0, 1.0})) == 1.0);
    CHECK(empirical_second_moment(make_path({0.0, 3.0})) == 9.0);
    CHECK_THROWS_AS(empirical_second_moment(make_path({1.0})), ParameterError);

    CHECK(estimate_lambda(0.25, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (double lambda : {0.3, 1.0, 2.0, 7.5}) {
        for (double h : {0.55, 0.7}) {
            const FouParams p{lambda, 1.4, h, 0.0};
            CHECK(estimate_lambda(stationary_variance(p), h, p.sigma) == doctest::Approx(lambda).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(estimate_lambda(0.0, 0.7, 1.0), ParameterError);
    CHECK_THROWS_AS(estimate_lambda(1.0, 0.7, -1.0), ParameterError);
    CHECK_THROWS_AS(estimate_lambda(1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("second moment on exact stationary paths is unbiased") {
    const FouParams p{1.0, 1.0, 0.7, 0.0};
    const StationaryFouSampler sampler(p, 2048, 0.05);
    RunningStats mu2;
    for (std::size_t r = 0; r < 500; ++r) {
        auto gen = make_stream(11, r);
        mu2.push(empirical_second_moment(make_path(sampler.sample(gen), 0.05)));
    }
    CHECK(std::abs(mu2.mean() - stationary_variance(p)) < 5.0 * mu2.sd() / std::sqrt(500.0));
}

TEST_CASE("estimate_all stages and warnings") {
    const Filter f = make_daubechies2_filter();
    try {
        estimate_all(make_path(std::vector<double>(100, 2.0), 0.1), f);
        FAIL("expected an estimation error");
    } catch (const EstimationError& e) {
        CHECK(std::string(e.what()).starts_with("hurst stage:"));
    }
    CHECK_THROWS_AS(estimate_all(make_path(std::vector<double>(6, 1.0)), f), ParameterError);

    const auto r = estimate_all(fou_path(1), f);
    CHECK(r.filter_label == "daubechies2");
    CHECK(r.windows_a == 998);
    CHECK(r.windows_a2 == 995);
    CHECK(r.hurst_hat > 0.5);
    CHECK(r.hurst_hat < 0.8);
    CHECK(r.sigma_hat > 0.0);
    CHECK(r.mu2_hat >= 0.0);
    CHECK(r.lambda_hat > 0.0);

    // Brownian-like path: H_hat near 1/2 triggers the CLT warning.
    auto bm = simulate_euler({1e-3, 1.0, 0.3, 0.0}, 2000, 0.01, 3);
    const auto rb = estimate_all(bm, f);
    CHECK(rb.hurst_hat < 0.5);
    REQUIRE(!rb.warnings.empty());
    CHECK(rb.warnings.back().find("drift CLT") != std::string::npos);
}

TEST_CASE("property: data-scale equivariance") {
    const Filter f = make_daubechies2_filter();
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto path = fou_path(seed);
        auto scaled = path;
        for (double& v : scaled.values) v *= 3.0;
        const auto a = estimate_all(path, f);
        const auto b = estimate_all(scaled, f);
        CHECK(b.hurst_hat == doctest::Approx(a.hurst_hat).epsilon(1e-12));
        CHECK(b.sigma_hat == doctest::Approx(3.0 * a.sigma_hat).epsilon(1e-12));
        CHECK(b.mu2_hat == doctest::Approx(9.0 * a.mu2_hat).epsilon(1e-12));
        CHECK(b.lambda_hat == doctest::Approx(a.lambda_hat).epsilon(1e-10));
    }
}

TEST_CASE("property: filter-scale invariance") {
    const auto path = fou_path(4);
    for (const Filter& f : {make_daubechies2_filter(), make_classical_filter(1), make_classical_filter(4)}) {
        std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
        for (double& v : c) v *= -2.5;
        const Filter g(c);
        const double h = estimate_hurst(path, f);
        CHECK(estimate_hurst(path, g) == doctest::Approx(h).epsilon(1e-12));
        CHECK(estimate_sigma(path, g, h) == doctest::Approx(estimate_sigma(path, f, h)).epsilon(1e-12));
    }
}

TEST_CASE("property: shift and trend invariance") {
    const auto path = fou_path(5);
    const Filter order1 = make_classical_filter(1);
    const Filter order2 = make_daubechies2_filter();
    auto shifted = path;
    for (double& v : shifted.values) v += 17.0;
    auto trended = path;
    for (std::size_t i = 0; i < trended.values.size(); ++i) trended.values[i] += -4.0 + 0.03 * static_cast<double>(i);

    for (const Filter* f : {&order1, &order2}) {
        const double h = estimate_hurst(path, *f);
        CHECK(estimate_hurst(shifted, *f) == doctest::Approx(h).epsilon(1e-9));
        CHECK(estimate_sigma(shifted, *f, h) == doctest::Approx(estimate_sigma(path, *f, h)).epsilon(1e-9));
    }
    const double h2 = estimate_hurst(path, order2);
    CHECK(estimate_hurst(trended, order2) == doctest::Approx(h2).epsilon(1e-9));
    CHECK(estimate_sigma(trended, order2, h2) == doctest::Approx(estimate_sigma(path, order2, h2)).epsilon(1e-9));
    CHECK(estimate_hurst(trended, order1) != doctest::Approx(estimate_hurst(path, order1)).epsilon(1e-3));
}

TEST_CASE("property: V and mu2 are nonnegative") {
    const Filter f = make_classical_filter(3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto gen = make_stream(seed, 0);
        std::vector<double> x(30);
        fill_standard_normal(gen, x);
        CHECK(generalized_quadratic_variation(x, f).value >= 0.0);
        CHECK(empirical_second_moment(make_path(x)) >= 0.0);
    }
}

TEST_CASE("consistency: Hurst error shrinks with finer sampling") {
    const Filter f = make_daubechies2_filter();
    std::vector<double> coarse;
    std::vector<double> fine;
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        coarse.push_back(std::abs(estimate_hurst(fou_path(seed, 1000), f) - 0.7));
        fine.push_back(std::abs(estimate_hurst(fou_path(seed, 10000), f) - 0.7));
    }
    CHECK(median(fine) < median(coarse));
}

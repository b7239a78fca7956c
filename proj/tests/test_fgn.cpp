#include <doctest.h>

#include "fou/errors.hpp"
#include "fou/fgn.hpp"
#include "fou/montecarlo.hpp"
#include "fou/rng.hpp"

#include <cmath>
#include <vector>

using namespace fou;

namespace {

double lag_autocorrelation(const std::vector<double>& x, std::size_t lag) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        den += (x[i] - mean) * (x[i] - mean);
        if (i + lag < x.size()) num += (x[i] - mean) * (x[i + lag] - mean);
    }
    return num / den;
}

}  // namespace

TEST_CASE("fgn autocovariance values") {
    CHECK(fgn_autocovariance({0.5, 10, 1.0, 1.0}, 1) == doctest::Approx(0.0).epsilon(1e-15));
    for (double h : {0.2, 0.5, 0.8}) {
        const FgnSpec spec{h, 10, 0.3, 1.7};
        CHECK(fgn_autocovariance(spec, 0) == doctest::Approx(1.7 * 1.7 * std::pow(0.3, 2 * h)).epsilon(1e-14));
    }
    // (2^{1.4} - 2) / 2 at 30 digits: 0.319507910772894259374...
    CHECK(fgn_autocovariance({0.7, 10, 1.0, 1.0}, 1) == doctest::Approx(0.31950791077289426).epsilon(1e-14));
}

TEST_CASE("property: autocovariance sign follows H - 1/2") {
    for (double h : {0.3, 0.6, 0.9}) {
        for (std::size_t k = 1; k <= 50; ++k) {
            const double rho = fgn_autocovariance({h, 100, 1.0, 1.0}, k);
            if (h > 0.5) CHECK(rho > 0.0);
            else CHECK(rho < 0.0);
        }
    }
}

TEST_CASE("FgnSpec validation") {
    CHECK_THROWS_AS(FgnSpec({0.0, 10, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(FgnSpec({1.0, 10, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(FgnSpec({0.5, 0, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(FgnSpec({0.5, 10, 0.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(FgnSpec({0.5, 10, 1.0, -1.0}).validate(), ParameterError);
}

TEST_CASE("circulant embedding size and eigenvalues") {
    CHECK(CirculantFgnSampler(0.7, 256).embedding_size() == 512);
    CHECK(CirculantFgnSampler(0.7, 257).embedding_size() == 512);
    CHECK(CirculantFgnSampler(0.7, 258).embedding_size() == 1024);
    CHECK(CirculantFgnSampler(0.7, 1).embedding_size() == 2);

    for (std::size_t n : {64u, 1024u}) {
        for (int i = 1; i <= 9; ++i) {
            const double h = 0.1 * i;
            CAPTURE(h);
            CAPTURE(n);
            const CirculantFgnSampler s(h, n);
            double max_eig = 0.0;
            double min_eig = 0.0;
            for (double e : s.eigenvalues()) {
                max_eig = std::max(max_eig, e);
                min_eig = std::min(min_eig, e);
            }
            CHECK(min_eig >= -1e-8 * max_eig);
        }
    }
}

TEST_CASE("white noise case: lag-1 autocorrelation vanishes") {
    const std::size_t n = 100000;
    const auto x = sample_fgn_circulant({0.5, n, 1.0, 1.0}, 11);
    CHECK(std::abs(lag_autocorrelation(x, 1)) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("long path sample variance matches rho(0)") {
    const std::size_t n = 100000;
    const FgnSpec spec{0.7, n, 1.0, 1.0};
    const auto x = sample_fgn_circulant(spec, 12);
    double m2 = 0.0;
    for (double v : x) m2 += v * v;
    m2 /= static_cast<double>(n);
    // Var(mean of squares) = (2/n^2) sum_{i,j} rho(i-j)^2, exact for a centered Gaussian sequence.
    double sum = fgn_autocovariance(spec, 0) * fgn_autocovariance(spec, 0) * static_cast<double>(n);
    for (std::size_t k = 1; k < n; ++k) {
        const double r = fgn_autocovariance(spec, k);
        sum += 2.0 * static_cast<double>(n - k) * r * r;
    }
    const double se = std::sqrt(2.0 * sum) / static_cast<double>(n);
    CHECK(std::abs(m2 - fgn_autocovariance(spec, 0)) < 5.0 * se);
}

TEST_CASE("replicated covariance at lags 0..5 (circulant)") {
    const std::size_t n = 256;
    const std::size_t reps = 20000;
    const CirculantFgnSampler sampler(0.7, n);
    std::vector<RunningStats> lag_stats(6);
    for (std::size_t r = 0; r < reps / 2; ++r) {
        auto gen = make_stream(99, r);
        auto [a, b] = sampler.sample_pair(gen);
        for (const auto* x : {&a, &b}) {
            for (std::size_t k = 0; k < 6; ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i + k < n; ++i) acc += (*x)[i] * (*x)[i + k];
                lag_stats[k].push(acc / static_cast<double>(n - k));
            }
        }
    }
    for (std::size_t k = 0; k < 6; ++k) {
        const double se = lag_stats[k].sd() / std::sqrt(static_cast<double>(lag_stats[k].count()));
        CAPTURE(k);
        CHECK(std::abs(lag_stats[k].mean() - fgn_autocovariance({0.7, n, 1.0, 1.0}, k)) < 5.0 * se);
    }
}

TEST_CASE("the two rows of one synthesis are uncorrelated") {
    const CirculantFgnSampler sampler(0.7, 64);
    RunningStats prod;
    for (std::size_t r = 0; r < 20000; ++r) {
        auto gen = make_stream(5, r);
        auto [a, b] = sampler.sample_pair(gen);
        prod.push(a[10] * b[10]);
    }
    CHECK(std::abs(prod.mean()) < 5.0 * prod.sd() / std::sqrt(20000.0));
}

TEST_CASE("scaling and determinism") {
    const auto unit = sample_fgn_circulant({0.7, 1000, 0.01, 1.0}, 3);
    const auto twice = sample_fgn_circulant({0.7, 1000, 0.01, 2.0}, 3);
    const auto again = sample_fgn_circulant({0.7, 1000, 0.01, 1.0}, 3);
    const auto other = sample_fgn_circulant({0.7, 1000, 0.01, 1.0}, 4);
    REQUIRE(unit.size() == 1000);
    for (std::size_t i = 0; i < unit.size(); ++i) CHECK(twice[i] == 2.0 * unit[i]);
    CHECK(unit == again);
    CHECK(unit != other);
}

TEST_CASE("cholesky fbm oracle") {
    const auto path = sample_fbm_cholesky({0.5, 4000, 1.0, 1.0}, 8);
    REQUIRE(path.size() == 4001);
    CHECK(path[0] == 0.0);
    std::vector<double> inc(path.size() - 1);
    for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = path[i + 1] - path[i];
    CHECK(std::abs(lag_autocorrelation(inc, 1)) < 4.0 / std::sqrt(4000.0));

    CHECK_THROWS_AS(sample_fbm_cholesky({0.5, 4097, 1.0, 1.0}, 1), ParameterError);
    CHECK(sample_fbm_cholesky({0.7, 50, 1.0, 1.0}, 2) == sample_fbm_cholesky({0.7, 50, 1.0, 1.0}, 2));
}

TEST_CASE("cholesky sampler rejects indefinite covariances") {
    const std::vector<double> bad{1.0, 2.0, 0.0};
    CHECK_THROWS_AS(ToeplitzCholeskySampler(std::span<const double>(bad)), NumericalError);
}

TEST_CASE("self-similarity of the exact fbm oracle") {
    const double h = 0.7;
    std::vector<double> acov(2);
    for (std::size_t k = 0; k < 2; ++k) acov[k] = fgn_autocovariance({h, 2, 1.0, 1.0}, k);
    const ToeplitzCholeskySampler sampler(acov);
    const std::size_t reps = 20000;
    RunningStats s1;
    RunningStats s2;
    RunningStats cross;
    std::vector<double> w1(reps);
    std::vector<double> w2(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        auto gen = make_stream(21, r);
        const auto inc = sampler.sample(gen);
        w1[r] = inc[0] * inc[0];
        w2[r] = (inc[0] + inc[1]) * (inc[0] + inc[1]);
        s1.push(w1[r]);
        s2.push(w2[r]);
    }
    for (std::size_t r = 0; r < reps; ++r) cross.push((w1[r] - s1.mean()) * (w2[r] - s2.mean()));
    const double ratio = s2.mean() / s1.mean();
    // Delta method for a ratio of correlated means.
    const double n = static_cast<double>(reps);
    const double var_ratio = (s2.variance() / (s1.mean() * s1.mean()) +
                              ratio * ratio * s1.variance() / (s1.mean() * s1.mean()) -
                              2.0 * ratio * cross.mean() / (s1.mean() * s1.mean())) / n;
    CHECK(std::abs(ratio - std::pow(2.0, 2.0 * h)) < 5.0 * std::sqrt(var_ratio));
}

TEST_CASE("oracle equivalence of marginals (two-sample KS)") {
    const std::size_t n = 512;
    const std::size_t reps = 4000;
    const FgnSpec spec{0.7, n, 1.0, 1.0};
    const CirculantFgnSampler circulant(0.7, n);
    std::vector<double> acov(n);
    for (std::size_t k = 0; k < n; ++k) acov[k] = fgn_autocovariance(spec, k);
    const ToeplitzCholeskySampler cholesky(acov);

    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t r = 0; r < reps; ++r) {
        auto g1 = make_stream(31, r);
        auto g2 = make_stream(32, r);
        a.push_back(circulant.sample(g1)[n / 2]);
        b.push_back(cholesky.sample(g2)[n / 2]);
    }
    CHECK(ks_two_sample(a, b) < ks_two_sample_critical(reps, reps, 0.01));
}

#pragma once

#include "fou/filters.hpp"
#include "fou/process.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fou {

/// Generalized quadratic variation V_{N,a} and its number of summands.
struct QuadraticVariation {
    double value = 0.0;
    std::size_t windows = 0;

    /// V divided by its window count.
    double mean() const { return value / static_cast<double>(windows); }
};

/// Interval to which the Hurst estimate is clamped.
inline constexpr double kHurstClampLo = 0.01;
inline constexpr double kHurstClampHi = 0.99;

struct HurstEstimate {
    double value = 0.0;
    double raw = 0.0;  ///< before clamping
    bool clamped = false;
    QuadraticVariation va;
    QuadraticVariation va2;
};

struct EstimationResult {
    double hurst_hat = 0.0;
    double sigma_hat = 0.0;
    double mu2_hat = 0.0;
    double lambda_hat = 0.0;
    std::size_t windows_a = 0;
    std::size_t windows_a2 = 0;
    std::string filter_label;
    std::vector<std::string> warnings;
};

/// V = sum_{i=0}^{N-K} (sum_k a_k X_{i+k})^2 over the observations.
QuadraticVariation generalized_quadratic_variation(std::span<const double> values, const Filter& f);
QuadraticVariation generalized_quadratic_variation(const SamplePath& path, const Filter& f);

/**
 * H_hat = 1/2 log2(Vbar_{a^2} / Vbar_a), where Vbar is the window-normalized
 * variation. Clamped to [0.01, 0.99]. Throws EstimationError when V_a = 0.
 */
HurstEstimate estimate_hurst_detailed(const SamplePath& path, const Filter& f);
double estimate_hurst(const SamplePath& path, const Filter& f);

/// Hurst estimate from two precomputed window-normalized variations.
HurstEstimate hurst_from_variations(const QuadraticVariation& va, const QuadraticVariation& va2);

/// sigma_hat = sqrt(-2 Vbar_a / (S(a, H_hat) delta^{2 H_hat})).
double estimate_sigma(const SamplePath& path, const Filter& f, double hurst_hat);
double sigma_from_variation(const QuadraticVariation& va, const Filter& f, double hurst_hat, double delta);

/// (1/N) sum_{n=1}^N X_n^2; X_0 is excluded.
double empirical_second_moment(const SamplePath& path);

/// Inverts mu_2 = sigma^2 Gamma(2H+1) / (2 lambda^{2H}) for lambda.
double estimate_lambda(double mu2_hat, double hurst_hat, double sigma_hat);

/// Two-step pipeline: H_hat, then sigma_hat(H_hat), then mu2_hat and lambda_hat.
EstimationResult estimate_all(const SamplePath& path, const Filter& f);

}  // namespace fou

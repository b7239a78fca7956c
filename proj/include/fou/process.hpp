#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fou {

/// Admissible parameter box for the fOU model.
struct FouBounds {
    double lambda_max = 100.0;
    double sigma_lo = 1e-6;
    double sigma_hi = 1e6;
};

/// Parameters of dY = -lambda Y dt + sigma dW^H, Y_0 = y0.
struct FouParams {
    double lambda = 1.0;
    double sigma = 1.0;
    double hurst = 0.5;
    double y0 = 0.0;

    /// Throws ParameterError naming the offending field.
    void validate(const FouBounds& bounds = {}) const;
};

struct PathMeta {
    std::string model;
    std::uint64_t seed = 0;
    std::optional<FouParams> params;
    std::vector<std::string> warnings;
};

/// Observations X_0..X_N on the mesh t_n = n * delta.
struct SamplePath {
    double delta = 1.0;
    std::vector<double> values;
    std::optional<PathMeta> meta;

    /// N, the number of steps (values.size() - 1).
    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    /// T = N * delta.
    double horizon() const { return static_cast<double>(steps()) * delta; }
};

/**
 * Euler-Maruyama path driven by exact fGn increments:
 * X_{n+1} = X_n - lambda X_n delta + sigma (W^H_{(n+1)delta} - W^H_{n delta}).
 * Requires lambda * delta < 1; above 0.5 a warning is recorded in the path metadata.
 */
SamplePath simulate_euler(const FouParams& params, std::size_t n_steps, double delta, std::uint64_t seed);

/// Same recursion with caller-supplied driving increments sigma * dW^H (one per step).
SamplePath euler_from_increments(const FouParams& params, double delta, std::span<const double> increments);

/// mu_2 = sigma^2 Gamma(2H+1) / (2 lambda^{2H}), the stationary variance.
double stationary_variance(const FouParams& params);

/**
 * Variogram v(t) = Var(Y_0) - Cov(Y_0, Y_t) of the stationary solution,
 *
 *   v(t) = mu_2 (1 - e^{-lambda t})
 *          - (sigma^2 H / 2) int_0^inf e^{-lambda w} ((t+w)^{2H-1} - |t-w|^{2H-1}) dw.
 *
 * The integral is split at the kink w = t, truncated at w = -ln(1e-14)/lambda,
 * and evaluated by tanh-sinh quadrature to relative tolerance 1e-8 or better.
 * H = 1/2 uses the closed form (sigma^2 / 2 lambda)(1 - e^{-lambda t}).
 */
double stationary_variogram(const FouParams& params, double t);

/// Exact stationary fOU sampler on n points with mesh delta (dense Cholesky, n <= 2048).
class StationaryFouSampler {
public:
    StationaryFouSampler(const FouParams& params, std::size_t n_points, double delta);
    ~StationaryFouSampler();
    StationaryFouSampler(StationaryFouSampler&&) noexcept;
    StationaryFouSampler& operator=(StationaryFouSampler&&) noexcept;

    /// Cov(Y_0, Y_{k delta}) for k = 0..n-1.
    std::span<const double> autocovariance() const { return autocov_; }
    std::vector<double> sample(std::mt19937_64& gen) const;

private:
    struct Impl;
    std::vector<double> autocov_;
    std::unique_ptr<Impl> impl_;
};

SamplePath sample_stationary_exact(const FouParams& params, std::size_t n_points, double delta,
                                   std::uint64_t seed);

/// Which form of the drift-CLT constant to use.
enum class SigmaHVariant {
    corrected,  ///< (4H-1)(1 + Gamma(3-4H)Gamma(4H-1) / (Gamma(2-2H)Gamma(2H)))
    printed,    ///< the same with Gamma(1-4H); pole at H = 1/2, kept for comparison
};

/// sigma_H^2 on [1/2, 3/4). Throws ParameterError outside the domain.
double sigma_H_squared(double hurst, SigmaHVariant variant = SigmaHVariant::corrected);

/// Asymptotic variance of sqrt(T)(lambda_hat - lambda): lambda sigma_H^2 / (2H)^2. Independent of sigma.
double gamma3(double lambda, double hurst, SigmaHVariant variant = SigmaHVariant::corrected);

const char* to_string(SigmaHVariant variant);
SigmaHVariant parse_sigma_h_variant(const std::string& name);

}  // namespace fou

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fou {

/// Fractional Gaussian noise on a regular mesh: n increments of sigma * W^H over steps of length delta.
struct FgnSpec {
    double hurst = 0.5;
    std::size_t n = 1;
    double delta = 1.0;
    double sigma = 1.0;

    /// Throws ParameterError naming the offending field.
    void validate() const;
    /// sigma * delta^H, the factor applied to unit-mesh unit-scale noise.
    double scale() const;
};

/// rho(k) = (sigma^2 delta^{2H} / 2) (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocovariance(const FgnSpec& spec, std::size_t lag);

/**
 * Exact fGn synthesis by circulant embedding (Wood & Chan / Davies & Harte).
 *
 * The embedding has size M = smallest power of two >= 2(n-1); its eigenvalues
 * are computed once at construction, so a sampler is meant to be built once
 * per (H, n) and reused across replications. Sampling is const and safe to
 * call concurrently with distinct generators.
 *
 * Samples are unit-mesh, unit-scale; multiply by FgnSpec::scale().
 */
class CirculantFgnSampler {
public:
    CirculantFgnSampler(double hurst, std::size_t n);
    ~CirculantFgnSampler();
    CirculantFgnSampler(const CirculantFgnSampler&) = delete;
    CirculantFgnSampler& operator=(const CirculantFgnSampler&) = delete;
    CirculantFgnSampler(CirculantFgnSampler&&) noexcept;
    CirculantFgnSampler& operator=(CirculantFgnSampler&&) noexcept;

    double hurst() const { return hurst_; }
    std::size_t size() const { return n_; }
    std::size_t embedding_size() const { return m_; }
    /// Circulant eigenvalues before clipping.
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    /// Number of eigenvalues in [-tol, 0) that were clipped to zero.
    std::size_t clipped_eigenvalues() const { return clipped_; }

    /// Two independent rows from one complex transform.
    std::pair<std::vector<double>, std::vector<double>> sample_pair(std::mt19937_64& gen) const;
    std::vector<double> sample(std::mt19937_64& gen) const;

private:
    struct Plan;
    double hurst_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> eigenvalues_;
    std::vector<double> weights_;  // sqrt(max(eig, 0) / M)
    std::size_t clipped_ = 0;
    std::unique_ptr<Plan> plan_;
};

/// Dense Cholesky sampler for a stationary Gaussian sequence with the given autocovariance.
/// Small-n oracle; the factor is computed once and reused.
class ToeplitzCholeskySampler {
public:
    /// autocov[k] = Cov(X_0, X_k), k = 0..n-1. Throws ParameterError when n > max_size
    /// and NumericalError when the matrix is not positive definite even after jitter.
    explicit ToeplitzCholeskySampler(std::span<const double> autocov, std::size_t max_size = 4096);
    ~ToeplitzCholeskySampler();
    ToeplitzCholeskySampler(ToeplitzCholeskySampler&&) noexcept;
    ToeplitzCholeskySampler& operator=(ToeplitzCholeskySampler&&) noexcept;

    std::size_t size() const { return n_; }
    bool jittered() const { return jittered_; }
    std::vector<double> sample(std::mt19937_64& gen) const;

private:
    struct Factor;
    std::size_t n_;
    bool jittered_ = false;
    std::unique_ptr<Factor> factor_;
};

/// Partial sums starting at zero: out[0] = 0, out[i] = sum_{j<i} increments[j].
std::vector<double> cumulative_path(std::span<const double> increments);

/// n increments of fGn with spec's covariance, using stream 0 of `seed`.
std::vector<double> sample_fgn_circulant(const FgnSpec& spec, std::uint64_t seed);

/// n+1 fBM path values (starting at 0) via dense Cholesky of the fGn covariance. n <= 4096.
std::vector<double> sample_fbm_cholesky(const FgnSpec& spec, std::uint64_t seed);

}  // namespace fou

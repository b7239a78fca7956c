#pragma once

#include "fou/filters.hpp"
#include "fou/process.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fou {

struct EstimatorSet {
    bool hurst = true;
    bool sigma = true;
    bool lambda = true;
};

/// Observation design, replication count and estimator selection for one table cell.
struct McConfig {
    FouParams params;
    /// T. When empty the mesh rule delta = log N / N is used.
    std::optional<double> horizon;
    std::size_t n_obs = 1000;
    std::size_t replications = 500;
    Filter filter = make_daubechies2_filter();
    std::uint64_t seed = 1;
    EstimatorSet estimators;
    /// Fraction of the simulated path discarded before the N observed steps, in [0, 1).
    double burn_in_fraction = 0.0;
    /// Worker threads; 0 means FOU_THREADS or the hardware concurrency.
    unsigned threads = 0;

    double delta() const;
    double horizon_value() const;
    void validate() const;
};

struct EstimatorSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    std::vector<double> samples;
};

struct ReplicationFailure {
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string message;
};

struct McSummary {
    double horizon = 0.0;
    double delta = 0.0;
    std::size_t n_obs = 0;
    std::size_t replications = 0;
    FouParams params;
    std::string filter_label;

    /// Populated for the selected estimators, in replication order of the successful runs.
    std::vector<EstimatorSummary> estimators;
    /// Indices of successful replications, aligned with the sample vectors.
    std::vector<std::size_t> replication_index;
    /// sqrt(T) (lambda_hat - lambda), when lambda is estimated.
    std::vector<double> lambda_errors;
    std::vector<ReplicationFailure> failures;
    std::size_t warning_count = 0;

    const EstimatorSummary* find(const std::string& name) const;
    std::size_t successes() const { return replication_index.size(); }
};

/**
 * Runs config.replications seeded replications of simulate -> estimate.
 *
 * Replications 2j and 2j+1 share one circulant synthesis drawn from stream j
 * of config.seed, and the reduction runs in replication order, so the summary
 * is bit-identical for any thread count. Individual failures are recorded;
 * more than 20% failures throws ExperimentError listing replay seeds.
 */
McSummary run_experiment(const McConfig& config);

/// Worker count used when none is requested: FOU_THREADS, else hardware concurrency.
unsigned default_thread_count();

/// Numerically stable running mean / variance.
class RunningStats {
public:
    void push(double x);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased variance; 0 for fewer than two samples.
    double variance() const;
    double sd() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

double silverman_bandwidth(std::span<const double> samples);

/// Gaussian-kernel density estimate with Silverman bandwidth, evaluated on `grid`.
std::vector<double> kernel_density(std::span<const double> samples, std::span<const double> grid);

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);
double normal_pdf(double x, double mean = 0.0, double variance = 1.0);

/// sup |F_M - Phi_{mean, variance}| via the sorted-sample formula.
double ks_distance(std::span<const double> samples, double mean, double variance);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value c(alpha) sqrt((n+m)/(n m)).
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// CSV exports.

/// One row per estimator: lambda,sigma,hurst,T,N,estimator,mean,sd,M.
void write_table_csv(std::ostream& out, const McSummary& summary, bool header = true);
/// replication column followed by one column per estimator (and lambda_err when present).
void write_samples_csv(std::ostream& out, const McSummary& summary);
/// x,kde,theoretical on `points` grid points spanning the samples padded by 5 bandwidths.
void write_density_csv(std::ostream& out, std::span<const double> samples, double theoretical_variance,
                       std::size_t points = 401);

}  // namespace fou

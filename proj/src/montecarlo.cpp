#include "fou/montecarlo.hpp"

#include "fou/errors.hpp"
#include "fou/estimators.hpp"
#include "fou/fgn.hpp"
#include "fou/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace fou {

double McConfig::delta() const {
    if (horizon) return *horizon / static_cast<double>(n_obs);
    const double n = static_cast<double>(n_obs);
    return std::log(n) / n;
}

double McConfig::horizon_value() const { return delta() * static_cast<double>(n_obs); }

void McConfig::validate() const {
    params.validate();
    if (n_obs < 2) throw ParameterError("n_obs must be at least 2");
    if (replications < 1) throw ParameterError("replications must be at least 1");
    if (horizon && !(*horizon > 0.0)) throw ParameterError("horizon T must be positive");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw ParameterError("burn_in_fraction must lie in [0, 1)");
    if (!estimators.hurst && !estimators.sigma && !estimators.lambda)
        throw ParameterError("no estimator selected");
    if (params.lambda * delta() >= 1.0)
        throw ParameterError("lambda * delta >= 1 violates the Euler stability bound");
}

const EstimatorSummary* McSummary::find(const std::string& name) const {
    for (const auto& e : estimators)
        if (e.name == name) return &e;
    return nullptr;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("FOU_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Outcome {
    bool ok = false;
    EstimationResult result;
    std::string error;
};

}  // namespace

McSummary run_experiment(const McConfig& config) {
    config.validate();
    const double delta = config.delta();
    const std::size_t observed = config.n_obs;
    const std::size_t total_steps = static_cast<std::size_t>(
        std::ceil(static_cast<double>(observed) / (1.0 - config.burn_in_fraction) - 1e-9));
    const std::size_t discard = total_steps - observed;

    const CirculantFgnSampler sampler(config.params.hurst, total_steps);
    const double scale = FgnSpec{config.params.hurst, total_steps, delta, config.params.sigma}.scale();

    const std::size_t m = config.replications;
    const std::size_t pairs = (m + 1) / 2;
    std::vector<Outcome> outcomes(m);

    auto replicate = [&](std::size_t r, std::vector<double>& noise) {
        Outcome& out = outcomes[r];
        try {
            for (double& v : noise) v *= scale;
            SamplePath path = euler_from_increments(config.params, delta, noise);
            if (discard > 0) path.values.erase(path.values.begin(), path.values.begin() + discard);
            out.result = estimate_all(path, config.filter);
            out.result.warnings.insert(out.result.warnings.end(), path.meta->warnings.begin(),
                                       path.meta->warnings.end());
            out.ok = true;
        } catch (const Error& e) {
            out.error = e.what();
        }
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            for (std::size_t j = next++; j < pairs && !failed; j = next++) {
                auto gen = make_stream(config.seed, j);
                auto [first, second] = sampler.sample_pair(gen);
                replicate(2 * j, first);
                if (2 * j + 1 < m) replicate(2 * j + 1, second);
            }
        } catch (...) {
            if (!failed.exchange(true)) fatal = std::current_exception();
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(config.threads ? config.threads : default_thread_count(), pairs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (fatal) std::rethrow_exception(fatal);

    McSummary summary;
    summary.horizon = config.horizon_value();
    summary.delta = delta;
    summary.n_obs = config.n_obs;
    summary.replications = m;
    summary.params = config.params;
    summary.filter_label = config.filter.label();

    std::vector<std::string> names;
    if (config.estimators.hurst) names.push_back("hurst");
    if (config.estimators.sigma) names.push_back("sigma");
    if (config.estimators.lambda) {
        names.push_back("mu2");
        names.push_back("lambda");
    }
    std::vector<RunningStats> stats(names.size());
    summary.estimators.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) summary.estimators[i].name = names[i];

    const double root_t = std::sqrt(summary.horizon);
    for (std::size_t r = 0; r < m; ++r) {
        const Outcome& o = outcomes[r];
        if (!o.ok) {
            summary.failures.push_back({r, config.seed, r / 2, o.error});
            continue;
        }
        summary.replication_index.push_back(r);
        summary.warning_count += o.result.warnings.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
            double v = 0.0;
            if (names[i] == "hurst") v = o.result.hurst_hat;
            else if (names[i] == "sigma") v = o.result.sigma_hat;
            else if (names[i] == "mu2") v = o.result.mu2_hat;
            else v = o.result.lambda_hat;
            stats[i].push(v);
            summary.estimators[i].samples.push_back(v);
        }
        if (config.estimators.lambda)
            summary.lambda_errors.push_back(root_t * (o.result.lambda_hat - config.params.lambda));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        summary.estimators[i].mean = stats[i].mean();
        summary.estimators[i].sd = stats[i].sd();
    }

    if (5 * summary.failures.size() > m) {
        std::ostringstream msg;
        msg << "experiment failed: " << summary.failures.size() << " of " << m
            << " replications failed; replay (seed, stream, replication):";
        for (const auto& f : summary.failures)
            msg << " (" << f.seed << ", " << f.stream << ", " << f.replication << ")";
        msg << "; first error: " << summary.failures.front().message;
        throw ExperimentError(msg.str());
    }
    return summary;
}

// ---------------------------------------------------------------------------

void RunningStats::push(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

double RunningStats::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double RunningStats::sd() const { return std::sqrt(variance()); }

double silverman_bandwidth(std::span<const double> samples) {
    RunningStats s;
    for (double x : samples) s.push(x);
    return 1.06 * s.sd() * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> kernel_density(std::span<const double> samples, std::span<const double> grid) {
    if (samples.size() < 2) throw ParameterError("kernel density needs at least two samples");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi) throw ParameterError("kernel density: all samples are identical");
    const double h = silverman_bandwidth(samples);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> density(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (double x : samples) {
            const double z = (grid[g] - x) / h;
            acc += std::exp(-0.5 * z * z);
        }
        density[g] = acc * norm;
    }
    return density;
}

double normal_cdf(double x, double mean, double variance) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double normal_pdf(double x, double mean, double variance) {
    const double z = x - mean;
    return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double ks_distance(std::span<const double> samples, double mean, double variance) {
    if (samples.empty()) throw ParameterError("ks_distance needs at least one sample");
    if (!(variance > 0.0)) throw ParameterError("ks_distance: variance must be positive");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i], mean, variance);
        d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample needs nonempty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
    }
    return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

// ---------------------------------------------------------------------------

void write_table_csv(std::ostream& out, const McSummary& s, bool header) {
    const auto old_precision = out.precision(10);
    if (header) out << "lambda,sigma,hurst,T,N,filter,estimator,mean,sd,M\n";
    for (const auto& e : s.estimators) {
        out << s.params.lambda << ',' << s.params.sigma << ',' << s.params.hurst << ',' << s.horizon << ','
            << s.n_obs << ',' << s.filter_label << ',' << e.name << ',' << e.mean << ',' << e.sd << ','
            << e.samples.size() << '\n';
    }
    out.precision(old_precision);
}

void write_samples_csv(std::ostream& out, const McSummary& s) {
    const auto old_precision = out.precision(17);
    out << "replication";
    for (const auto& e : s.estimators) out << ',' << e.name << "_hat";
    if (!s.lambda_errors.empty()) out << ",lambda_err";
    out << '\n';
    for (std::size_t i = 0; i < s.replication_index.size(); ++i) {
        out << s.replication_index[i];
        for (const auto& e : s.estimators) out << ',' << e.samples[i];
        if (!s.lambda_errors.empty()) out << ',' << s.lambda_errors[i];
        out << '\n';
    }
    out.precision(old_precision);
}

void write_density_csv(std::ostream& out, std::span<const double> samples, double theoretical_variance,
                       std::size_t points) {
    if (points < 2) throw ParameterError("density grid needs at least two points");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    const double h = silverman_bandwidth(samples);
    const double a = *lo - 5.0 * h;
    const double b = *hi + 5.0 * h;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto kde = kernel_density(samples, grid);
    const auto old_precision = out.precision(10);
    out << "x,kde,theoretical\n";
    for (std::size_t i = 0; i < points; ++i)
        out << grid[i] << ',' << kde[i] << ',' << normal_pdf(grid[i], 0.0, theoretical_variance) << '\n';
    out.precision(old_precision);
}

}  // namespace fou

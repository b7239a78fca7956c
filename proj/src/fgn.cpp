#include "fou/fgn.hpp"

#include "fou/errors.hpp"
#include "fou/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>
#include <string>

namespace fou {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

std::size_t next_pow2(std::size_t v) {
    std::size_t m = 1;
    while (m < v) m <<= 1;
    return m;
}

double unit_autocovariance(double hurst, std::size_t lag) {
    const double two_h = 2.0 * hurst;
    const double k = static_cast<double>(lag);
    if (lag == 0) return 1.0;
    return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
}

}  // namespace

void FgnSpec::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw ParameterError("hurst must lie in (0, 1), got " + std::to_string(hurst));
    if (n < 1) throw ParameterError("n must be at least 1");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ParameterError("delta must be positive, got " + std::to_string(delta));
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ParameterError("sigma must be positive, got " + std::to_string(sigma));
}

double FgnSpec::scale() const { return sigma * std::pow(delta, hurst); }

double fgn_autocovariance(const FgnSpec& spec, std::size_t lag) {
    const double s = spec.scale();
    return s * s * unit_autocovariance(spec.hurst, lag);
}

// ---------------------------------------------------------------------------

struct CirculantFgnSampler::Plan {
    fftw_plan forward = nullptr;
    ~Plan() {
        if (forward) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(forward);
        }
    }
};

CirculantFgnSampler::CirculantFgnSampler(double hurst, std::size_t n)
    : hurst_(hurst), n_(n), m_(std::max<std::size_t>(2, next_pow2(2 * (n > 0 ? n - 1 : 0)))) {
    FgnSpec{hurst, n, 1.0, 1.0}.validate();

    std::vector<std::complex<double>> row(m_);
    const std::size_t half = m_ / 2;
    for (std::size_t k = 0; k <= half; ++k) row[k] = unit_autocovariance(hurst, k);
    for (std::size_t k = 1; k < half; ++k) row[m_ - k] = row[k];

    plan_ = std::make_unique<Plan>();
    {
        std::lock_guard lock(planner_mutex());
        plan_->forward = fftw_plan_dft_1d(static_cast<int>(m_), as_fftw(row.data()), as_fftw(row.data()),
                                          FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plan_->forward) throw NumericalError("fgn: FFT planning failed");
    fftw_execute_dft(plan_->forward, as_fftw(row.data()), as_fftw(row.data()));

    eigenvalues_.resize(m_);
    double max_eig = 0.0;
    for (std::size_t k = 0; k < m_; ++k) {
        eigenvalues_[k] = row[k].real();
        max_eig = std::max(max_eig, eigenvalues_[k]);
    }
    const double tol = 1e-8 * max_eig;
    const auto min_it = std::min_element(eigenvalues_.begin(), eigenvalues_.end());
    if (*min_it < -tol) {
        std::ostringstream msg;
        msg << "fgn: circulant embedding not nonnegative definite, eigenvalue " << *min_it
            << " at index " << (min_it - eigenvalues_.begin());
        throw NumericalError(msg.str());
    }
    weights_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) {
        double e = eigenvalues_[k];
        if (e < 0.0) {
            e = 0.0;
            ++clipped_;
        }
        weights_[k] = std::sqrt(e / static_cast<double>(m_));
    }
}

CirculantFgnSampler::~CirculantFgnSampler() = default;
CirculantFgnSampler::CirculantFgnSampler(CirculantFgnSampler&&) noexcept = default;
CirculantFgnSampler& CirculantFgnSampler::operator=(CirculantFgnSampler&&) noexcept = default;

std::pair<std::vector<double>, std::vector<double>>
CirculantFgnSampler::sample_pair(std::mt19937_64& gen) const {
    std::vector<double> z(2 * m_);
    fill_standard_normal(gen, z);
    std::vector<std::complex<double>> buf(m_);
    for (std::size_t k = 0; k < m_; ++k) buf[k] = weights_[k] * std::complex<double>(z[2 * k], z[2 * k + 1]);
    fftw_execute_dft(plan_->forward, as_fftw(buf.data()), as_fftw(buf.data()));

    std::pair<std::vector<double>, std::vector<double>> out;
    out.first.resize(n_);
    out.second.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        out.first[j] = buf[j].real();
        out.second[j] = buf[j].imag();
    }
    return out;
}

std::vector<double> CirculantFgnSampler::sample(std::mt19937_64& gen) const {
    return sample_pair(gen).first;
}

// ---------------------------------------------------------------------------

struct ToeplitzCholeskySampler::Factor {
    Eigen::MatrixXd lower;
};

ToeplitzCholeskySampler::ToeplitzCholeskySampler(std::span<const double> autocov, std::size_t max_size)
    : n_(autocov.size()) {
    if (n_ == 0) throw ParameterError("cholesky sampler: empty covariance");
    if (n_ > max_size)
        throw ParameterError("cholesky sampler: n = " + std::to_string(n_) + " exceeds the dense limit " +
                             std::to_string(max_size));
    Eigen::MatrixXd cov(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) cov(i, j) = autocov[i > j ? i - j : j - i];

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-12 * cov.trace() / static_cast<double>(n_);
        cov.diagonal().array() += jitter;
        llt.compute(cov);
        jittered_ = true;
        if (llt.info() != Eigen::Success)
            throw NumericalError("cholesky sampler: covariance not positive definite after jitter");
    }
    factor_ = std::make_unique<Factor>(Factor{llt.matrixL()});
}

ToeplitzCholeskySampler::~ToeplitzCholeskySampler() = default;
ToeplitzCholeskySampler::ToeplitzCholeskySampler(ToeplitzCholeskySampler&&) noexcept = default;
ToeplitzCholeskySampler& ToeplitzCholeskySampler::operator=(ToeplitzCholeskySampler&&) noexcept = default;

std::vector<double> ToeplitzCholeskySampler::sample(std::mt19937_64& gen) const {
    Eigen::VectorXd z(n_);
    fill_standard_normal(gen, std::span<double>(z.data(), n_));
    Eigen::VectorXd x = factor_->lower.triangularView<Eigen::Lower>() * z;
    return {x.data(), x.data() + n_};
}

// ---------------------------------------------------------------------------

std::vector<double> cumulative_path(std::span<const double> increments) {
    std::vector<double> path(increments.size() + 1, 0.0);
    for (std::size_t i = 0; i < increments.size(); ++i) path[i + 1] = path[i] + increments[i];
    return path;
}

std::vector<double> sample_fgn_circulant(const FgnSpec& spec, std::uint64_t seed) {
    spec.validate();
    CirculantFgnSampler sampler(spec.hurst, spec.n);
    auto gen = make_stream(seed, 0);
    auto x = sampler.sample(gen);
    const double s = spec.scale();
    for (double& v : x) v *= s;
    return x;
}

std::vector<double> sample_fbm_cholesky(const FgnSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.n > 4096)
        throw ParameterError("fbm cholesky: n = " + std::to_string(spec.n) + " exceeds 4096");
    std::vector<double> acov(spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) acov[k] = fgn_autocovariance(spec, k);
    ToeplitzCholeskySampler sampler(acov);
    auto gen = make_stream(seed, 0);
    return cumulative_path(sampler.sample(gen));
}

}  // namespace fou

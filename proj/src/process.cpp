#include "fou/process.hpp"

#include "fou/errors.hpp"
#include "fou/fgn.hpp"
#include "fou/rng.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace fou {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// (t+w)^a - gap^a with gap = |t-w|, without cancellation when w and t are far apart.
double power_difference(double t, double w, double gap, double a) {
    const double big = std::max(t, w);
    if (gap < 0.5 * big) return std::pow(t + w, a) - std::pow(gap, a);
    const double ratio = std::min(t, w) / big;
    return std::pow(big, a) * (std::expm1(a * std::log1p(ratio)) - std::expm1(a * std::log1p(-ratio)));
}

}  // namespace

void FouParams::validate(const FouBounds& bounds) const {
    if (!(lambda > 0.0 && lambda < bounds.lambda_max))
        throw ParameterError("lambda must lie in (0, " + fmt(bounds.lambda_max) + "), got " + fmt(lambda));
    if (!(sigma >= bounds.sigma_lo && sigma <= bounds.sigma_hi))
        throw ParameterError("sigma must lie in [" + fmt(bounds.sigma_lo) + ", " + fmt(bounds.sigma_hi) +
                             "], got " + fmt(sigma));
    if (!(hurst > 0.0 && hurst < 1.0))
        throw ParameterError("hurst must lie in (0, 1), got " + fmt(hurst));
    if (!std::isfinite(y0)) throw ParameterError("y0 must be finite");
}

SamplePath euler_from_increments(const FouParams& params, double delta, std::span<const double> increments) {
    params.validate();
    if (!(delta > 0.0)) throw ParameterError("delta must be positive, got " + fmt(delta));
    const double damping = params.lambda * delta;
    if (damping >= 1.0)
        throw ParameterError("lambda * delta = " + fmt(damping) + " violates the Euler stability bound (< 1)");

    SamplePath path;
    path.delta = delta;
    path.meta = PathMeta{"fou", 0, params, {}};
    if (damping > 0.5) path.meta->warnings.push_back("lambda * delta > 0.5: coarse drift discretization");

    path.values.resize(increments.size() + 1);
    double x = params.y0;
    path.values[0] = x;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        x = x - damping * x + increments[i];
        path.values[i + 1] = x;
    }
    return path;
}

SamplePath simulate_euler(const FouParams& params, std::size_t n_steps, double delta, std::uint64_t seed) {
    params.validate();
    if (n_steps < 1) throw ParameterError("n_steps must be at least 1");
    const auto noise = sample_fgn_circulant(FgnSpec{params.hurst, n_steps, delta, params.sigma}, seed);
    auto path = euler_from_increments(params, delta, noise);
    path.meta->seed = seed;
    return path;
}

double stationary_variance(const FouParams& params) {
    params.validate();
    const double two_h = 2.0 * params.hurst;
    return params.sigma * params.sigma * std::tgamma(two_h + 1.0) / (2.0 * std::pow(params.lambda, two_h));
}

double stationary_variogram(const FouParams& params, double t) {
    params.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("variogram: t must be nonnegative, got " + fmt(t));
    if (t == 0.0) return 0.0;

    const double lambda = params.lambda;
    const double mu2 = stationary_variance(params);
    const double relax = -std::expm1(-lambda * t);
    if (params.hurst == 0.5) return mu2 * relax;

    const double a = 2.0 * params.hurst - 1.0;
    // Two-argument form: xc is the signed distance to the nearest endpoint, so |t - w| stays exact near w = t.
    auto below = [&](double w, double xc) {
        const double gap = xc > 0.0 ? xc : t - w;
        return std::exp(-lambda * w) * power_difference(t, w, gap, a);
    };
    auto above = [&](double w, double xc) {
        const double gap = xc < 0.0 ? -xc : w - t;
        return std::exp(-lambda * w) * power_difference(t, w, gap, a);
    };

    thread_local boost::math::quadrature::tanh_sinh<double> quadrature;
    constexpr double tol = 1e-10;
    const double w_max = -std::log(1e-14) / lambda;

    double total = 0.0;
    double total_l1 = 0.0;
    double total_err = 0.0;
    auto piece = [&](auto integrand, double lo, double hi) {
        double err = 0.0;
        double l1 = 0.0;
        total += quadrature.integrate(integrand, lo, hi, tol, &err, &l1);
        total_err += err;
        total_l1 += l1;
    };
    if (t < w_max) {
        piece(below, 0.0, t);
        piece(above, t, w_max);
    } else {
        piece([&](double w) { return std::exp(-lambda * w) * power_difference(t, w, t - w, a); }, 0.0, w_max);
    }
    if (!(total_err <= 1e-8 * total_l1) || !std::isfinite(total))
        throw NumericalError("variogram quadrature did not converge: achieved relative error " +
                             fmt(total_err / total_l1));

    return mu2 * relax - 0.5 * params.sigma * params.sigma * params.hurst * total;
}

// ---------------------------------------------------------------------------

struct StationaryFouSampler::Impl {
    ToeplitzCholeskySampler cholesky;
};

StationaryFouSampler::StationaryFouSampler(const FouParams& params, std::size_t n_points, double delta) {
    params.validate();
    if (n_points < 1) throw ParameterError("n_points must be at least 1");
    if (n_points > 2048)
        throw ParameterError("exact stationary sampler: n_points = " + std::to_string(n_points) +
                             " exceeds 2048");
    if (!(delta > 0.0)) throw ParameterError("delta must be positive, got " + fmt(delta));
    const double mu2 = stationary_variance(params);
    autocov_.resize(n_points);
    for (std::size_t k = 0; k < n_points; ++k)
        autocov_[k] = mu2 - stationary_variogram(params, static_cast<double>(k) * delta);
    impl_ = std::make_unique<Impl>(Impl{ToeplitzCholeskySampler(autocov_, 2048)});
}

StationaryFouSampler::~StationaryFouSampler() = default;
StationaryFouSampler::StationaryFouSampler(StationaryFouSampler&&) noexcept = default;
StationaryFouSampler& StationaryFouSampler::operator=(StationaryFouSampler&&) noexcept = default;

std::vector<double> StationaryFouSampler::sample(std::mt19937_64& gen) const {
    return impl_->cholesky.sample(gen);
}

SamplePath sample_stationary_exact(const FouParams& params, std::size_t n_points, double delta,
                                   std::uint64_t seed) {
    StationaryFouSampler sampler(params, n_points, delta);
    auto gen = make_stream(seed, 0);
    SamplePath path;
    path.delta = delta;
    path.values = sampler.sample(gen);
    path.meta = PathMeta{"fou-stationary", seed, params, {}};
    return path;
}

// ---------------------------------------------------------------------------

double sigma_H_squared(double hurst, SigmaHVariant variant) {
    if (!(hurst >= 0.5 && hurst < 0.75))
        throw ParameterError("sigma_H^2 requires 1/2 <= H < 3/4, got H = " + fmt(hurst));
    const double shifted = variant == SigmaHVariant::corrected ? 3.0 - 4.0 * hurst : 1.0 - 4.0 * hurst;
    if (variant == SigmaHVariant::printed && hurst == 0.5)
        throw ParameterError("printed sigma_H^2 has a pole at H = 1/2 (Gamma(-1))");
    const double ratio = std::tgamma(shifted) * std::tgamma(4.0 * hurst - 1.0) /
                         (std::tgamma(2.0 - 2.0 * hurst) * std::tgamma(2.0 * hurst));
    const double value = (4.0 * hurst - 1.0) * (1.0 + ratio);
    if (!std::isfinite(value)) throw NumericalError("sigma_H^2 is not finite at H = " + fmt(hurst));
    return value;
}

double gamma3(double lambda, double hurst, SigmaHVariant variant) {
    if (!(lambda > 0.0)) throw ParameterError("lambda must be positive, got " + fmt(lambda));
    const double two_h = 2.0 * hurst;
    return lambda * sigma_H_squared(hurst, variant) / (two_h * two_h);
}

const char* to_string(SigmaHVariant variant) {
    return variant == SigmaHVariant::corrected ? "corrected" : "printed";
}

SigmaHVariant parse_sigma_h_variant(const std::string& name) {
    if (name == "corrected") return SigmaHVariant::corrected;
    if (name == "printed") return SigmaHVariant::printed;
    throw ParameterError("sigma-h-variant must be 'corrected' or 'printed', got '" + name + "'");
}

}  // namespace fou

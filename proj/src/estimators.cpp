#include "fou/estimators.hpp"

#include "fou/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fou {

namespace {

constexpr double kRoundingSlack = 16.0 * std::numeric_limits<double>::epsilon();

std::string num(double v) {
    std::string s = std::to_string(v);
    return s;
}

}  // namespace

QuadraticVariation generalized_quadratic_variation(std::span<const double> values, const Filter& f) {
    const auto a = f.coeffs();
    if (values.size() < a.size())
        throw ParameterError("path has " + std::to_string(values.size()) + " values, filter " + f.label() +
                             " needs at least " + std::to_string(a.size()));
    QuadraticVariation qv;
    qv.windows = values.size() - a.size() + 1;
    for (std::size_t i = 0; i < qv.windows; ++i) {
        double y = 0.0;
        double magnitude = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            y += a[k] * values[i + k];
            magnitude += std::abs(a[k] * values[i + k]);
        }
        if (std::abs(y) <= kRoundingSlack * magnitude) continue;
        qv.value += y * y;
    }
    return qv;
}

QuadraticVariation generalized_quadratic_variation(const SamplePath& path, const Filter& f) {
    return generalized_quadratic_variation(path.values, f);
}

HurstEstimate hurst_from_variations(const QuadraticVariation& va, const QuadraticVariation& va2) {
    if (!(va.value > 0.0))
        throw EstimationError("degenerate path: quadratic variation V_a is zero");
    if (!(va2.value > 0.0))
        throw EstimationError("degenerate path: quadratic variation of the dilated filter is zero");
    HurstEstimate h;
    h.va = va;
    h.va2 = va2;
    h.raw = 0.5 * std::log2(va2.mean() / va.mean());
    h.value = std::clamp(h.raw, kHurstClampLo, kHurstClampHi);
    h.clamped = h.value != h.raw;
    return h;
}

HurstEstimate estimate_hurst_detailed(const SamplePath& path, const Filter& f) {
    const Filter f2 = dilate(f);
    if (path.values.size() < f2.length())
        throw ParameterError("path has " + std::to_string(path.values.size()) +
                             " values, Hurst estimation with filter " + f.label() + " needs at least " +
                             std::to_string(f2.length()));
    return hurst_from_variations(generalized_quadratic_variation(path, f),
                                 generalized_quadratic_variation(path, f2));
}

double estimate_hurst(const SamplePath& path, const Filter& f) {
    return estimate_hurst_detailed(path, f).value;
}

double sigma_from_variation(const QuadraticVariation& va, const Filter& f, double hurst_hat, double delta) {
    if (!(hurst_hat > 0.0 && hurst_hat < 1.0))
        throw ParameterError("hurst_hat must lie in (0, 1), got " + num(hurst_hat));
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    if (!(va.value > 0.0)) throw EstimationError("degenerate path: quadratic variation V_a is zero");
    const double s = filter_quadratic_form(f.coeffs(), hurst_hat);
    if (!(s < 0.0))
        throw Error("internal invariant violated: S(a, H) = " + num(s) + " is not negative");
    return std::sqrt(-2.0 * va.mean() / (s * std::pow(delta, 2.0 * hurst_hat)));
}

double estimate_sigma(const SamplePath& path, const Filter& f, double hurst_hat) {
    return sigma_from_variation(generalized_quadratic_variation(path, f), f, hurst_hat, path.delta);
}

double empirical_second_moment(const SamplePath& path) {
    if (path.values.size() < 2) throw ParameterError("second moment needs at least X_0 and X_1");
    double sum = 0.0;
    for (std::size_t n = 1; n < path.values.size(); ++n) sum += path.values[n] * path.values[n];
    return sum / static_cast<double>(path.values.size() - 1);
}

double estimate_lambda(double mu2_hat, double hurst_hat, double sigma_hat) {
    if (!(mu2_hat > 0.0)) throw ParameterError("mu2_hat must be positive, got " + num(mu2_hat));
    if (!(sigma_hat > 0.0)) throw ParameterError("sigma_hat must be positive, got " + num(sigma_hat));
    if (!(hurst_hat > 0.0 && hurst_hat < 1.0))
        throw ParameterError("hurst_hat must lie in (0, 1), got " + num(hurst_hat));
    const double ratio = 2.0 * mu2_hat / (sigma_hat * sigma_hat * std::tgamma(2.0 * hurst_hat + 1.0));
    return std::pow(ratio, -1.0 / (2.0 * hurst_hat));
}

EstimationResult estimate_all(const SamplePath& path, const Filter& f) {
    EstimationResult r;
    r.filter_label = f.label();

    HurstEstimate h;
    try {
        h = estimate_hurst_detailed(path, f);
    } catch (const EstimationError& e) {
        throw EstimationError(std::string("hurst stage: ") + e.what());
    }
    r.hurst_hat = h.value;
    r.windows_a = h.va.windows;
    r.windows_a2 = h.va2.windows;
    if (h.clamped)
        r.warnings.push_back("H_hat clamped from " + num(h.raw) + " to " + num(h.value));
    if (!(h.value > 0.5 && h.value < 0.75))
        r.warnings.push_back("H_hat outside (1/2, 3/4): drift CLT not guaranteed");

    try {
        r.sigma_hat = sigma_from_variation(h.va, f, h.value, path.delta);
    } catch (const EstimationError& e) {
        throw EstimationError(std::string("sigma stage: ") + e.what());
    }

    r.mu2_hat = empirical_second_moment(path);
    if (!(r.mu2_hat > 0.0)) throw EstimationError("lambda stage: empirical second moment is zero");
    r.lambda_hat = estimate_lambda(r.mu2_hat, r.hurst_hat, r.sigma_hat);
    return r;
}

}  // namespace fou

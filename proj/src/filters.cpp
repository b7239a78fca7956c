#include "fou/filters.hpp"

#include "fou/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace fou {

namespace {

constexpr double kVanishingTol = 1e-12;

double max_abs(std::span<const double> c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view token) {
    token = trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParameterError("filter: cannot parse coefficient '" + std::string(token) + "'");
    return value;
}

}  // namespace

Filter::Filter(std::vector<double> coeffs, std::string label)
    : coeffs_(std::move(coeffs)), label_(std::move(label)) {
    order_ = filter_order(coeffs_);
}

double filter_moment(std::span<const double> coeffs, int r) {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        sum += coeffs[k] * std::pow(static_cast<double>(k), r);
    return sum;
}

int filter_order(std::span<const double> coeffs) {
    if (coeffs.size() < 2)
        throw ParameterError("filter: length must be at least 2");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw ParameterError("filter: non-finite coefficient");
    const double scale = max_abs(coeffs);
    if (scale == 0.0)
        throw ParameterError("filter: all coefficients are zero");

    const double tol = kVanishingTol * scale;
    const double half = 0.5 * static_cast<double>(coeffs.size() - 1);
    std::vector<double> u(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        u[k] = (static_cast<double>(k) - half) / half;

    // A nonzero filter of length K+1 cannot annihilate every polynomial of
    // degree <= K, so the loop always terminates with a nonvanishing moment.
    std::vector<double> power(coeffs.size(), 1.0);
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        double moment = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) moment += coeffs[k] * power[k];
        if (std::abs(moment) > tol) {
            if (l == 0) throw ParameterError("filter has order 0");
            return static_cast<int>(l);
        }
        for (std::size_t k = 0; k < coeffs.size(); ++k) power[k] *= u[k];
    }
    throw ParameterError("filter: no nonvanishing moment found");
}

Filter make_classical_filter(int K) {
    if (K < 1 || K > 30)
        throw ParameterError("classical filter: K must be in [1, 30], got " + std::to_string(K));
    std::vector<double> a(static_cast<std::size_t>(K) + 1);
    double binom = 1.0;
    const double scale = std::ldexp(1.0, -K);
    for (int k = 0; k <= K; ++k) {
        const double sign = ((1 - k) % 2 == 0) ? 1.0 : -1.0;
        a[static_cast<std::size_t>(k)] = sign * binom * scale;
        binom = binom * (K - k) / (k + 1);
    }
    return Filter(std::move(a), "classical:" + std::to_string(K));
}

Filter make_daubechies2_filter() {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    return Filter({0.4829629131445341 * inv_sqrt2, -0.8365163037378077 * inv_sqrt2,
                   0.2241438680420134 * inv_sqrt2, 0.1294095225512603 * inv_sqrt2},
                  "daubechies2");
}

Filter dilate(const Filter& f) {
    std::vector<double> b(2 * f.span() + 1, 0.0);
    for (std::size_t k = 0; k < f.length(); ++k) b[2 * k] = f.coeffs()[k];
    return Filter(std::move(b), f.label() + "^2");
}

double filter_quadratic_form(std::span<const double> coeffs, double hurst) {
    // Diagonal terms vanish; the off-diagonal sum is symmetric.
    const double two_h = 2.0 * hurst;
    double s = 0.0;
    for (std::size_t lag = 1; lag < coeffs.size(); ++lag) {
        double acc = 0.0;
        for (std::size_t k = 0; k + lag < coeffs.size(); ++k) acc += coeffs[k] * coeffs[k + lag];
        s += 2.0 * acc * std::pow(static_cast<double>(lag), two_h);
    }
    return s;
}

Filter parse_filter(std::string_view spec) {
    spec = trim(spec);
    if (spec == "daubechies2" || spec == "db2") return make_daubechies2_filter();
    if (spec.starts_with("classical:")) {
        auto digits = trim(spec.substr(10));
        int K = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), K);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw ParameterError("filter: bad classical order '" + std::string(digits) + "'");
        return make_classical_filter(K);
    }
    if (spec.find(',') == std::string_view::npos)
        throw ParameterError("filter: unknown filter '" + std::string(spec) + "'");
    std::vector<double> coeffs;
    while (true) {
        auto comma = spec.find(',');
        coeffs.push_back(parse_double(spec.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        spec.remove_prefix(comma + 1);
    }
    return Filter(std::move(coeffs), "custom");
}

}  // namespace fou

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fou {

/**
 * Discrete filter a = (a_0, ..., a_K) used by the generalized quadratic
 * variations. The vanishing-moment order L is computed and validated at
 * construction, so a Filter is always of order >= 1.
 *
 * The alternating-sum normalization is not enforced: every estimator built
 * on top of a filter is invariant under a -> c*a.
 */
class Filter {
public:
    explicit Filter(std::vector<double> coeffs, std::string label = "custom");

    std::span<const double> coeffs() const { return coeffs_; }
    std::size_t length() const { return coeffs_.size(); }
    /// K, the largest tap index.
    std::size_t span() const { return coeffs_.size() - 1; }
    int order() const { return order_; }
    const std::string& label() const { return label_; }

private:
    std::vector<double> coeffs_;
    int order_ = 0;
    std::string label_;
};

/// Raw moment sum_k a_k k^r.
double filter_moment(std::span<const double> coeffs, int r);

/**
 * Largest L such that the moments 0..L-1 vanish. Moments are evaluated in the
 * centered coordinate u_k = (2k - K)/K, which has the same vanishing set as
 * the raw moments but stays well conditioned for long filters.
 * Throws ParameterError on all-zero input or when the zeroth moment is nonzero.
 */
int filter_order(std::span<const double> coeffs);

/// a_k = (-1)^{1-k} binom(K, k) / 2^K, order K. Requires 1 <= K <= 30.
Filter make_classical_filter(int K);

/// Order-2 Daubechies filter, coefficients as published, divided by sqrt(2).
Filter make_daubechies2_filter();

/// Filter with zeros interleaved: b_{2k} = a_k, b_{2k+1} = 0.
Filter dilate(const Filter& f);

/// Quadratic form S(a, H) = sum_{k,l} a_k a_l |k - l|^{2H}.
double filter_quadratic_form(std::span<const double> coeffs, double hurst);

/// Parses "daubechies2", "classical:K" or a comma-separated coefficient list.
Filter parse_filter(std::string_view spec);

}  // namespace fou

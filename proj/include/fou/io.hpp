#pragma once

#include "fou/estimators.hpp"
#include "fou/process.hpp"

#include <iosfwd>
#include <string>

namespace fou {

/// Shortest round-trip decimal representation ('.' radix, locale independent).
std::string format_double(double v);

/// CSV with header "t,x" and one row per grid point, '\n' line endings.
void write_path_csv(std::ostream& out, const SamplePath& path);

/**
 * Reads a "t,x" CSV. The mesh is inferred from the time column, which must be
 * uniform to 1e-9 relative; otherwise InputError.
 */
SamplePath read_path_csv(std::istream& in);

/// Flat key=value block: lambda, sigma, hurst, y0.
void write_params_kv(std::ostream& out, const FouParams& params);

/// Flat key=value record: hurst_hat, sigma_hat, mu2_hat, lambda_hat, windows, filter, warnings.
void write_estimation_kv(std::ostream& out, const EstimationResult& result);

}  // namespace fou

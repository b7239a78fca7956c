#pragma once

#include <stdexcept>
#include <string>

namespace fou {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (includes domain and filter validation errors).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed external input: unreadable files, bad CSV, non-uniform time grids.
class InputError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: negative circulant eigenvalues, failed factorization, quadrature trouble.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Data are degenerate for the estimator (e.g. a path with zero quadratic variation).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// A Monte-Carlo experiment exceeded its failure budget.
class ExperimentError : public Error {
public:
    using Error::Error;
};

}  // namespace fou

#pragma once

#include <stdexcept>
#include <string>

namespace zerocorr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract user input (non-finite values, bad descriptors,
/// overlapping boxes, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// Requested operation is not defined for this density or model.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Configuration size incompatible with the polynomial degree (k + 2l > n).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain (Im z <= 0, 2l > n, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed (e.g. symmetric functions of a tuple that
/// is not closed under conjugation).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Closed form requested for a model outside its family.
class ModelMismatchError : public Error {
public:
    using Error::Error;
};

/// Integration backend cannot handle the request (dimension above cutoff,
/// quasi-random sampling for a non-gaussian model).
class BackendUnavailableError : public Error {
public:
    using Error::Error;
};

/// Monte Carlo proposal produced no usable samples.
class DiagnosticsError : public Error {
public:
    using Error::Error;
};

/// Polytope bounding failed (unbounded coordinate).
class GeometryError : public Error {
public:
    using Error::Error;
};

} // namespace zerocorr

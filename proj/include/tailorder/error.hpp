#pragma once

#include <stdexcept>
#include <string>

namespace tailorder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A distribution or distortion was constructed with invalid parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of the operation (p outside (0,1),
/// deductible beyond the right endpoint, grid too small, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A moment-based measure was requested for a spec with infinite mean.
class UnsupportedMeasureError : public Error {
public:
    using Error::Error;
};

/// The Pareto closed form for p0 requires conditions that do not hold.
class OrderingConditionsError : public Error {
public:
    using Error::Error;
};

/// Maximum likelihood fit is undefined for the sample.
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

/// Malformed spec file, CSV or report.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace tailorder

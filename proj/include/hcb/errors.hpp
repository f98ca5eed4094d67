#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lattice size is not a positive multiple of three.
class IncommensurateSize : public Error {
public:
    using Error::Error;
};

/// The incrementally maintained energy drifted away from a full recomputation.
class BookkeepingError : public Error {
public:
    using Error::Error;
};

/// Fewer than two repetitions were available for error estimation.
class InsufficientSamples : public Error {
public:
    using Error::Error;
};

/// Invalid configuration text or invalid parameter values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Wraps a failure raised while simulating one scan point.
class ScanPointError : public Error {
public:
    ScanPointError(std::size_t point_index, const std::string& what)
        : Error("point " + std::to_string(point_index) + ": " + what), point_(point_index) {}

    std::size_t point_index() const noexcept { return point_; }

private:
    std::size_t point_;
};

}  // namespace hcb

#pragma once

#include <stdexcept>
#include <string>

namespace mocap {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched sizes: image dimensions, sequence lengths, vector lengths.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value or inconsistent parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A gait quantity cannot be computed from the detected foot events.
class GaitError : public Error {
public:
    using Error::Error;
};

}  // namespace mocap

#pragma once

#include <stdexcept>
#include <string>

namespace fmx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, non-finite time, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two operands live on different grids or media.
class Mismatch : public Error {
public:
    using Error::Error;
};

/// The grid cannot represent the requested analytic solution without aliasing.
class AliasingError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A complex field that should be real carried an imaginary part above tolerance.
class ImaginaryResidueError : public Error {
public:
    ImaginaryResidueError(const std::string& what, double residue, double threshold)
        : Error(what), residue_(residue), threshold_(threshold) {}

    double residue() const noexcept { return residue_; }
    double threshold() const noexcept { return threshold_; }

private:
    double residue_;
    double threshold_;
};

/// Malformed run configuration; the message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fmx

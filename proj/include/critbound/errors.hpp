#pragma once

#include <stdexcept>
#include <string>

namespace critbound {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Bisection on the initial amplitude could not bracket a decaying solution.
class NoGroundState : public Error {
public:
    using Error::Error;
};

class TruncationTooSmall : public Error {
public:
    using Error::Error;
};

/// The decay fit window is not flat enough to read off a constant.
class NoPlateaus : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    using Error::Error;
};

class DegenerateFunction : public Error {
public:
    using Error::Error;
};

class DegenerateField : public Error {
public:
    using Error::Error;
};

class NoSignChange : public Error {
public:
    using Error::Error;
};

class PlateauNotReached : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace critbound

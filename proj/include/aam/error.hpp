#pragma once

#include <stdexcept>
#include <string>

namespace aam {

// Validation failures (bad input rows, bad config, degenerate calibration data)
// map to CLI exit code 1; I/O and routing failures map to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class CalibrationError : public Error {
public:
  using Error::Error;
};

class InfeasibleError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class RoutingError : public Error {
public:
  using Error::Error;
};

} // namespace aam

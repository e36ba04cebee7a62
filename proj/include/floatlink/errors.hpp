#pragma once

#include <stdexcept>
#include <string>

namespace floatlink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class GimbalLock : public Error
{
public:
  explicit GimbalLock(double theta)
      : Error("pitch angle " + std::to_string(theta) + " rad is too close to +-pi/2")
  {}
};

class SingularMass : public Error
{
public:
  using Error::Error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class DegenerateGeometry : public Error
{
public:
  using Error::Error;
};

class NumericBlowup : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class IoFailure : public Error
{
public:
  using Error::Error;
};

class EmptyWindow : public Error
{
public:
  using Error::Error;
};

class TooFewSamples : public Error
{
public:
  using Error::Error;
};

}  // namespace floatlink

#ifndef COREVAC_ERRORS_HPP
#define COREVAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace corevac {

/// Base class for all corevac errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct MassExceedsThreshold : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

struct NoZeroFound : Error {
  using Error::Error;
};

struct InvalidGrading : Error {
  using Error::Error;
};

struct JacobianDegenerate : Error {
  using Error::Error;
};

struct CflViolation : Error {
  using Error::Error;
};

struct AmplitudeTooLarge : Error {
  using Error::Error;
};

struct OrderUnavailable : Error {
  using Error::Error;
};

struct InsufficientSamples : Error {
  using Error::Error;
};

struct NonpositiveEnergy : Error {
  using Error::Error;
};

struct UnstableMode : Error {
  using Error::Error;
};

struct EigensolverFailure : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct UnknownPreset : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace corevac

#endif

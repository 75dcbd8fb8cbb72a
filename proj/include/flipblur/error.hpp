#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flipblur {

enum class ErrorKind {
  MalformedPsf,
  DegeneratePsf,
  ParseError,
  InvalidCrop,
  PadTooWide,
  DimensionError,
  SizeCapExceeded,
  NumericalFailure,
  NotSymmetric,
  EigensolverFailure,
  InvalidOrder,
  InvalidSet,
  SampleSizeError,
  InvalidNoise,
  UndefinedRre,
  FormatError,
  UsageError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flipblur

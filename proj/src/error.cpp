#include "flipblur/error.hpp"

namespace flipblur {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedPsf: return "malformed-psf";
    case ErrorKind::DegeneratePsf: return "degenerate-psf";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::InvalidCrop: return "invalid-crop";
    case ErrorKind::PadTooWide: return "pad-too-wide";
    case ErrorKind::DimensionError: return "dimension-error";
    case ErrorKind::SizeCapExceeded: return "size-cap-exceeded";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::NotSymmetric: return "not-symmetric";
    case ErrorKind::EigensolverFailure: return "eigensolver-failure";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::InvalidSet: return "invalid-set";
    case ErrorKind::SampleSizeError: return "sample-size-error";
    case ErrorKind::InvalidNoise: return "invalid-noise";
    case ErrorKind::UndefinedRre: return "undefined-rre";
    case ErrorKind::FormatError: return "format-error";
    case ErrorKind::UsageError: return "usage-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace flipblur

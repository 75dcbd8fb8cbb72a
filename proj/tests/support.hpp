#pragma once

#include <optional>

#include "doctest.h"

#include "flipblur/error.hpp"

namespace support {

// Kind of the flipblur::Error thrown by f, or nullopt when f returns normally.
template <typename F>
std::optional<flipblur::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const flipblur::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace support

#define CHECK_ERROR(expr, kind_value) \
  CHECK(support::error_kind([&] { (void)(expr); }) == std::optional<flipblur::ErrorKind>(kind_value))

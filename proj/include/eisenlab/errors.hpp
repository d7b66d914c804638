#pragma once

#include <stdexcept>

namespace eisenlab {

// Request exceeds a configured resource cap (table sizes, mode limits).
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation finished but failed its own accuracy certificate.
struct tolerance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eisenlab

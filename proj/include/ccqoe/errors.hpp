#pragma once

#include <stdexcept>
#include <string>

namespace ccqoe {

// Exact search / dynamic program refused to run because the instance
// exceeds the configured size cap.
struct TooLargeForExact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A (file, subset) descriptor expected to exist was not found.
struct MissingDescriptor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A user tried to decode a codeword it is not served by.
struct NotARecipient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cache was missing a term it must hold to cancel interference.
struct PlacementViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structured input (instance or experiment config file) failed validation.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ccqoe

#pragma once

#include <stdexcept>
#include <string>

namespace har {

// Invalid argument value (empty channel, non-positive rate, wrong dimension).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested sampling rate is not reachable from the source rate.
struct RateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation is not valid in the object's current state.
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Structurally broken cascade description.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset file could not be read; the message names the file.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace har

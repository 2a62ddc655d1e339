#pragma once
#include <stdexcept>
#include <string>

namespace fraisse {

// domain errors map to exit code 1 in the cli
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fraisse

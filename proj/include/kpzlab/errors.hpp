#pragma once

#include <stdexcept>
#include <string>

namespace kpzlab {

// Argument outside the mathematical domain of the operation.
struct domain_error : std::invalid_argument {
  explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A documented structural precondition was violated (shape mismatch, bad
// coupling between arguments, missing data).
struct precondition_error : std::invalid_argument {
  explicit precondition_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Request exceeds the supported enumeration / size budget of an exact routine.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine could not certify its target tolerance; `achieved`
// carries the best error estimate it can stand behind.
struct accuracy_error : std::runtime_error {
  double achieved;
  accuracy_error(const std::string& msg, double achieved_)
      : std::runtime_error(msg + " (achieved " + std::to_string(achieved_) + ")"),
        achieved(achieved_) {}
};

// An integration or iteration left its region of validity (blow-up).
struct instability_error : std::runtime_error {
  explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A linear-algebra result is dominated by conditioning, not data.
struct conditioning_error : std::runtime_error {
  explicit conditioning_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kpzlab

#pragma once

#include <stdexcept>
#include <string>

namespace hetcomp {

/// Base class for runtime faults raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration failed validation or could not be parsed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The truncated point process holds fewer admissible interferers than the
/// coordination set needs. Raise truncation_points_per_tier.
class InsufficientCandidates : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression left its real-valued domain (gamma pole or a
/// non-integer power of a negative number).
class DomainFault : public std::domain_error {
 public:
  explicit DomainFault(const std::string& reason)
      : std::domain_error(reason), reason_(reason) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

}  // namespace hetcomp

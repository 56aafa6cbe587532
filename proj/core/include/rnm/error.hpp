#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rnm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a numeric argument was violated (bad range, bad count).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is only defined for fragments where every node
/// has the same number of states.
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// A closed-form quantity is undefined for the given arguments.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured combination cap.
class ResourceError : public Error {
 public:
  ResourceError(std::uint64_t required, std::uint64_t cap)
      : Error("enumeration requires " + std::to_string(required) +
              " combinations, cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// One sample of a scanned function: (abscissa, value).
using ScanProfile = std::vector<std::pair<double, double>>;

/// A bracketing search found no sign change. Carries the pre-scan so callers
/// can report what was seen.
class RootNotFound : public Error {
 public:
  RootNotFound(const std::string& what, ScanProfile profile)
      : Error(what), profile_(std::move(profile)) {}

  const ScanProfile& profile() const noexcept { return profile_; }

 private:
  ScanProfile profile_;
};

}  // namespace rnm

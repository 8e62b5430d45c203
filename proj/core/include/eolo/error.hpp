#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eolo {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed something the operation's contract does not allow
/// (unknown record id, self pair, malformed order, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A size limit guarding an exponential or factorial computation was hit.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string what, std::size_t limit, std::size_t actual)
      : Error(std::move(what)), limit_(limit), actual_(actual) {}

  std::size_t limit() const noexcept { return limit_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t limit_;
  std::size_t actual_;
};

/// A label assignment or instance violates transitivity, or the hard
/// constraints of an instance leave no world with positive weight.
class InconsistentError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling gave up after the configured number of attempts.
class SamplingError : public Error {
 public:
  SamplingError(std::string what, std::size_t attempts, double acceptance_estimate)
      : Error(std::move(what)), attempts_(attempts), acceptance_(acceptance_estimate) {}

  std::size_t attempts() const noexcept { return attempts_; }
  /// Acceptance rate observed over this sampler's lifetime.
  double acceptance_estimate() const noexcept { return acceptance_; }

 private:
  std::size_t attempts_;
  double acceptance_;
};

struct Diagnostic {
  std::string location;  // "pairs[2].p", "line 3, column 7", ...
  std::string message;
};

/// Malformed or invalid input document. Carries every problem found, not
/// only the first one.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace eolo

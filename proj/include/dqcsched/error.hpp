#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dqc {

/// Raised when a numeric argument lies outside the domain of a model formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed or inconsistent experiment configuration. Carries the
/// offending line (0 when unknown) and the "[section] key" field, if any.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string field = {},
              std::size_t line = 0);

  /// The message without the line/field prefix.
  const std::string& message() const noexcept { return message_; }
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string message_;
  std::string field_;
  std::size_t line_;
};

}  // namespace dqc

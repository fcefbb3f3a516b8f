#include "dqcsched/error.hpp"

#include <utility>

namespace dqc {

namespace {

std::string decorate(const std::string& message, const std::string& field,
                     std::size_t line) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string field,
                         std::size_t line)
    : std::runtime_error(decorate(message, field, line)),
      message_(message),
      field_(std::move(field)),
      line_(line) {}

}  // namespace dqc

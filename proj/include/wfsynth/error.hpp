#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wfsynth {

/// Malformed input text (OBO, formula, constraint file, JSON document).
/// Line and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column = 0)
      : std::runtime_error(format(message, line, column)),
        message_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string out;
    if (line != 0) {
      out += "line " + std::to_string(line);
      if (column != 0) out += ", column " + std::to_string(column);
      out += ": ";
    }
    return out + message;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// An identifier that does not resolve, or resolves ambiguously.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structurally invalid taxonomy or domain model (cycles, duplicates, dangling references).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wfsynth

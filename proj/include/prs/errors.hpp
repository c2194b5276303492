#pragma once

#include <stdexcept>
#include <string>

namespace prs {

// Invalid configuration supplied by a caller (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed data encountered while reading a file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A token outside the closed communication vocabulary.
class UnknownTokenError : public std::runtime_error {
 public:
  explicit UnknownTokenError(const std::string& token)
      : std::runtime_error("unknown token: " + token) {}
};

}  // namespace prs

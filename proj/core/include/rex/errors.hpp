#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Entity or label name not present in the knowledge base.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Invalid option combination or out-of-range parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A configured resource bound was exceeded (explanation cap, id-space bound,
// pattern size beyond the canonicalization limit).
class LimitError : public Error {
 public:
  using Error::Error;
};

// A deadline given to an enumeration call expired before completion.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace rex

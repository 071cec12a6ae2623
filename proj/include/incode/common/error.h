#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace incode {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misconfiguration detected before any work is attempted.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A model response that does not follow the requested output format.
// The raw response is kept so callers can log or record it.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace incode

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chronosr {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. Carries the byte offset of the first offending byte.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Syntactically fine but not a valid calendar date, or bound ordering broken.
class DateError : public Error {
 public:
  explicit DateError(const std::string& what) : Error(what) {}
};

// A TIMEX3 value that cannot be interpreted at all.
class NormalizeError : public Error {
 public:
  explicit NormalizeError(const std::string& what, const std::string& raw)
      : Error(what + ": '" + raw + "'"), raw_(raw) {}
  const std::string& raw_value() const { return raw_; }

 private:
  std::string raw_;
};

// Bad run configuration (unknown key, missing path, invalid dimension...).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// File system trouble.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace chronosr

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwetk {

// Base class for all toolkit errors. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidMwe : public Error {
 public:
  using Error::Error;
};

class MissingLemma : public Error {
 public:
  using Error::Error;
};

class MissingParse : public Error {
 public:
  using Error::Error;
};

class MalformedTree : public Error {
 public:
  using Error::Error;
};

class CorpusMismatch : public Error {
 public:
  using Error::Error;
};

class StaleCandidate : public Error {
 public:
  using Error::Error;
};

}  // namespace mwetk

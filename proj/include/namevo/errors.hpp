#pragma once

#include <stdexcept>
#include <string>

namespace namevo {

// Base for all recoverable failures raised by the library. The CLI maps
// subclasses onto exit codes, so new error types should derive from one of
// the two categories below.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed list lines, schema violations, inconsistent
// record files. Exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// A single list line that cannot be parsed. Carries a 1-based line number
// once known (0 means "not attached yet").
class MalformedLineError : public InputError {
 public:
  explicit MalformedLineError(const std::string& msg, int line = 0)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line),
        raw_message_(msg) {}

  int line() const { return line_; }
  const std::string& raw_message() const { return raw_message_; }

  MalformedLineError at_line(int line) const {
    return MalformedLineError(raw_message_, line);
  }

 private:
  int line_;
  std::string raw_message_;
};

// A curated record that violates the record schema.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// Environment trouble: unreadable paths, cache misses in offline mode,
// exhausted transports. Exit code 3.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class IoError : public EnvironmentError {
 public:
  using EnvironmentError::EnvironmentError;
};

// Statistics over an empty record set.
class EmptyInputError : public InputError {
 public:
  using InputError::InputError;
};

// A rate whose base count is zero.
class UndefinedRateError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace namevo

#pragma once

#include <stdexcept>
#include <string>

namespace trackpoly {

/// The input does not describe a usable train track map (bad syntax, broken
/// structure, not efficient, inconsistent embedding, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A syntax problem in a spec or matrix file.
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& message, const std::string& source = "")
      : InputError((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + message),
        line_(line),
        detail_(message) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

/// A configured size limit was hit (for example the word-length cap of compose).
class ResourceLimit : public InputError {
 public:
  using InputError::InputError;
};

/// An identity that must hold for every valid input failed. This signals a bug
/// or an input that slipped past validation.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace trackpoly

#pragma once

#include <stdexcept>
#include <string>

namespace crnf {

// Input fails a structural or mathematical precondition (exit code 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file or serialized value (exit code 3).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An internal resolution step could not complete (exit code 4).
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crnf

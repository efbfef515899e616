#pragma once

#include <stdexcept>
#include <string>

namespace xsl {

/// Broad failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  config,   // bad configuration or arguments
  io,       // file system failures
  format,   // malformed input text
  design,   // infeasible densify / design / split request
  learner,  // learner failed or returned unusable output
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace xsl

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icedrift {

enum class ErrorCode {
  InvalidArgument,
  MalformedRecord,
  EmptyFile,
  TooShort,
  NoOverlap,
  PoleDegenerate,
  WindowTooShort,
  NonFiniteInput,
  DegenerateColumn,
  NoConvergence,
  NegativeEigenvalue,
  BadRank,
  ShapeMismatch,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line_no, const std::string& reason)
      : Error(ErrorCode::MalformedRecord,
              "malformed record at line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

}  // namespace icedrift

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace folner {

enum class ErrorCode {
  InvalidArgument = 1,
  TypeMismatch = 2,
  ResourceLimit = 3,
  Budget = 4,
  Overflow = 5,
  Parse = 6,
  Io = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string &what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

// Operands belong to different groups (or Z^d of different d).
struct TypeMismatch : Error {
  explicit TypeMismatch(const std::string &what)
      : Error(ErrorCode::TypeMismatch, what) {}
};

// A configured size cap would be exceeded. Never silently truncated.
struct ResourceLimit : Error {
  ResourceLimit(const std::string &what, std::size_t cap)
      : Error(ErrorCode::ResourceLimit, what), cap(cap) {}
  std::size_t cap;
};

struct ArithmeticOverflow : Error {
  explicit ArithmeticOverflow(const std::string &what)
      : Error(ErrorCode::Overflow, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string &what) : Error(ErrorCode::Parse, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string &what) : Error(ErrorCode::Io, what) {}
};

} // namespace folner

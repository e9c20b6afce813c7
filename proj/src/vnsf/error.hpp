#pragma once

#include <stdexcept>
#include <string>

namespace vnsf {

enum class ErrorCode {
  InvalidArgument = 1,
  GridMismatch,
  NonFinite,
  Parse,
  Io,
  Format,
  Runtime,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace vnsf

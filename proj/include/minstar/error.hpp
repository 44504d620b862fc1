#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minstar {

enum class ErrorKind {
  input,                // malformed or inconsistent geometric input
  undefined_dilation,   // dilation of a coincident pair
  empty_level_set,      // level below 1
  unsupported_dimension,
  degenerate,           // ill-conditioned conic or degenerate ellipse
  interiority,          // reference point not strictly inside
  constants_undefined,  // Gamma <= 3 or overflowing neighbor count
  solver,               // numerical solver failed to converge
  parse,
  usage,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` is stable and machine-readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace minstar

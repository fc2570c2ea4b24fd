#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace milnor {

// Malformed input or a violated precondition. Maps to CLI exit code 3.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class FailureKind {
  no_convergence,
  left_ball,
  critical_point,
  undersampled,
  open_loop,
  non_integral_winding,
  empty_fiber,
};

const char* to_string(FailureKind kind) noexcept;

// A numerical procedure did not reach its goal. Maps to CLI exit code 2.
// Failures are evidence of nothing: callers usually reseed and retry.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(FailureKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  FailureKind kind() const noexcept { return kind_; }

 private:
  FailureKind kind_;
};

}  // namespace milnor

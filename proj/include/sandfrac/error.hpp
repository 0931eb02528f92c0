#ifndef SANDFRAC_ERROR_HPP
#define SANDFRAC_ERROR_HPP

#include <iostream>
#include <stdexcept>
#include <string>

namespace sandfrac {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  input = 2,    // malformed or inconsistent input data / files
  config = 3,   // invalid parameters or options
  numeric = 4,  // degenerate numerics (zero variance, divergence, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& what)
      : Error(ErrorKind::config, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::numeric, what) {}
};

namespace log {

inline bool& quiet() {
  static bool q = false;
  return q;
}

inline void warn(const std::string& msg) {
  if (!quiet()) std::clog << "warning: " << msg << '\n';
}

inline void info(const std::string& msg) {
  if (!quiet()) std::clog << msg << '\n';
}

}  // namespace log
}  // namespace sandfrac

#endif  // SANDFRAC_ERROR_HPP

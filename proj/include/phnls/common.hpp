#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace phnls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  numerical = 3,
  io = 4,
  parse = 5,
  internal = 6,
};

/// Exception type thrown by every module. The C API maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool cond, const std::string& message) {
  if (!cond) fail(ErrorCode::invalid_argument, message);
}

/// Worker count: hardware concurrency, capped by PHNLS_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is handled by exactly one
/// worker, so results never depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

bool is_power_of_two(long long v);

}  // namespace phnls

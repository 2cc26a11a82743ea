#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bsv {

/// Raised when a truncated Fock space cannot faithfully hold a state or its
/// evolution. `measured()` carries the offending probability mass.
class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

private:
  double measured_;
};

/// Numerical failure (non-converged eigensolver, non-finite result).
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// Warning sink. Defaults to stderr; tests and the CLI may redirect it.
namespace detail {
struct WarningSink {
  std::mutex mutex;
  std::function<void(const std::string&)> handler = [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  };
};
inline WarningSink& warning_sink() {
  static WarningSink sink;
  return sink;
}
}  // namespace detail

inline void set_warning_handler(std::function<void(const std::string&)> handler) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  sink.handler = std::move(handler);
}

inline void warn(const std::string& msg) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  if (sink.handler) sink.handler(msg);
}

}  // namespace bsv

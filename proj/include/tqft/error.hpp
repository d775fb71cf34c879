#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tqft {

enum class ErrorKind {
  invalid_input,
  invalid_label,
  out_of_scope,
  singular_element,
  degenerate_space,
  numerical_failure,
  invariant_violation,
  resource_limit,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_label: return "invalid-label";
    case ErrorKind::out_of_scope: return "out-of-scope";
    case ErrorKind::singular_element: return "singular-element";
    case ErrorKind::degenerate_space: return "degenerate-space";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::resource_limit: return "resource-limit";
  }
  return "unknown";
}

/// Library-wide exception. The kind decides the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

/// Exit status convention of the command-line tool.
constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invariant_violation:
    case ErrorKind::numerical_failure:
      return 1;
    case ErrorKind::resource_limit:
      return 3;
    default:
      return 2;
  }
}

/// Resource caps and parallelism shared by the heavier computations.
struct ComputeOptions {
  unsigned threads = 1;
  std::size_t max_labels = 50'000;        // |Λ_k| for row-wise (lazy) S access
  std::size_t max_dense_labels = 3'000;   // |Λ_k| for a dense S-matrix
  std::size_t max_blocks = 10'000'000;    // |Λ_k|^{#curves}
};

}  // namespace tqft

#pragma once

#include <stdexcept>
#include <string>

namespace gibbsrec {

// Invalid symbols, inadmissible words, out-of-domain arguments.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Adjacency matrix admits no positive power within the search cap.
struct NotMixingError : std::runtime_error {
  explicit NotMixingError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration or table size beyond the configured cap.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration failed to converge; carries the last residual.
struct NumericError : std::runtime_error {
  NumericError(const std::string& what, double residual_)
      : std::runtime_error(what), residual(residual_) {}
  double residual;
};

// A certification routine could not establish a positive bound.
struct CannotCertifyError : std::runtime_error {
  explicit CannotCertifyError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate model: potential cohomologous to a constant (zero asymptotic variance).
struct DegenerateModelError : std::runtime_error {
  explicit DegenerateModelError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gibbsrec

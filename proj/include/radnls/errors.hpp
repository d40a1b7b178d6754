#ifndef RADNLS_ERRORS_HPP
#define RADNLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace radnls {

// Construction / configuration problems: bad exponents, malformed configs,
// mismatched field shapes.  The CLI maps these to exit code 2.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Precondition violations on otherwise well-formed inputs (non-finite sample
// point, zero field where a normalization is required, ...).  Exit code 2.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// A time evolution detected boundary contamination or non-finite values and
// stopped.  The CLI maps this to exit code 4.
struct EvolutionAborted : std::runtime_error {
  explicit EvolutionAborted(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace radnls

#endif  // RADNLS_ERRORS_HPP

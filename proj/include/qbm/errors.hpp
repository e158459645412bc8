#ifndef QBM_ERRORS_HPP
#define QBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbm {

// Raised when a relative-entropy or entropy-production functional is evaluated
// against a pure reference state (the functional has no finite value there).
class DivergentEntropyError : public std::domain_error {
public:
  explicit DivergentEntropyError(const std::string& what) : std::domain_error(what) {}
};

// Raised when an extremum search cannot certify its result (inconsistent
// classification, root/direct-search disagreement, flat objective).
class SolverDiagnosticError : public std::runtime_error {
public:
  explicit SolverDiagnosticError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbm

#endif

#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace halfline {

using Real = double;
using Complex = std::complex<double>;

using VectorXr = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Real kLn2 = 0.693147180559945309417232121458176568;
inline constexpr Real kInf = std::numeric_limits<Real>::infinity();
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps categories onto exit codes, so every error
// raised by the library carries one.
enum class ErrorCategory {
  Schema,          // malformed input (exit 2)
  Domain,          // argument outside the operation's domain (exit 2)
  Hypothesis,      // a theorem's hypothesis is violated (exit 3)
  NonConvergence,  // numerical method failed (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& w) : Error(ErrorCategory::Schema, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};
// k outside the half-plane where the Jost solution is defined.
struct RegionError : Error {
  explicit RegionError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};
struct MismatchError : Error {
  explicit MismatchError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};
struct AdmissibilityError : Error {
  explicit AdmissibilityError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};
struct HypothesisError : Error {
  explicit HypothesisError(const std::string& w) : Error(ErrorCategory::Hypothesis, w) {}
};
// A theorem's applicability condition fails for this input.
struct InapplicableError : Error {
  explicit InapplicableError(const std::string& w) : Error(ErrorCategory::Hypothesis, w) {}
};
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& w) : Error(ErrorCategory::NonConvergence, w) {}
};
struct NonConvergenceError : Error {
  explicit NonConvergenceError(const std::string& w)
      : Error(ErrorCategory::NonConvergence, w) {}
};
struct PoleError : Error {
  explicit PoleError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

}  // namespace halfline

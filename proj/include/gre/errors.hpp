#ifndef GRE_ERRORS_HPP
#define GRE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gre {

/// Invalid arguments or inputs that violate a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (non-convergence, bracket failure). The message carries
/// the diagnostic detail (iteration count, bracket endpoints, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectral-domain violation, e.g. a negative eigenvalue among the kept
/// ones when a square root is required. `index` is the 0-based position of
/// the offending eigenvalue in non-increasing algebraic order.
class SpectralError : public NumericalError {
 public:
  SpectralError(const std::string& msg, int index)
      : NumericalError(msg), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

}  // namespace gre

#endif

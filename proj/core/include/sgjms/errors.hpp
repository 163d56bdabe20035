#ifndef SGJMS_ERRORS_HPP_
#define SGJMS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sgjms {

/// Input outside the mathematical domain of an operation (n <= 2m, p < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shapes or parameters of two objects do not match (truncation, dimension).
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical kernel failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested accuracy could not be reached; carries the achieved estimate.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Two routes to the same quantity disagree beyond tolerance.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sgjms

#endif  // SGJMS_ERRORS_HPP_

#ifndef RISLAB_TYPES_HPP
#define RISLAB_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rislab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind { Validation, Numerical, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A parameter is outside its documented domain.
class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// The configuration is well-formed but leaves an expression undefined
/// (zero precoder normalizer, K >= M, ...).
class DegenerateConfig : public Error {
 public:
  explicit DegenerateConfig(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// A Hermitian system is numerically singular.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition)
      : Error(ErrorKind::Numerical, what + " (condition number " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// The eavesdropper sees no interference, so its capacity bound diverges.
class InfiniteCapacity : public Error {
 public:
  explicit InfiniteCapacity(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// A closed-form bound is evaluated outside the region where it is defined
/// (inverse-Wishart mean does not exist, negative denominator).
class BoundInvalid : public Error {
 public:
  explicit BoundInvalid(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class NoRealRoot : public Error {
 public:
  explicit NoRealRoot(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidParameter(message);
}

inline double real_trace(const CMatrix& a) { return a.trace().real(); }

/// tr(A B) without forming the product.
inline double real_trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.transpose().array() * b.array()).sum().real();
}

}  // namespace rislab

#endif  // RISLAB_TYPES_HPP

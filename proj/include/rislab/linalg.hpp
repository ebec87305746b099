#ifndef RISLAB_LINALG_HPP
#define RISLAB_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "types.hpp"

namespace rislab {

/// Symmetrize in place: A <- (A + A^H)/2.
inline void make_hermitian(CMatrix& a) { a = (0.5 * (a + a.adjoint())).eval(); }

/// PSD square root via eigendecomposition. Eigenvalues below
/// rel_tol * lambda_max (including negative round-off) are set to zero.
inline CMatrix hermitian_sqrt(const CMatrix& a, double rel_tol = 1e-10) {
  if (a.rows() == 0) return a;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  RVector w = es.eigenvalues();
  const double wmax = std::max(w.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = (w(i) > rel_tol * wmax) ? std::sqrt(w(i)) : 0.0;
  CMatrix s = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  make_hermitian(s);
  return s;
}

/// Max-abs asymmetry and the most negative eigenvalue relative to the norm.
struct HermitianCheck {
  double asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

inline HermitianCheck check_hermitian(const CMatrix& a) {
  HermitianCheck out;
  out.asymmetry = (a - a.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.max_eigenvalue = es.eigenvalues().maxCoeff();
  return out;
}

/// Factorization of a Hermitian positive definite matrix with its spectral
/// condition number recorded.
class HermitianFactor {
 public:
  HermitianFactor() = default;

  /// Throws IllConditioned when the matrix is not numerically positive definite.
  explicit HermitianFactor(const CMatrix& a, const std::string& label = "matrix") {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    condition_ = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(lo > 1e-15 * std::max(hi, 0.0)) || !(hi > 0.0))
      throw IllConditioned(label + " is singular or not positive definite", condition_);
    llt_.compute(a);
    if (llt_.info() != Eigen::Success) throw IllConditioned(label + " Cholesky factorization failed", condition_);
  }

  double condition() const { return condition_; }

  template <typename Rhs>
  auto solve(const Rhs& b) const {
    return llt_.solve(b);
  }

 private:
  Eigen::LLT<CMatrix> llt_;
  double condition_ = 0.0;
};

/// Orthonormal basis of the orthogonal complement of span(a).
struct NullSpace {
  CMatrix basis;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

inline NullSpace null_space(const CMatrix& a) {
  const Eigen::Index m = a.rows();
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  NullSpace out;
  out.rank = qr.rank();
  out.rank_deficient = out.rank < std::min(a.rows(), a.cols());
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  out.basis = q.rightCols(m - out.rank);
  return out;
}

}  // namespace rislab

#endif  // RISLAB_LINALG_HPP

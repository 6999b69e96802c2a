#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpm {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Error hierarchy. Each named failure mode from the operation contracts gets
// its own type so callers (and the CLI) can map them to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error { using Error::Error; };
struct NotCP : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct NotUnital : Error { using Error::Error; };
struct NotSelfAdjoint : Error { using Error::Error; };
struct NotRankOne : Error { using Error::Error; };
struct NotDensity : Error { using Error::Error; };
struct SingularResolvent : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct Diverges : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct ResidualNotCP : Error { using Error::Error; };
struct QuadratureMismatch : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct ContractionViolated : Error { using Error::Error; };
struct LambdaSumNonzero : Error { using Error::Error; };
struct DiagonalsNotQPure : Error { using Error::Error; };
struct SupportViolation : Error { using Error::Error; };

// Row-major vec convention: the basis element e_{jk} of an r x c matrix
// space has vec index j*c + k.  Every superoperator matrix, every Choi
// matrix, and all JSON data use this single convention.
inline CVec vec_rm(const Mat& A) {
  CVec v(A.rows() * A.cols());
  for (Eigen::Index j = 0; j < A.rows(); ++j)
    for (Eigen::Index k = 0; k < A.cols(); ++k) v(j * A.cols() + k) = A(j, k);
  return v;
}

inline Mat unvec_rm(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  Mat A(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j)
    for (Eigen::Index k = 0; k < cols; ++k) A(j, k) = v(j * cols + k);
  return A;
}

// Kronecker product under the row-major convention:
// vec_rm(S A T) = (S (x) T^T) vec_rm(A).
inline Mat kron(const Mat& X, const Mat& Y) {
  Mat K(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return K;
}

inline double spectral_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  return A.jacobiSvd().singularValues()(0);
}

inline bool is_hermitian(const Mat& A, double tol = 1e-12) {
  double scale = std::max(1.0, A.norm());
  return (A - A.adjoint()).norm() <= tol * scale;
}

}  // namespace qpm

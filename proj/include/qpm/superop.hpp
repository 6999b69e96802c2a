#pragma once

#include <optional>
#include <vector>

#include "qpm/types.hpp"

namespace qpm {

// Dense linear map between complex matrix spaces M_{r_in x c_in} -> M_{r_out x c_out},
// stored as its (r_out*c_out) x (r_in*c_in) matrix under the row-major vec
// convention.  Square operator maps (r_in == c_in, r_out == c_out) cover most
// of the library; the rectangular case carries corner maps between blocks.
class SuperOp {
 public:
  SuperOp(Eigen::Index rows_in, Eigen::Index cols_in, Eigen::Index rows_out,
          Eigen::Index cols_out, Mat matrix);

  // Square n -> m map.
  SuperOp(Eigen::Index dim_in, Eigen::Index dim_out, Mat matrix)
      : SuperOp(dim_in, dim_in, dim_out, dim_out, std::move(matrix)) {}

  static SuperOp identity(Eigen::Index n);
  static SuperOp identity_rect(Eigen::Index rows, Eigen::Index cols);
  static SuperOp zero(Eigen::Index dim_in, Eigen::Index dim_out);

  Eigen::Index rows_in() const { return rows_in_; }
  Eigen::Index cols_in() const { return cols_in_; }
  Eigen::Index rows_out() const { return rows_out_; }
  Eigen::Index cols_out() const { return cols_out_; }
  bool square_spaces() const { return rows_in_ == cols_in_ && rows_out_ == cols_out_; }
  bool endomorphism() const {
    return rows_in_ == rows_out_ && cols_in_ == cols_out_;
  }
  // Square-map accessors (operator dimension, not vec dimension).
  Eigen::Index dim_in() const { return rows_in_; }
  Eigen::Index dim_out() const { return rows_out_; }

  const Mat& matrix() const { return m_; }

  Mat apply(const Mat& A) const;

  SuperOp operator+(const SuperOp& o) const;
  SuperOp operator-(const SuperOp& o) const;
  SuperOp operator*(Complex c) const;
  // Composition: (this o other)(A) = this(other(A)).
  SuperOp compose(const SuperOp& other) const;
  // Adjoint in the trace pairing tr(B^dag phi(A)).
  SuperOp trace_adjoint() const;
  // The conjugate map phi^*(A) = phi(A^dag)^dag (the "star" of a corner).
  SuperOp star() const;

  // Spectral norm of the superoperator matrix; agrees with the operator norm
  // on the Hilbert-Schmidt unit ball, not the CB norm.
  double mnorm() const { return spectral_norm(m_); }

  bool is_unital(double tol = 1e-10) const;
  // phi(A^dag) = phi(A)^dag on a spanning set of matrix units.
  bool is_self_adjoint(double tol = 1e-10) const;
  // Numerical rank of the superoperator matrix (threshold relative to sigma_max).
  Eigen::Index numerical_rank(double rel_tol = 1e-9) const;

 private:
  Eigen::Index rows_in_, cols_in_, rows_out_, cols_out_;
  Mat m_;
};

inline SuperOp operator*(Complex c, const SuperOp& s) { return s * c; }

struct KrausSet {
  std::vector<Mat> ops;  // nonempty, all m x n
};

struct ChoiMatrix {
  Eigen::Index dim_in;   // n
  Eigen::Index dim_out;  // m
  Mat matrix;            // nm x nm, C = sum_{jk} e_{jk} (x) phi(e_{jk})
};

struct CpVerdict {
  bool verdict;
  double min_eig;
};

SuperOp from_kraus(const KrausSet& k);
ChoiMatrix choi(const SuperOp& phi);
SuperOp from_choi(const ChoiMatrix& C);
KrausSet kraus_from_choi(const ChoiMatrix& C, double tol = 1e-10);

// CP test via the minimum Choi eigenvalue.  The tolerance is absolute,
// scaled by ||C|| when ||C|| > 1.  A Choi matrix that is not Hermitian
// (map not self-adjoint) fails outright.
CpVerdict is_completely_positive(const SuperOp& phi, double tol = 1e-10);

// phi_U(A) = U^dag phi(U A U^dag) U.
SuperOp conjugate_by_unitary(const SuperOp& phi, const Mat& U);

// Entrywise multiplication by a fixed matrix of multipliers.
SuperOp schur_map(const Mat& multipliers);
// If phi is a Schur map (diagonal superoperator matrix), return its multipliers.
std::optional<Mat> schur_multipliers(const SuperOp& phi, double tol = 1e-12);

// A |-> tr(DA) I_n.
SuperOp state_map(const Mat& D);

// The 2x2-block map [[phi, gamma], [gamma^*, psi]] on M_{n+k}, where phi acts
// on the n x n block, psi on the k x k block and gamma on the n x k block.
SuperOp block_corner_map(const SuperOp& phi, const SuperOp& gamma,
                         const SuperOp& psi);

}  // namespace qpm

#include "qpm/superop.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qpm {

SuperOp::SuperOp(Eigen::Index rows_in, Eigen::Index cols_in,
                 Eigen::Index rows_out, Eigen::Index cols_out, Mat matrix)
    : rows_in_(rows_in),
      cols_in_(cols_in),
      rows_out_(rows_out),
      cols_out_(cols_out),
      m_(std::move(matrix)) {
  if (rows_in_ <= 0 || cols_in_ <= 0 || rows_out_ <= 0 || cols_out_ <= 0)
    throw DimensionMismatch("SuperOp: dimensions must be positive");
  if (m_.rows() != rows_out_ * cols_out_ || m_.cols() != rows_in_ * cols_in_)
    throw DimensionMismatch("SuperOp: matrix shape does not match dimensions");
}

SuperOp SuperOp::identity(Eigen::Index n) {
  return SuperOp(n, n, Mat::Identity(n * n, n * n));
}

SuperOp SuperOp::identity_rect(Eigen::Index rows, Eigen::Index cols) {
  return SuperOp(rows, cols, rows, cols,
                 Mat::Identity(rows * cols, rows * cols));
}

SuperOp SuperOp::zero(Eigen::Index dim_in, Eigen::Index dim_out) {
  return SuperOp(dim_in, dim_out,
                 Mat::Zero(dim_out * dim_out, dim_in * dim_in));
}

Mat SuperOp::apply(const Mat& A) const {
  if (A.rows() != rows_in_ || A.cols() != cols_in_)
    throw DimensionMismatch("SuperOp::apply: operand shape mismatch");
  return unvec_rm(m_ * vec_rm(A), rows_out_, cols_out_);
}

SuperOp SuperOp::operator+(const SuperOp& o) const {
  if (rows_in_ != o.rows_in_ || cols_in_ != o.cols_in_ ||
      rows_out_ != o.rows_out_ || cols_out_ != o.cols_out_)
    throw DimensionMismatch("SuperOp::operator+: shape mismatch");
  return SuperOp(rows_in_, cols_in_, rows_out_, cols_out_, m_ + o.m_);
}

SuperOp SuperOp::operator-(const SuperOp& o) const {
  return *this + (o * Complex(-1.0, 0.0));
}

SuperOp SuperOp::operator*(Complex c) const {
  return SuperOp(rows_in_, cols_in_, rows_out_, cols_out_, c * m_);
}

SuperOp SuperOp::compose(const SuperOp& other) const {
  if (rows_in_ != other.rows_out_ || cols_in_ != other.cols_out_)
    throw DimensionMismatch("SuperOp::compose: shape mismatch");
  return SuperOp(other.rows_in_, other.cols_in_, rows_out_, cols_out_,
                 m_ * other.m_);
}

SuperOp SuperOp::trace_adjoint() const {
  return SuperOp(rows_out_, cols_out_, rows_in_, cols_in_, m_.adjoint());
}

SuperOp SuperOp::star() const {
  // gamma^*(C) = gamma(C^dag)^dag, acting on the transposed matrix space.
  const Eigen::Index ri = cols_in_, ci = rows_in_;
  const Eigen::Index ro = cols_out_, co = rows_out_;
  Mat m(ro * co, ri * ci);
  for (Eigen::Index j = 0; j < ri; ++j)
    for (Eigen::Index k = 0; k < ci; ++k) {
      Mat E = Mat::Zero(ri, ci);
      E(j, k) = 1.0;
      Mat out = unvec_rm(m_ * vec_rm(Mat(E.adjoint())), rows_out_, cols_out_)
                    .adjoint()
                    .eval();
      m.col(j * ci + k) = vec_rm(out);
    }
  return SuperOp(ri, ci, ro, co, m);
}

bool SuperOp::is_unital(double tol) const {
  if (!square_spaces()) return false;
  Mat out = apply(Mat::Identity(rows_in_, cols_in_));
  return (out - Mat::Identity(rows_out_, cols_out_)).norm() <= tol;
}

bool SuperOp::is_self_adjoint(double tol) const {
  if (!square_spaces()) return false;
  const Eigen::Index n = rows_in_;
  double scale = std::max(1.0, mnorm());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j; k < n; ++k) {
      Mat E = Mat::Zero(n, n);
      E(j, k) = 1.0;
      Mat a = apply(E);
      Mat b = apply(Mat(E.adjoint()));
      if ((a.adjoint() - b).norm() > tol * scale) return false;
    }
  return true;
}

Eigen::Index SuperOp::numerical_rank(double rel_tol) const {
  auto sv = m_.jacobiSvd().singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

SuperOp from_kraus(const KrausSet& k) {
  if (k.ops.empty()) throw DimensionMismatch("from_kraus: empty Kraus set");
  const Eigen::Index m = k.ops.front().rows();
  const Eigen::Index n = k.ops.front().cols();
  Mat M = Mat::Zero(m * m, n * n);
  for (const Mat& S : k.ops) {
    if (S.rows() != m || S.cols() != n)
      throw DimensionMismatch("from_kraus: Kraus operators differ in shape");
    M += kron(S, S.conjugate());
  }
  return SuperOp(n, m, M);
}

ChoiMatrix choi(const SuperOp& phi) {
  if (!phi.square_spaces())
    throw DimensionMismatch("choi: defined for operator maps only");
  const Eigen::Index n = phi.dim_in(), m = phi.dim_out();
  Mat C(n * m, n * m);
  const Mat& M = phi.matrix();
  // C_{(j,a),(k,b)} = phi(e_{jk})_{ab}
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
          C(j * m + a, k * m + b) = M(a * m + b, j * n + k);
  return ChoiMatrix{n, m, std::move(C)};
}

SuperOp from_choi(const ChoiMatrix& C) {
  const Eigen::Index n = C.dim_in, m = C.dim_out;
  if (C.matrix.rows() != n * m || C.matrix.cols() != n * m)
    throw DimensionMismatch("from_choi: matrix shape mismatch");
  Mat M(m * m, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
          M(a * m + b, j * n + k) = C.matrix(j * m + a, k * m + b);
  return SuperOp(n, m, std::move(M));
}

KrausSet kraus_from_choi(const ChoiMatrix& C, double tol) {
  const Eigen::Index n = C.dim_in, m = C.dim_out;
  Mat H = 0.5 * (C.matrix + C.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const auto& evals = es.eigenvalues();
  double scale = std::max(1.0, std::max(std::abs(evals(0)),
                                        std::abs(evals(evals.size() - 1))));
  if (evals(0) < -tol * scale)
    throw NotCP("kraus_from_choi: Choi matrix has eigenvalue " +
                std::to_string(evals(0)));
  KrausSet out;
  for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {
    if (evals(i) <= tol * scale) continue;
    CVec w = std::sqrt(evals(i)) * es.eigenvectors().col(i);
    Mat S(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index a = 0; a < m; ++a) S(a, j) = w(j * m + a);
    out.ops.push_back(std::move(S));
  }
  if (out.ops.empty()) out.ops.push_back(Mat::Zero(m, n));
  return out;
}

CpVerdict is_completely_positive(const SuperOp& phi, double tol) {
  ChoiMatrix C = choi(phi);
  Mat H = 0.5 * (C.matrix + C.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  double min_eig = es.eigenvalues()(0);
  double scale = std::max(1.0, spectral_norm(C.matrix));
  double herm_defect = (C.matrix - C.matrix.adjoint()).norm();
  bool verdict = (herm_defect <= 1e-10 * scale) && (min_eig >= -tol * scale);
  return CpVerdict{verdict, min_eig};
}

SuperOp conjugate_by_unitary(const SuperOp& phi, const Mat& U) {
  if (!phi.square_spaces() || U.rows() != U.cols() ||
      U.rows() != phi.dim_in() || phi.dim_in() != phi.dim_out())
    throw DimensionMismatch("conjugate_by_unitary: shape mismatch");
  const Eigen::Index n = U.rows();
  if ((U.adjoint() * U - Mat::Identity(n, n)).norm() > 1e-10)
    throw NotUnitary("conjugate_by_unitary: U is not unitary");
  // A |-> UAU^dag has matrix U (x) conj(U); the outer U^dag . U likewise.
  Mat inner = kron(U, U.conjugate());
  Mat outer = kron(U.adjoint(), U.transpose());
  return SuperOp(n, n, outer * phi.matrix() * inner);
}

SuperOp schur_map(const Mat& multipliers) {
  if (multipliers.rows() != multipliers.cols())
    throw DimensionMismatch("schur_map: multiplier matrix must be square");
  const Eigen::Index n = multipliers.rows();
  Mat M = Mat::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      M(j * n + k, j * n + k) = multipliers(j, k);
  return SuperOp(n, n, std::move(M));
}

std::optional<Mat> schur_multipliers(const SuperOp& phi, double tol) {
  if (!phi.square_spaces() || phi.dim_in() != phi.dim_out())
    return std::nullopt;
  const Eigen::Index n = phi.dim_in();
  const Mat& M = phi.matrix();
  double off = 0.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (i != j) off += std::norm(M(i, j));
  if (std::sqrt(off) > tol * std::max(1.0, M.norm())) return std::nullopt;
  Mat mult(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) mult(j, k) = M(j * n + k, j * n + k);
  return mult;
}

SuperOp state_map(const Mat& D) {
  if (D.rows() != D.cols())
    throw DimensionMismatch("state_map: D must be square");
  const Eigen::Index n = D.rows();
  Mat M = Mat::Zero(n * n, n * n);
  // tr(D e_{jk}) = D_{kj}
  CVec id = vec_rm(Mat::Identity(n, n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) M.col(j * n + k) = D(k, j) * id;
  return SuperOp(n, n, std::move(M));
}

SuperOp block_corner_map(const SuperOp& phi, const SuperOp& gamma,
                         const SuperOp& psi) {
  if (!phi.square_spaces() || !psi.square_spaces())
    throw DimensionMismatch("block_corner_map: diagonal maps must be square");
  const Eigen::Index n = phi.dim_in(), k = psi.dim_in();
  if (phi.dim_out() != n || psi.dim_out() != k)
    throw DimensionMismatch("block_corner_map: diagonal maps must be endomorphisms");
  if (gamma.rows_in() != n || gamma.cols_in() != k || gamma.rows_out() != n ||
      gamma.cols_out() != k)
    throw DimensionMismatch("block_corner_map: corner must act on n x k blocks");
  const Eigen::Index N = n + k;
  SuperOp gs = gamma.star();
  Mat M(N * N, N * N);
  for (Eigen::Index p = 0; p < N; ++p)
    for (Eigen::Index q = 0; q < N; ++q) {
      Mat out = Mat::Zero(N, N);
      if (p < n && q < n) {
        Mat E = Mat::Zero(n, n);
        E(p, q) = 1.0;
        out.block(0, 0, n, n) = phi.apply(E);
      } else if (p < n && q >= n) {
        Mat E = Mat::Zero(n, k);
        E(p, q - n) = 1.0;
        out.block(0, n, n, k) = gamma.apply(E);
      } else if (p >= n && q < n) {
        Mat E = Mat::Zero(k, n);
        E(p - n, q) = 1.0;
        out.block(n, 0, k, n) = gs.apply(E);
      } else {
        Mat E = Mat::Zero(k, k);
        E(p - n, q - n) = 1.0;
        out.block(n, n, k, k) = psi.apply(E);
      }
      M.col(p * N + q) = vec_rm(out);
    }
  return SuperOp(N, N, std::move(M));
}

}  // namespace qpm

#include "qpm/qpure.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <numeric>

namespace qpm {

namespace {

double cond_number(const Mat& M) {
  auto sv = M.jacobiSvd().singularValues();
  double smin = sv(sv.size() - 1);
  return smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

void fix_column_phases(Mat& U) {
  for (Eigen::Index j = 0; j < U.cols(); ++j) {
    Eigen::Index bi = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i)
      if (std::abs(U(i, j)) > best) {
        best = std::abs(U(i, j));
        bi = i;
      }
    if (best > 0) U.col(j) *= std::conj(U(bi, j)) / best;
  }
}

}  // namespace

QPureVerdict is_rank_one_q_pure(const SuperOp& phi, double tol) {
  if (!phi.endomorphism() || !phi.square_spaces())
    throw DimensionMismatch("is_rank_one_q_pure: map must act on M_n");
  if (phi.numerical_rank() != 1)
    throw NotRankOne("is_rank_one_q_pure: superoperator rank is not 1");
  if (!phi.is_unital()) throw NotUnital("is_rank_one_q_pure: phi(I) != I");
  const Eigen::Index n = phi.dim_in();

  // phi(e_jk) = tr(D e_jk) I = D(k,j) I.
  Mat D(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      Mat E = Mat::Zero(n, n);
      E(j, k) = 1.0;
      D(k, j) = phi.apply(E).diagonal().mean();
    }
  D = 0.5 * (D + D.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es(D);
  QPureVerdict v;
  if (es.eigenvalues()(0) > tol) {
    v.tag = QPureVerdict::Tag::RankOneFaithful;
    v.D = D;
    return v;
  }

  // psi(A) = tr(DA) P, P the range projection of D: a strict q-subordinate.
  Mat P = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > tol)
      P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  Mat W(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      W.col(j * n + k) = D(k, j) * vec_rm(P);
  v.tag = QPureVerdict::Tag::NotQPure;
  v.D = D;
  v.witness = SuperOp(n, n, std::move(W));
  return v;
}

SuperOp make_invertible_qpure(const std::vector<double>& lambdas, const Mat* U) {
  const Eigen::Index n = Eigen::Index(lambdas.size());
  double sum = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  if (std::abs(sum) > 1e-12)
    throw LambdaSumNonzero("make_invertible_qpure: sum of lambdas is " +
                           std::to_string(sum));
  Mat mult(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      mult(j, k) = 1.0 / Complex(1.0, lambdas[j] - lambdas[k]);
  SuperOp phi = schur_map(mult);
  if (U) phi = conjugate_by_unitary(phi, *U);
  return phi;
}

QPureVerdict is_invertible_unital_q_pure(const SuperOp& phi, double tol) {
  if (!phi.endomorphism() || !phi.square_spaces())
    throw DimensionMismatch("is_invertible_unital_q_pure: map must act on M_n");
  if (!phi.is_unital())
    throw NotUnital("is_invertible_unital_q_pure: phi(I) != I");
  if (cond_number(phi.matrix()) >= 1e12)
    throw Singular("is_invertible_unital_q_pure: map not invertible");
  const Eigen::Index n = phi.dim_in();

  SuperOp psi(n, n, Mat(phi.matrix().inverse()));
  CnegForm form = extract_canonical_form(psi);

  bool s_ok = std::abs(form.s - 1.0) <= tol;
  bool terms_ok = true;
  for (const auto& [lambda, S] : form.terms)
    if (lambda > tol) terms_ok = false;
  bool y_ok = (form.Y + form.Y.adjoint()).norm() <= tol;

  QPureVerdict v;
  if (s_ok && terms_ok && y_ok) {
    Mat YH = Complex(0, -1) * 0.5 * (form.Y - form.Y.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(YH);
    Mat U = es.eigenvectors();
    fix_column_phases(U);
    v.tag = QPureVerdict::Tag::InvertibleSchur;
    // conjugate_by_unitary(schur, V) produces Y = i V^dag Lambda V, so the
    // unitary that regenerates phi is the adjoint of the eigenvector matrix.
    v.U = U.adjoint();
    v.lambdas.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return v;
  }

  // phi' = (s A + YA + AY^dag)^{-1} is a q-positive map strictly between
  // phi and 0 but outside the resolvent family.
  CnegForm head{form.s, form.Y, {}};
  SuperOp psi_head = reconstruct(head);
  v.tag = QPureVerdict::Tag::NotQPure;
  if (cond_number(psi_head.matrix()) < 1e12)
    v.witness = SuperOp(n, n, Mat(psi_head.matrix().inverse()));
  else
    v.reason = "witness map singular";
  return v;
}

QPureVerdict classify_q_pure(const SuperOp& phi) {
  if (!phi.endomorphism() || !phi.square_spaces())
    throw DimensionMismatch("classify_q_pure: map must act on M_n");
  if (!phi.is_unital()) throw NotUnital("classify_q_pure: phi(I) != I");
  if (!is_q_positive(phi).verdict) {
    QPureVerdict v;
    v.tag = QPureVerdict::Tag::NotQPure;
    v.reason = "not q-positive on the grid";
    return v;
  }
  Eigen::Index rank = phi.numerical_rank();
  const Eigen::Index full = phi.matrix().rows();
  if (rank == 1) return is_rank_one_q_pure(phi);
  if (rank == full && cond_number(phi.matrix()) < 1e12)
    return is_invertible_unital_q_pure(phi);
  QPureVerdict v;
  v.tag = QPureVerdict::Tag::Indeterminate;
  v.reason = "intermediate rank - outside the classified families";
  return v;
}

}  // namespace qpm

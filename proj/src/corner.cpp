#include "qpm/corner.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qpm/generators.hpp"
#include "qpm/qpure.hpp"

namespace qpm {

SuperOp corner_from_contraction(const CornerSpec& spec) {
  if (spec.left_kraus.ops.empty() || spec.right_kraus.ops.empty())
    throw DimensionMismatch("corner_from_contraction: empty Kraus set");
  const Eigen::Index n = spec.left_kraus.ops[0].rows();
  const Eigen::Index k = spec.right_kraus.ops[0].rows();
  if (spec.C.rows() != Eigen::Index(spec.left_kraus.ops.size()) ||
      spec.C.cols() != Eigen::Index(spec.right_kraus.ops.size()))
    throw DimensionMismatch("corner_from_contraction: C shape mismatch");
  if (spectral_norm(spec.C) > 1.0 + 1e-10)
    throw ContractionViolated("corner_from_contraction: ||C|| = " +
                              std::to_string(spectral_norm(spec.C)));
  Mat M = Mat::Zero(n * k, n * k);
  for (Eigen::Index i = 0; i < spec.C.rows(); ++i)
    for (Eigen::Index j = 0; j < spec.C.cols(); ++j)
      M += spec.C(i, j) *
           kron(spec.left_kraus.ops[i], spec.right_kraus.ops[j].conjugate());
  return SuperOp(n, k, n, k, std::move(M));
}

bool verify_corner(const SuperOp& phi, const SuperOp& gamma, const SuperOp& psi,
                   double tol) {
  return is_completely_positive(block_corner_map(phi, gamma, psi), tol).verdict;
}

PositivityCert is_q_corner(const SuperOp& phi, const SuperOp& gamma,
                           const SuperOp& psi, const std::vector<double>& grid,
                           double tol) {
  return is_q_positive(block_corner_map(phi, gamma, psi), grid, tol);
}

SuperOp unitary_conjugation_corner(const SuperOp& phi, const Mat& U) {
  if (!phi.endomorphism() || !phi.square_spaces())
    throw DimensionMismatch("unitary_conjugation_corner: phi must act on M_n");
  const Eigen::Index n = phi.dim_in();
  if (U.rows() != n || U.cols() != n ||
      (U.adjoint() * U - Mat::Identity(n, n)).norm() > 1e-10)
    throw NotUnitary("unitary_conjugation_corner: U is not unitary");
  Mat M(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      Mat E = Mat::Zero(n, n);
      E(j, k) = 1.0;
      M.col(j * n + k) = vec_rm(Mat(phi.apply(Mat(E * U.adjoint())) * U));
    }
  return SuperOp(n, n, std::move(M));
}

SuperOp flow_corner_to_identity(const std::vector<double>& lambdas) {
  const Eigen::Index n = Eigen::Index(lambdas.size());
  double sum = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  if (std::abs(sum) > 1e-12)
    throw LambdaSumNonzero("flow_corner_to_identity: sum of lambdas is " +
                           std::to_string(sum));
  Mat M = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) M(j, j) = 1.0 / Complex(1.0, lambdas[j]);
  return SuperOp(n, 1, n, 1, std::move(M));
}

std::vector<double> default_ts_grid() { return {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}; }

HyperMaxVerdict is_hypermaximal_over_resolvent_family(
    const SuperOp& phi, const SuperOp& gamma, const SuperOp& psi,
    const std::vector<double>& ts_grid, double tol) {
  auto c1 = classify_q_pure(phi);
  auto c2 = classify_q_pure(psi);
  auto pure = [](const QPureVerdict& v) {
    return v.tag == QPureVerdict::Tag::RankOneFaithful ||
           v.tag == QPureVerdict::Tag::InvertibleSchur;
  };
  if (!pure(c1) || !pure(c2))
    throw DiagonalsNotQPure(
        "is_hypermaximal_over_resolvent_family: a diagonal map is not q-pure");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pts = ts_grid;
  pts.push_back(inf);

  auto at = [&](const SuperOp& m, double t) {
    if (std::isinf(t)) return SuperOp::zero(m.dim_in(), m.dim_out());
    return resolvent_subordinate(m, t);
  };

  HyperMaxVerdict verdict;
  for (double t : pts)
    for (double s : pts) {
      if (t == 0.0 && s == 0.0) continue;
      try {
        SuperOp blk = block_corner_map(at(phi, t), gamma, at(psi, s));
        if (is_q_positive(blk, default_t_grid(), tol).verdict) {
          verdict.hypermaximal = false;
          verdict.violating_pair = {t, s};
          return verdict;
        }
      } catch (const SingularResolvent&) {
        // a singular diagonal resolvent cannot produce a subordinate
      }
    }
  verdict.hypermaximal = true;
  return verdict;
}

MaxCornerNorm max_corner_norm_rank_one(const Mat& D1, const Mat& D2,
                                       int restarts, std::uint64_t seed) {
  auto check_density = [](const Mat& D, const char* name) {
    if (D.rows() != D.cols() || !is_hermitian(D, 1e-10))
      throw NotDensity(std::string(name) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(D);
    if (es.eigenvalues()(0) < -1e-10 ||
        std::abs(D.trace().real() - 1.0) > 1e-10)
      throw NotDensity(std::string(name) + " is not a density matrix");
    return RVec(es.eigenvalues());
  };
  RVec l1 = check_density(D1, "D1");
  RVec l2 = check_density(D2, "D2");
  const Eigen::Index n = D1.rows(), k = D2.rows();

  Mat Dlam = Mat::Zero(n, n), Dmu = Mat::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i)
    Dlam(i, i) = std::sqrt(std::max(0.0, l1(i)));
  for (Eigen::Index i = 0; i < k; ++i)
    Dmu(i, i) = std::sqrt(std::max(0.0, l2(i)));

  MaxCornerNorm result;
  result.faithful = l1(0) > 1e-10 && l2(0) > 1e-10;

  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    // A: k x n contraction, C: n x k contraction; objective tr(C Dmu A Dlam).
    Mat A = r == 0 ? Mat(Mat::Identity(k, n))
                   : Mat(random_matrix(k, n, rng));
    if (spectral_norm(A) > 0) A /= spectral_norm(A);
    double value = 0.0, prev = -1.0;
    Mat C;
    for (int it = 0; it < 500; ++it) {
      // Best C for fixed A: polar dual of B = Dmu A Dlam; value = ||B||_tr.
      Mat B = Dmu * A * Dlam;
      Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
      C = svd.matrixV() * svd.matrixU().adjoint();
      value = svd.singularValues().sum();
      // Best A for fixed C: polar dual of G = Dlam C Dmu.
      Mat G = Dlam * C * Dmu;
      Eigen::JacobiSVD<Mat> svd2(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
      A = svd2.matrixV() * svd2.matrixU().adjoint();
      if (value - prev < 1e-10) break;
      prev = value;
    }
    if (value > result.value) {
      result.value = value;
      result.C = C;
      result.A = A;
    }
  }
  return result;
}

}  // namespace qpm

#include "qpm/cneg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

namespace qpm {

namespace {

// Under the row-major vec convention, A |-> Y A is kron(Y, I) and
// A |-> A Y^dag is kron(I, conj(Y)).
Mat left_mult(const Mat& Y) {
  return kron(Y, Mat::Identity(Y.rows(), Y.cols()));
}
Mat right_mult_adj(const Mat& Y) {
  return kron(Mat::Identity(Y.rows(), Y.cols()), Y.conjugate());
}

void fix_phase(Mat& S) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    for (Eigen::Index j = 0; j < S.cols(); ++j)
      if (std::abs(S(i, j)) > best) {
        best = std::abs(S(i, j));
        bi = i;
        bj = j;
      }
  if (best > 0) S *= std::conj(S(bi, bj)) / best;
}

double cond_number(const Mat& M) {
  auto sv = M.jacobiSvd().singularValues();
  double smin = sv(sv.size() - 1);
  return smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

SuperOp reconstruct(const CnegForm& form) {
  const Eigen::Index n = form.dim();
  Mat M = form.s * Mat::Identity(n * n, n * n);
  M += left_mult(form.Y) + right_mult_adj(form.Y);
  for (const auto& [lambda, S] : form.terms) M -= lambda * kron(S, S.conjugate());
  return SuperOp(n, n, M);
}

std::vector<double> default_s_grid() { return {0.01, 0.1, 1.0, 10.0, 100.0}; }

CnegCert is_conditionally_negative(const SuperOp& psi,
                                   const std::vector<double>& s_grid,
                                   double tol) {
  if (!psi.endomorphism() || !psi.square_spaces())
    throw DimensionMismatch("is_conditionally_negative: map must act on M_n");
  if (!psi.is_self_adjoint())
    throw NotSelfAdjoint("is_conditionally_negative: psi(A^dag) != psi(A)^dag");
  CnegCert cert;
  cert.s_grid = s_grid;
  cert.verdict = true;
  for (double s : s_grid) {
    SuperOp E = superop_exp(psi, Complex(-s, 0.0));
    auto v = is_completely_positive(E, tol);
    cert.min_eigs.push_back(v.min_eig);
    if (!v.verdict) cert.verdict = false;
  }
  return cert;
}

CnegForm extract_canonical_form(const SuperOp& psi, double tol) {
  if (!psi.endomorphism() || !psi.square_spaces())
    throw DimensionMismatch("extract_canonical_form: map must act on M_n");
  if (!psi.is_self_adjoint())
    throw NotSelfAdjoint("extract_canonical_form: psi(A^dag) != psi(A)^dag");
  const Eigen::Index n = psi.dim_in();

  // B = sI + Y, recovered columnwise: B e_j = (1/n) sum_k psi(e_jk) e_k.
  Mat B = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      Mat E = Mat::Zero(n, n);
      E(j, k) = 1.0;
      B.col(j) += psi.apply(E).col(k);
    }
  }
  B /= double(n);

  CnegForm form;
  form.s = B.trace().real() / double(n);
  form.Y = B - form.s * Mat::Identity(n, n);

  // Residual R(A) = sA + YA + AY^dag - psi(A) must be CP; its Choi matrix
  // is a sum of rank-one blocks vec(S^T) vec(S^T)^dag with traceless S.
  Mat R = form.s * Mat::Identity(n * n, n * n) + left_mult(form.Y) +
          right_mult_adj(form.Y) - psi.matrix();
  ChoiMatrix K = choi(SuperOp(n, n, R));
  Mat H = 0.5 * (K.matrix + K.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  double scale = std::max(1.0, H.norm());
  if (es.eigenvalues()(0) < -tol * scale)
    throw ResidualNotCP(
        "extract_canonical_form: residual Choi eigenvalue " +
        std::to_string(es.eigenvalues()(0)) + " < -tol; no canonical form");

  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    double mu = es.eigenvalues()(i);
    if (mu <= 1e-10 * scale) break;  // descending lambda, drop numerical zeros
    // Choi vector w with w_{(j,a)} = S_{aj}, normalized tr(S^dag S) = n.
    CVec w = std::sqrt(double(n)) * es.eigenvectors().col(i);
    Mat S = unvec_rm(w, n, n).transpose();
    fix_phase(S);
    form.terms.emplace_back(mu / double(n), S);
  }

  double err = (reconstruct(form).matrix() - psi.matrix()).norm();
  if (err > 1e-8 * std::max(1.0, psi.mnorm()))
    throw NoConvergence("extract_canonical_form: reconstruction error " +
                        std::to_string(err));
  return form;
}

SuperOp superop_exp(const SuperOp& psi, Complex c) {
  if (!psi.endomorphism())
    throw DimensionMismatch("superop_exp: map must be square");
  Mat E = (c * psi.matrix()).exp();
  return SuperOp(psi.rows_in(), psi.cols_in(), psi.rows_out(), psi.cols_out(),
                 std::move(E));
}

SuperOp integrate_exp_semigroup(const SuperOp& psi, double s_max,
                                double abs_tol) {
  if (!psi.endomorphism())
    throw DimensionMismatch("integrate_exp_semigroup: map must be square");
  const Mat& M = psi.matrix();
  const Eigen::Index d = M.rows();

  // The quadrature evaluates each entry separately but the abscissae repeat,
  // so cache the matrix exponentials by the exact s value.
  std::map<double, Mat> cache;
  auto expm_at = [&](double s) -> const Mat& {
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, Mat((-s * M).exp())).first;
    return it->second;
  };

  using boost::math::quadrature::gauss_kronrod;
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double re, im, err_re = 0, err_im = 0;
      try {
        re = gauss_kronrod<double, 31>::integrate(
            [&](double s) { return expm_at(s)(i, j).real(); }, 0.0, s_max, 12,
            abs_tol, &err_re);
        im = gauss_kronrod<double, 31>::integrate(
            [&](double s) { return expm_at(s)(i, j).imag(); }, 0.0, s_max, 12,
            abs_tol, &err_im);
      } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("integrate_exp_semigroup: ") +
                                e.what());
      }
      if (err_re > 1e-6 || err_im > 1e-6)
        throw QuadratureFailure("integrate_exp_semigroup: error estimate " +
                                std::to_string(std::max(err_re, err_im)));
      out(i, j) = Complex(re, im);
    }
  return SuperOp(psi.rows_in(), psi.cols_in(), psi.rows_out(), psi.cols_out(),
                 std::move(out));
}

SuperOp inverse_of_unital_cneg(const SuperOp& psi, double quad_tol) {
  if (!psi.is_unital())
    throw NotUnital("inverse_of_unital_cneg: psi(I) != I");
  if (!is_conditionally_negative(psi).verdict)
    throw Error("inverse_of_unital_cneg: psi fails the exponential test");
  const Mat& M = psi.matrix();
  if (cond_number(M) >= 1e12)
    throw Singular("inverse_of_unital_cneg: superoperator matrix ill-conditioned");
  Mat inv = M.inverse();
  SuperOp quad = integrate_exp_semigroup(psi);
  double diff = (quad.matrix() - inv).norm();
  if (diff > quad_tol)
    throw QuadratureMismatch(
        "inverse_of_unital_cneg: direct inverse and quadrature differ by " +
        std::to_string(diff));
  return SuperOp(psi.rows_in(), psi.cols_in(), psi.rows_out(), psi.cols_out(),
                 std::move(inv));
}

bool invertible_subordinate_test(const SuperOp& phi1, const SuperOp& phi2) {
  if (phi1.rows_in() != phi2.rows_in() || phi1.cols_in() != phi2.cols_in())
    throw DimensionMismatch("invertible_subordinate_test: dimension mismatch");
  if (cond_number(phi1.matrix()) >= 1e12 || cond_number(phi2.matrix()) >= 1e12)
    throw Singular("invertible_subordinate_test: map not invertible");
  Mat inv1 = phi1.matrix().inverse();
  Mat inv2 = phi2.matrix().inverse();
  SuperOp psi2(phi2.rows_in(), phi2.cols_in(), phi2.rows_out(), phi2.cols_out(),
               inv2);
  if (!is_conditionally_negative(psi2).verdict) return false;
  SuperOp diff(phi1.rows_in(), phi1.cols_in(), phi1.rows_out(), phi1.cols_out(),
               Mat(inv2 - inv1));
  return is_completely_positive(diff).verdict;
}

double cneg_quadratic_form_max(const SuperOp& psi, int samples,
                               std::uint64_t seed) {
  if (!psi.endomorphism() || !psi.square_spaces())
    throw DimensionMismatch("cneg_quadratic_form_max: map must act on M_n");
  const Eigen::Index n = psi.dim_in();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto rmat = [&](Eigen::Index r, Eigen::Index c) {
    Mat A(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) A(i, j) = Complex(nd(rng), nd(rng));
    return A;
  };

  double worst = -std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < samples; ++rep) {
    int m = 2 + int(rng() % 2);  // tuples of 2 or 3
    std::vector<Mat> A(m);
    Mat stacked(n, m * n);
    for (int i = 0; i < m; ++i) {
      A[i] = rmat(n, n);
      stacked.middleCols(i * n, n) = A[i];
    }
    // (f_1,...,f_m) drawn from the null space of [A_1 ... A_m].
    Eigen::FullPivLU<Mat> lu(stacked);
    Mat ker = lu.kernel();
    if (ker.cols() == 0) continue;
    CVec coeff = CVec::NullaryExpr(ker.cols(), [&](Eigen::Index) {
      return Complex(nd(rng), nd(rng));
    });
    CVec f = ker * coeff;
    if (f.norm() < 1e-12) continue;
    f /= f.norm();

    Complex q = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Mat arg = A[i].adjoint() * A[j];
        CVec fj = f.segment(j * n, n);
        CVec fi = f.segment(i * n, n);
        q += fi.dot(psi.apply(arg) * fj);
      }
    worst = std::max(worst, q.real());
  }
  return worst;
}

}  // namespace qpm

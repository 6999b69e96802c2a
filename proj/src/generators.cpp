#include "qpm/generators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace qpm {

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                  double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      A(i, j) = scale * Complex(nd(rng), nd(rng)) / std::sqrt(2.0);
  return A;
}

Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Mat A = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ();
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex d = R(j, j);
    Q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : 1.0;
  }
  return Q;
}

Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale) {
  Mat A = random_matrix(n, n, rng, scale);
  return 0.5 * (A + A.adjoint());
}

Mat random_density(Eigen::Index n, std::mt19937_64& rng, Eigen::Index rank) {
  if (rank <= 0 || rank > n) rank = n;
  Mat B = random_matrix(n, rank, rng);
  Mat D = B * B.adjoint();
  return D / D.trace().real();
}

SuperOp random_cp_map(Eigen::Index n, int n_kraus, std::mt19937_64& rng) {
  KrausSet k;
  for (int i = 0; i < n_kraus; ++i)
    k.ops.push_back(random_matrix(n, n, rng, 1.0 / std::sqrt(double(n))));
  return from_kraus(k);
}

std::vector<Mat> random_traceless_orthonormal(Eigen::Index n, int count,
                                              std::mt19937_64& rng) {
  if (count > n * n - 1)
    throw Error("random_traceless_orthonormal: at most n^2 - 1 elements");
  std::vector<Mat> out;
  while (int(out.size()) < count) {
    Mat S = random_matrix(n, n, rng);
    S -= (S.trace() / double(n)) * Mat::Identity(n, n);
    // Gram-Schmidt in the Hilbert-Schmidt inner product.
    for (const Mat& T : out) S -= ((T.adjoint() * S).trace() / double(n)) * T;
    double hs = std::sqrt((S.adjoint() * S).trace().real());
    if (hs < 1e-8) continue;
    out.push_back(S * (std::sqrt(double(n)) / hs));
  }
  return out;
}

CnegForm random_unital_cneg_form(Eigen::Index n, int terms,
                                 std::mt19937_64& rng) {
  CnegForm form;
  auto S = random_traceless_orthonormal(n, terms, rng);
  std::uniform_real_distribution<double> ud(0.1, 1.0);
  Mat G = Mat::Zero(n, n);
  for (int i = 0; i < terms; ++i) {
    double lambda = ud(rng);
    form.terms.emplace_back(lambda, S[i]);
    G += lambda * S[i] * S[i].adjoint();
  }
  // Unitality psi(I) = I pins s and the Hermitian part of Y:
  //   s I + (Y + Y^dag) - G = I  with  Y = Y0 + (G - tr(G)/n I)/2.
  double g = G.trace().real() / double(n);
  Mat A = random_matrix(n, n, rng, 0.5);
  Mat Y0 = 0.5 * (A - A.adjoint());
  Y0 -= (Y0.trace() / double(n)) * Mat::Identity(n, n);
  form.s = 1.0 + g;
  form.Y = Y0 + 0.5 * (G - g * Mat::Identity(n, n));
  return form;
}

SuperOp random_unital_cneg(Eigen::Index n, int terms, std::mt19937_64& rng) {
  return reconstruct(random_unital_cneg_form(n, terms, rng));
}

std::vector<double> random_zero_sum(Eigen::Index n, std::mt19937_64& rng,
                                    double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<double> v(n);
  double mean = 0.0;
  for (auto& x : v) {
    x = nd(rng);
    mean += x;
  }
  mean /= double(n);
  for (auto& x : v) x -= mean;
  return v;
}

SuperOp random_q_positive(Eigen::Index n, std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return state_map(random_density(n, rng));
    case 1: {
      // Invertible unital q-pure family: Schur multipliers
      // 1/(1 + i(l_j - l_k)), optionally conjugated by a unitary.
      auto l = random_zero_sum(n, rng);
      Mat mult(n, n);
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          mult(j, k) = 1.0 / Complex(1.0, l[j] - l[k]);
      SuperOp phi = schur_map(mult);
      if (rng() % 2) phi = conjugate_by_unitary(phi, random_unitary(n, rng));
      return phi;
    }
    default: {
      SuperOp psi = random_unital_cneg(n, 1 + int(rng() % 2), rng);
      return SuperOp(n, n, Mat(psi.matrix().inverse()));
    }
  }
}

}  // namespace qpm

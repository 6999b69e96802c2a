#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qpm/superop.hpp"

namespace qpm {

// Canonical data of a conditionally negative map on M_n:
//   psi(A) = s A + Y A + A Y^dag - sum_i lambda_i S_i A S_i^dag
// with tr(Y) = 0, lambda_i > 0, tr(S_i) = 0 and tr(S_i^dag S_j) = n delta_ij.
struct CnegForm {
  double s = 0.0;
  Mat Y;
  std::vector<std::pair<double, Mat>> terms;

  Eigen::Index dim() const { return Y.rows(); }
};

SuperOp reconstruct(const CnegForm& form);

struct CnegCert {
  bool verdict = false;
  std::vector<double> s_grid;
  std::vector<double> min_eigs;
};

std::vector<double> default_s_grid();

// Authoritative exponential test: exp(-s psi) completely positive at every
// s in the grid.  Requires psi self-adjoint.
CnegCert is_conditionally_negative(const SuperOp& psi,
                                   const std::vector<double>& s_grid = default_s_grid(),
                                   double tol = 1e-10);

// Recovers (s, Y, terms).  Throws ResidualNotCP when the residual
// s A + YA + AY^dag - psi(A) is not completely positive, in which case psi
// admits no canonical form with positive coefficients.
CnegForm extract_canonical_form(const SuperOp& psi, double tol = 1e-8);

// Matrix exponential of the superoperator, exp(c * psi).
SuperOp superop_exp(const SuperOp& psi, Complex c = Complex(1.0, 0.0));

// Inverse of a unital conditionally negative map, cross-checked against the
// quadrature of exp(-s psi) over s in [0, 40].
SuperOp inverse_of_unital_cneg(const SuperOp& psi, double quad_tol = 1e-6);

// Quadrature side on its own (test oracle).
SuperOp integrate_exp_semigroup(const SuperOp& psi, double s_max = 40.0,
                                double abs_tol = 1e-10);

// phi_1 >=_q phi_2 for invertible unital q-positive phi_1 and invertible
// phi_2, decided through the inverses.
bool invertible_subordinate_test(const SuperOp& phi1, const SuperOp& phi2);

// Definition-level sampled falsifier: draws tuples (A_i, f_i) with
// sum A_i f_i = 0 and evaluates the quadratic form.  Returns the largest
// value found; a value > tol disproves conditional negativity.
double cneg_quadratic_form_max(const SuperOp& psi, int samples,
                               std::uint64_t seed);

}  // namespace qpm

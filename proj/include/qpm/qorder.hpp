#pragma once

#include <vector>

#include "qpm/superop.hpp"

namespace qpm {

// Grid-indexed certificate for checks quantified over t >= 0.  The default
// grid covers {0} plus 121 logarithmically spaced points in [1e-3, 1e6]; on
// the analytic fast paths (rank-one and Schur maps) the per-point resolvents
// are evaluated in closed form and `exact_path` is set.  Either way the
// certificate is grid-based evidence, not a proof, and serializes as
// "grid-certified".
struct PositivityCert {
  std::vector<double> grid;
  std::vector<double> min_eigs;
  bool verdict = false;
  std::vector<double> failures;
  bool exact_path = false;

  // First grid point where the check failed, if any.
  double first_failure() const { return failures.empty() ? -1.0 : failures.front(); }
};

std::vector<double> default_t_grid();

// phi^(s) = phi (I + s phi)^{-1}.
SuperOp resolvent_subordinate(const SuperOp& phi, double s);

// True iff some eigenvalue of the superoperator matrix is negative real:
// |Im z| <= 1e-9 (1+|z|) and Re z < -1e-9.
bool has_negative_eigenvalue(const SuperOp& phi, double tol = 1e-9);

PositivityCert is_q_positive(const SuperOp& phi,
                             const std::vector<double>& grid = default_t_grid(),
                             double tol = 1e-10);

// phi >=_q psi: phi^(t) - psi^(t) completely positive at every grid t.
PositivityCert q_dominates(const SuperOp& phi, const SuperOp& psi,
                           const std::vector<double>& grid = default_t_grid(),
                           double tol = 1e-10);

// L_phi = lim_{t->inf} t phi (I + t phi)^{-1}, probed at t in {1e6,1e7,1e8}.
SuperOp limit_map(const SuperOp& phi);

// phi_eps = eps I + (1 - eps) phi.
SuperOp eps_deform(const SuperOp& phi, double eps);

// The positive norm-one element fixed by L_phi, as the limit of L_phi^k(I).
Mat fixed_point_of_limit(const SuperOp& phi);

// min over s >= 0 of ||psi - phi^(s)|| (superoperator matrix norm), with the
// zero map included as s = inf.  Used to decide membership in the resolvent
// family.
double distance_from_resolvent_family(const SuperOp& phi, const SuperOp& psi);

}  // namespace qpm

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qpm/qorder.hpp"
#include "qpm/superop.hpp"

namespace qpm {

// Data of an off-diagonal block map gamma(A) = sum c_ij S_i A T_j^dag
// between the Kraus maps phi = sum S_i . S_i^dag and psi = sum T_j . T_j^dag.
struct CornerSpec {
  KrausSet left_kraus;   // S_i, n x n
  KrausSet right_kraus;  // T_j, k x k
  Mat C;                 // n_terms x k_terms, ||C|| <= 1
};

struct HyperMaxVerdict {
  bool hypermaximal = false;
  // (t, s) of a strictly subordinate q-positive block map with the same
  // corner; infinity encodes the zero map on that diagonal.
  std::optional<std::pair<double, double>> violating_pair;
};

struct MaxCornerNorm {
  double value = 0.0;
  Mat C;        // optimal contraction
  Mat A;        // optimal block operand
  bool faithful = true;  // both inputs full rank (verdict meaningful)
};

SuperOp corner_from_contraction(const CornerSpec& spec);

bool verify_corner(const SuperOp& phi, const SuperOp& gamma, const SuperOp& psi,
                   double tol = 1e-10);

PositivityCert is_q_corner(const SuperOp& phi, const SuperOp& gamma,
                           const SuperOp& psi,
                           const std::vector<double>& grid = default_t_grid(),
                           double tol = 1e-10);

// gamma(A) = phi(A U^dag) U, the corner from phi to phi_U.
SuperOp unitary_conjugation_corner(const SuperOp& phi, const Mat& U);

// Diagonal corner b_j -> b_j / (1 + i l_j) from the Schur-form map to the
// identity on C.
SuperOp flow_corner_to_identity(const std::vector<double>& lambdas);

std::vector<double> default_ts_grid();

// Searches the resolvent families of the two diagonals (plus the zero map,
// encoded as t = infinity) for a strictly subordinate q-positive block map
// with the same corner.  Both diagonals must classify as q-pure, since only
// then do the resolvent families exhaust their subordinates.
HyperMaxVerdict is_hypermaximal_over_resolvent_family(
    const SuperOp& phi, const SuperOp& gamma, const SuperOp& psi,
    const std::vector<double>& ts_grid = default_ts_grid(), double tol = 1e-10);

// Largest corner norm between the rank-one unital maps of D1 and D2:
// max over contractions ||C|| <= 1, ||A|| <= 1 of |tr(C D_mu A D_lam)|,
// by alternating maximization with random restarts.
MaxCornerNorm max_corner_norm_rank_one(const Mat& D1, const Mat& D2,
                                       int restarts = 20,
                                       std::uint64_t seed = 1234);

}  // namespace qpm

#pragma once

#include <random>

#include "qpm/cneg.hpp"
#include "qpm/superop.hpp"

namespace qpm {

// Deterministic generators for the property and acceptance suites.  All draw
// from a caller-owned engine so suites can pin seeds.

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                  double scale = 1.0);
Mat random_unitary(Eigen::Index n, std::mt19937_64& rng);
Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0);
// Full-rank density matrix unless `rank` is given (rank < n gives a singular one).
Mat random_density(Eigen::Index n, std::mt19937_64& rng, Eigen::Index rank = 0);

SuperOp random_cp_map(Eigen::Index n, int n_kraus, std::mt19937_64& rng);

// Traceless, trace-orthonormal family tr(S_i^dag S_j) = n delta_ij.
std::vector<Mat> random_traceless_orthonormal(Eigen::Index n, int count,
                                              std::mt19937_64& rng);

// Unital conditionally negative map built from its canonical data; always
// passes the exponential test by construction.
CnegForm random_unital_cneg_form(Eigen::Index n, int terms,
                                 std::mt19937_64& rng);
SuperOp random_unital_cneg(Eigen::Index n, int terms, std::mt19937_64& rng);

// Zero-sum real tuple for the Schur-form q-pure family.
std::vector<double> random_zero_sum(Eigen::Index n, std::mt19937_64& rng,
                                    double scale = 1.0);

// Draws from the q-positive families the classification covers: rank-one
// state maps, Schur-form invertible maps (optionally conjugated), and
// inverses of generated unital conditionally negative maps.
SuperOp random_q_positive(Eigen::Index n, std::mt19937_64& rng);

}  // namespace qpm

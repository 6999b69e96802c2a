#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpm/cneg.hpp"
#include "qpm/qorder.hpp"
#include "qpm/superop.hpp"

namespace qpm {

// Outcome of classifying a unital q-positive map against the two known
// q-pure families: rank-one maps of faithful states, and invertible maps
// whose inverse is A + YA + AY^dag with Y anti-Hermitian (Schur form after
// diagonalizing -iY).
struct QPureVerdict {
  enum class Tag { RankOneFaithful, InvertibleSchur, NotQPure, Indeterminate };
  Tag tag = Tag::Indeterminate;

  Mat D;                          // RankOneFaithful: the faithful state
  Mat U;                          // InvertibleSchur: diagonalizing unitary
  std::vector<double> lambdas;    // InvertibleSchur: sorted ascending, sum 0
  std::optional<SuperOp> witness; // NotQPure: strict q-subordinate
  std::string reason;             // Indeterminate
};

// phi(A) = tr(DA) I; q-pure iff D is faithful.  Non-faithful D yields the
// witness psi(A) = tr(DA) P with P the range projection of D.
QPureVerdict is_rank_one_q_pure(const SuperOp& phi, double tol = 1e-10);

// Schur map with multipliers 1/(1 + i(l_j - l_k)), optionally conjugated.
SuperOp make_invertible_qpure(const std::vector<double>& lambdas,
                              const Mat* U = nullptr);

// Inverts phi, extracts the canonical form of the inverse, and decides
// membership in the Schur family (s = 1, no terms, Y anti-Hermitian).
QPureVerdict is_invertible_unital_q_pure(const SuperOp& phi, double tol = 1e-8);

// Dispatch on numerical rank: 1 -> rank-one test, full -> invertible test,
// anything in between -> Indeterminate.
QPureVerdict classify_q_pure(const SuperOp& phi);

}  // namespace qpm

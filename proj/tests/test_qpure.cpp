#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "qpm/generators.hpp"
#include "qpm/qpure.hpp"

using namespace qpm;
using std::complex_literals::operator""i;

TEST_CASE("is_rank_one_q_pure: faithful states") {
  Mat D = 0.5 * Mat::Identity(2, 2);
  auto v = is_rank_one_q_pure(state_map(D));
  CHECK(v.tag == QPureVerdict::Tag::RankOneFaithful);
  CHECK((v.D - D).norm() < 1e-10);

  Mat D2 = Mat::Zero(2, 2);
  D2.diagonal() << 2.0 / 3.0, 1.0 / 3.0;
  CHECK(is_rank_one_q_pure(state_map(D2)).tag ==
        QPureVerdict::Tag::RankOneFaithful);
}

TEST_CASE("is_rank_one_q_pure: singular state yields a genuine witness") {
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 1.0;
  SuperOp phi = state_map(D);
  auto v = is_rank_one_q_pure(phi);
  CHECK(v.tag == QPureVerdict::Tag::NotQPure);
  REQUIRE(v.witness.has_value());
  // witness psi(A) = tr(DA) P with P = diag(1,0)
  Mat E = Mat::Zero(2, 2);
  E(0, 0) = 1.0;
  CHECK((v.witness->apply(E) - E).norm() < 1e-10);
  CHECK(q_dominates(phi, *v.witness).verdict);
  CHECK(distance_from_resolvent_family(phi, *v.witness) > 1e-6);
}

TEST_CASE("is_rank_one_q_pure: preconditions") {
  CHECK_THROWS_AS(is_rank_one_q_pure(SuperOp::identity(2)), NotRankOne);
  Mat D = Mat::Zero(2, 2);
  D.diagonal() << 0.5, 0.5;
  CHECK_THROWS_AS(is_rank_one_q_pure(state_map(D) * Complex(2.0, 0.0)),
                  NotUnital);
}

TEST_CASE("make_invertible_qpure") {
  std::vector<double> zero(3, 0.0);
  CHECK((make_invertible_qpure(zero).matrix() - Mat::Identity(9, 9)).norm() <
        1e-12);

  auto mult = schur_multipliers(make_invertible_qpure({1.0, -1.0}));
  REQUIRE(mult.has_value());
  Mat expect(2, 2);
  expect << 1.0, 1.0 / Complex(1.0, 2.0), 1.0 / Complex(1.0, -2.0), 1.0;
  CHECK((*mult - expect).norm() < 1e-12);

  // lambdas (-1/2, 1/2): multiplier (1+i)/2 in the (1,2) slot
  auto mult2 = schur_multipliers(make_invertible_qpure({-0.5, 0.5}));
  REQUIRE(mult2.has_value());
  CHECK(std::abs((*mult2)(0, 1) - (1.0 + 1.0i) / 2.0) < 1e-12);

  CHECK_THROWS_AS(make_invertible_qpure({1.0, 1.0}), LambdaSumNonzero);
}

TEST_CASE("is_invertible_unital_q_pure: identity and the Schur family") {
  auto v = is_invertible_unital_q_pure(SuperOp::identity(2));
  CHECK(v.tag == QPureVerdict::Tag::InvertibleSchur);
  REQUIRE(v.lambdas.size() == 2);
  CHECK(std::abs(v.lambdas[0]) < 1e-8);
  CHECK(std::abs(v.lambdas[1]) < 1e-8);

  auto v2 = is_invertible_unital_q_pure(make_invertible_qpure({1.0, -1.0}));
  CHECK(v2.tag == QPureVerdict::Tag::InvertibleSchur);
  REQUIRE(v2.lambdas.size() == 2);
  CHECK(v2.lambdas[0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(v2.lambdas[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("is_invertible_unital_q_pure: map with a cneg term is not q-pure") {
  // phi^{-1}(A) = (5/4)A + YA + AY^dag - (1/4) S A S^dag, unital
  Mat Y = Mat::Zero(2, 2);
  Y(0, 0) = 1.0i;
  Y(1, 1) = -1.0i;
  Mat S = Mat::Zero(2, 2);
  S(0, 0) = 1.0;
  S(1, 1) = -1.0;
  CnegForm form{1.25, Y, {{0.25, S}}};
  SuperOp psi = reconstruct(form);
  REQUIRE(psi.is_unital());
  SuperOp phi(2, 2, Mat(psi.matrix().inverse()));
  REQUIRE(phi.is_unital());
  REQUIRE(is_q_positive(phi).verdict);

  auto v = is_invertible_unital_q_pure(phi);
  CHECK(v.tag == QPureVerdict::Tag::NotQPure);
  REQUIRE(v.witness.has_value());
  CHECK(q_dominates(phi, *v.witness).verdict);
  CHECK(distance_from_resolvent_family(phi, *v.witness) > 1e-6);
  // invertibility rigidity: the witness is invertible or zero
  if (v.witness->mnorm() > 1e-8)
    CHECK(v.witness->numerical_rank() == v.witness->matrix().rows());
}

TEST_CASE("classify_q_pure: dispatch") {
  CHECK(classify_q_pure(state_map(Mat(Mat::Identity(3, 3) / 3.0))).tag ==
        QPureVerdict::Tag::RankOneFaithful);

  auto v = classify_q_pure(make_invertible_qpure({-0.5, 0.5}));
  CHECK(v.tag == QPureVerdict::Tag::InvertibleSchur);
  REQUIRE(v.lambdas.size() == 2);
  CHECK(v.lambdas[0] == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(v.lambdas[1] == doctest::Approx(0.5).epsilon(1e-8));

  // the pinching map is unital q-positive of rank 2 on M_2: unclassified
  SuperOp pinch = schur_map(Mat(Mat::Identity(2, 2)));
  CHECK(classify_q_pure(pinch).tag == QPureVerdict::Tag::Indeterminate);
}

TEST_CASE("round trip recovers lambdas under conjugation") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::Index n = 2 + rep % 3;
    auto l = random_zero_sum(n, rng);
    Mat U = random_unitary(n, rng);
    SuperOp phi =
        (rep % 2) ? make_invertible_qpure(l, &U) : make_invertible_qpure(l);
    auto v = classify_q_pure(phi);
    REQUIRE(v.tag == QPureVerdict::Tag::InvertibleSchur);
    std::vector<double> sorted = l;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(v.lambdas.size() == size_t(n));
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(v.lambdas[i] == doctest::Approx(sorted[i]).epsilon(1e-8));
    // regenerating from the recovered data reproduces the map
    SuperOp regen = make_invertible_qpure(v.lambdas, &v.U);
    CHECK((regen.matrix() - phi.matrix()).norm() < 1e-7);
  }
}

TEST_CASE("subordinate exhaustion for the classified families") {
  // rank-one faithful: scaled copies are inside the resolvent family
  Mat D = Mat::Zero(2, 2);
  D.diagonal() << 0.5, 0.5;
  SuperOp sm = state_map(D);
  for (double lam : {0.25, 0.5, 0.75}) {
    SuperOp scaled = sm * Complex(lam, 0.0);
    CHECK(q_dominates(sm, scaled).verdict);
    CHECK(distance_from_resolvent_family(sm, scaled) < 1e-8);
  }

  // invertible Schur family: scaled copies are outside, and not dominated
  SuperOp phi = make_invertible_qpure({-0.5, 0.5});
  for (double lam : {0.25, 0.5, 0.75}) {
    SuperOp scaled = phi * Complex(lam, 0.0);
    CHECK_FALSE(q_dominates(phi, scaled).verdict);
    CHECK(distance_from_resolvent_family(phi, scaled) > 1e-6);
  }

  // resolvent points are always dominated and in-family
  for (double s : {0.5, 2.0}) {
    SuperOp r = resolvent_subordinate(phi, s);
    CHECK(q_dominates(phi, r).verdict);
    CHECK(distance_from_resolvent_family(phi, r) < 1e-8);
  }
}

TEST_CASE("rank-one domination rigidity") {
  std::mt19937_64 rng(103);
  Mat D = random_density(2, rng);
  SuperOp phi = state_map(D);
  for (int rep = 0; rep < 10; ++rep) {
    // psi(A) = tr(TA) C with (T, C) not proportional to (D, I)
    Mat T = random_density(2, rng);
    Mat B = random_matrix(2, 2, rng);
    Mat C = B * B.adjoint();
    C /= spectral_norm(C);
    if ((C - Mat::Identity(2, 2)).norm() < 1e-6) continue;
    Mat W(4, 4);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) W.col(j * 2 + k) = T(k, j) * vec_rm(C);
    CHECK_FALSE(q_dominates(phi, SuperOp(2, 2, W)).verdict);
  }
}

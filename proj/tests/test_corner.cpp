#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpm/corner.hpp"
#include "qpm/generators.hpp"
#include "qpm/qpure.hpp"

using namespace qpm;
using std::complex_literals::operator""i;

namespace {

CornerSpec random_spec(Eigen::Index n, Eigen::Index k, int terms,
                       std::mt19937_64& rng, double cnorm) {
  CornerSpec spec;
  for (int i = 0; i < terms; ++i) {
    spec.left_kraus.ops.push_back(random_matrix(n, n, rng));
    spec.right_kraus.ops.push_back(random_matrix(k, k, rng));
  }
  spec.C = random_matrix(terms, terms, rng);
  spec.C *= cnorm / spectral_norm(spec.C);
  return spec;
}

}  // namespace

TEST_CASE("corner_from_contraction: zero and identity contractions") {
  std::mt19937_64 rng(107);
  CornerSpec spec = random_spec(2, 3, 2, rng, 0.0);
  spec.C.setZero();
  SuperOp gamma = corner_from_contraction(spec);
  CHECK(gamma.mnorm() < 1e-14);
  SuperOp phi = from_kraus(spec.left_kraus);
  SuperOp psi = from_kraus(spec.right_kraus);
  CHECK(verify_corner(phi, gamma, psi));

  CornerSpec idspec;
  idspec.left_kraus.ops = {Mat::Identity(2, 2)};
  idspec.right_kraus.ops = {Mat::Identity(2, 2)};
  idspec.C = Mat::Identity(1, 1);
  SuperOp gid = corner_from_contraction(idspec);
  CHECK((gid.matrix() - Mat::Identity(4, 4)).norm() < 1e-14);
  CHECK(verify_corner(SuperOp::identity(2), gid, SuperOp::identity(2)));
}

TEST_CASE("corner_from_contraction: contraction bound enforced") {
  std::mt19937_64 rng(109);
  CornerSpec spec = random_spec(2, 2, 2, rng, 1.2);
  CHECK_THROWS_AS(corner_from_contraction(spec), ContractionViolated);
}

TEST_CASE("contractions always give corners (constructive direction)") {
  std::mt19937_64 rng(113);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::Index n = 2 + rep % 2, k = 2 + (rep / 2) % 2;
    CornerSpec spec = random_spec(n, k, 2, rng, 0.9);
    SuperOp gamma = corner_from_contraction(spec);
    SuperOp phi = from_kraus(spec.left_kraus);
    SuperOp psi = from_kraus(spec.right_kraus);
    SuperOp blk = block_corner_map(phi, gamma, psi);
    auto v = is_completely_positive(blk);
    CHECK(v.verdict);
    CHECK(v.min_eig >= -1e-10 * std::max(1.0, choi(blk).matrix.norm()));
  }
}

TEST_CASE("verify_corner: oversized corner fails") {
  SuperOp id2 = SuperOp::identity(2);
  CHECK_FALSE(verify_corner(id2, id2 * Complex(2.0, 0.0), id2));
  CHECK(verify_corner(id2, id2, id2));
}

TEST_CASE("is_q_corner: basis-change and identity-target corners, plus a failing one") {
  Mat D = 0.5 * Mat::Identity(2, 2);
  SuperOp phi = state_map(D);
  Mat U = Mat::Zero(2, 2);
  U(0, 0) = 1.0;
  U(1, 1) = 1.0i;
  SuperOp gamma = unitary_conjugation_corner(phi, U);
  CHECK(is_q_corner(phi, gamma, conjugate_by_unitary(phi, U)).verdict);

  SuperOp phiu = make_invertible_qpure({1.0, -1.0});
  SuperOp flow = flow_corner_to_identity({1.0, -1.0});
  CHECK(is_q_corner(phiu, flow, SuperOp::identity(1)).verdict);

  SuperOp id2 = SuperOp::identity(2);
  auto cert = is_q_corner(id2, id2 * Complex(1.5, 0.0), id2);
  CHECK_FALSE(cert.verdict);
  CHECK(cert.first_failure() == 0.0);
}

TEST_CASE("unitary_conjugation_corner: U=I and the resolvent identity") {
  std::mt19937_64 rng(127);
  SuperOp phi = random_q_positive(2, rng);
  SuperOp g = unitary_conjugation_corner(phi, Mat(Mat::Identity(2, 2)));
  CHECK((g.matrix() - phi.matrix()).norm() < 1e-12);

  Mat U = random_unitary(2, rng);
  SuperOp gamma = unitary_conjugation_corner(phi, U);
  // gamma^{(t)}(A) = phi^{(t)}(A U^dag) U at t = 1
  SuperOp lhs = resolvent_subordinate(gamma, 1.0);
  SuperOp rhs = unitary_conjugation_corner(resolvent_subordinate(phi, 1.0), U);
  CHECK((lhs.matrix() - rhs.matrix()).norm() < 1e-10);

  CHECK_THROWS_AS(unitary_conjugation_corner(phi, Mat(2.0 * Mat::Identity(2, 2))),
                  NotUnitary);
}

TEST_CASE("flow_corner_to_identity") {
  SuperOp triv = flow_corner_to_identity({0.0, 0.0});
  CHECK((triv.matrix() - Mat::Identity(2, 2)).norm() < 1e-14);

  SuperOp g = flow_corner_to_identity({1.0, -1.0});
  CHECK(std::abs(g.matrix()(0, 0) - 1.0 / Complex(1.0, 1.0)) < 1e-14);
  CHECK(std::abs(g.matrix()(1, 1) - 1.0 / Complex(1.0, -1.0)) < 1e-14);

  SuperOp r = resolvent_subordinate(g, 2.0);
  CHECK(std::abs(r.matrix()(0, 0) - 1.0 / Complex(3.0, 1.0)) < 1e-12);
  CHECK(std::abs(r.matrix()(1, 1) - 1.0 / Complex(3.0, -1.0)) < 1e-12);

  CHECK_THROWS_AS(flow_corner_to_identity({1.0, 1.0}), LambdaSumNonzero);
}

TEST_CASE("hypermaximality: equality cases from the classified families") {
  Mat D = 0.5 * Mat::Identity(2, 2);
  SuperOp phi = state_map(D);
  Mat U = Mat::Zero(2, 2);
  U(0, 0) = 1.0;
  U(1, 1) = 1.0i;
  SuperOp gamma = unitary_conjugation_corner(phi, U);
  SuperOp psi = conjugate_by_unitary(phi, U);
  auto v = is_hypermaximal_over_resolvent_family(phi, gamma, psi);
  CHECK(v.hypermaximal);
  CHECK_FALSE(v.violating_pair.has_value());

  SuperOp phiu = make_invertible_qpure({1.0, -1.0});
  SuperOp flow = flow_corner_to_identity({1.0, -1.0});
  auto v2 = is_hypermaximal_over_resolvent_family(phiu, flow, SuperOp::identity(1));
  CHECK(v2.hypermaximal);
}

TEST_CASE("hypermaximality: halved corner loses it or stops being a q-corner") {
  Mat D = 0.5 * Mat::Identity(2, 2);
  SuperOp phi = state_map(D);
  Mat U = Mat::Zero(2, 2);
  U(0, 0) = 1.0;
  U(1, 1) = 1.0i;
  SuperOp gamma = unitary_conjugation_corner(phi, U) * Complex(0.5, 0.0);
  SuperOp psi = conjugate_by_unitary(phi, U);
  bool still_q_corner = is_q_corner(phi, gamma, psi).verdict;
  if (still_q_corner) {
    auto v = is_hypermaximal_over_resolvent_family(phi, gamma, psi);
    CHECK_FALSE(v.hypermaximal);
    CHECK(v.violating_pair.has_value());
  } else {
    CHECK_FALSE(still_q_corner);
  }
}

TEST_CASE("hypermaximality: refuses unclassified diagonals") {
  SuperOp pinch = schur_map(Mat(Mat::Identity(2, 2)));
  CHECK_THROWS_AS(
      is_hypermaximal_over_resolvent_family(pinch, pinch, pinch),
      DiagonalsNotQPure);
}

TEST_CASE("max_corner_norm_rank_one: matched and mismatched spectra") {
  Mat D2 = 0.5 * Mat::Identity(2, 2);
  auto m = max_corner_norm_rank_one(D2, D2);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.faithful);

  Mat D3 = Mat::Identity(3, 3) / 3.0;
  auto mm = max_corner_norm_rank_one(D2, D3);
  CHECK(mm.value < 1.0 - 1e-3);
  CHECK(mm.value == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-6));

  // witnesses achieve the reported value
  Mat Dlam = D2.cwiseSqrt();
  Mat Dmu = D3.cwiseSqrt();
  Complex attained = (mm.C * Dmu * mm.A * Dlam).trace();
  CHECK(std::abs(attained) == doctest::Approx(mm.value).epsilon(1e-8));
}

TEST_CASE("max_corner_norm_rank_one: symmetry and unitary-matched spectra") {
  std::mt19937_64 rng(131);
  Mat D = random_density(3, rng);
  Mat U = random_unitary(3, rng);
  Mat DU = U.adjoint() * D * U;
  auto a = max_corner_norm_rank_one(D, DU);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-6));

  Mat D2 = random_density(2, rng);
  auto ab = max_corner_norm_rank_one(D, D2);
  auto ba = max_corner_norm_rank_one(D2, D);
  CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-8));
}

TEST_CASE("max_corner_norm_rank_one: flags and rejections") {
  Mat sing = Mat::Zero(2, 2);
  sing(0, 0) = 1.0;
  auto v = max_corner_norm_rank_one(sing, Mat(0.5 * Mat::Identity(2, 2)));
  CHECK_FALSE(v.faithful);

  CHECK_THROWS_AS(max_corner_norm_rank_one(Mat(Mat::Identity(2, 2)),
                                           Mat(0.5 * Mat::Identity(2, 2))),
                  NotDensity);
}

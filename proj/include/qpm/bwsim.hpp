#pragma once

#include <functional>
#include <vector>

#include "qpm/qorder.hpp"
#include "qpm/superop.hpp"

namespace qpm {

// Weight profile f on (0, infinity).  The default "indicator01" profile
// f = 1 on (0,1) is normalized and unbounded, and every integral below has
// a closed form for it; sampled profiles fall back to quadrature of a
// piecewise-linear interpolant.
struct WeightProfile {
  enum class Kind { Indicator01, Sampled };
  Kind kind = Kind::Indicator01;
  std::vector<double> x;   // sampled: strictly increasing grid
  std::vector<Complex> f;  // sampled: values at the grid points

  static WeightProfile indicator01() { return {}; }
  static WeightProfile sampled(std::vector<double> x, std::vector<Complex> f);

  Complex eval(double t) const;
  double support_hi() const;  // integrals beyond this point are negligible
  double norm_sq() const;     // integral of |f|^2
};

struct TruncatedWeight {
  double t = 0.0;
  double nu_I = 0.0;  // nu_t(I)     = int_t^inf |f|^2/(1-e^{-x}) dx
  double s_t = 0.0;   // nu_t(L(1))  = int_t^inf e^{-x}|f|^2/(1-e^{-x}) dx
  bool degenerate = false;  // truncation past the support: weight is bounded
};

// Scalar function with compact working support, used for the dyad legs.
struct Func {
  std::function<Complex(double)> eval;
  double lo = 0.0;
  double hi = 0.0;
};

// A = M (x) |u><v|: the operand class the boundary maps evaluate on.
struct GBROperand {
  Mat M;
  Func u, v;
};

TruncatedWeight truncated_values(const WeightProfile& spec, double t);
// Quadrature evaluation regardless of profile kind (oracle for closed forms).
TruncatedWeight truncated_values_quadrature(const WeightProfile& spec, double t);

// Checks that the profile is normalized (||f||^2 = 1) and that the weight is
// unbounded: the head integral of |f|^2/(1-e^{-x}) over (0, 0.1] must exceed
// ten times the tail analogue.
bool profile_admissible(const WeightProfile& spec);

// Inner product (h_t, u) with h_t(x) = f(x)/sqrt(1-e^{-x}) for x > t.
Complex ht_inner(const WeightProfile& spec, double t, const Func& u);

// Omega_{nu_t}(A) for A = M (x) |u><v|: entries M_ij (h_t, u)(v, h_t).
Mat gbr_omega(const WeightProfile& spec, double t, const GBROperand& A);

// pi_t^#(A) = phi (I + s_t phi)^{-1} (Omega_{nu_t}(A)).
Mat gbr_apply(const SuperOp& phi, const WeightProfile& spec, double t,
              const GBROperand& A);

struct BoundRow {
  double t, nu_I, s_t, bound;
  bool degenerate;
};

std::vector<BoundRow> gbr_norm_bound(const SuperOp& phi,
                                     const WeightProfile& spec,
                                     const std::vector<double>& t_grid);

struct DecayRow {
  double b, s_b, bound, norm;
};

// Norms of pi_b^#(A) for b below the support threshold t_fixed of A's legs;
// asserts the 1/(1+s_b) bound and monotone decay toward zero.
std::vector<DecayRow> normal_spine_decay(const SuperOp& phi,
                                         const WeightProfile& spec,
                                         double t_fixed,
                                         const std::vector<double>& b_grid,
                                         const GBROperand& A);

}  // namespace qpm

#include "qpm/bwsim.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace qpm {

namespace {

using boost::math::quadrature::gauss_kronrod;

double integrate_real(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-10) {
  if (b <= a) return 0.0;
  double err = 0.0;
  double val;
  try {
    val = gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &err);
  } catch (const std::exception& e) {
    throw QuadratureFailure(std::string("quadrature: ") + e.what());
  }
  if (err > 1e-7)
    throw QuadratureFailure("quadrature: error estimate " + std::to_string(err));
  return val;
}

Complex integrate_complex(const std::function<Complex(double)>& f, double a,
                          double b) {
  double re = integrate_real([&](double x) { return f(x).real(); }, a, b);
  double im = integrate_real([&](double x) { return f(x).imag(); }, a, b);
  return {re, im};
}

}  // namespace

WeightProfile WeightProfile::sampled(std::vector<double> xs,
                                     std::vector<Complex> fs) {
  if (xs.size() != fs.size() || xs.size() < 2)
    throw Error("WeightProfile::sampled: need matching grids of length >= 2");
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1])
      throw Error("WeightProfile::sampled: grid must be strictly increasing");
  if (xs.front() <= 0.0)
    throw Error("WeightProfile::sampled: grid must lie in (0, infinity)");
  WeightProfile p;
  p.kind = Kind::Sampled;
  p.x = std::move(xs);
  p.f = std::move(fs);
  return p;
}

Complex WeightProfile::eval(double t) const {
  if (kind == Kind::Indicator01) return (t > 0.0 && t < 1.0) ? 1.0 : 0.0;
  if (t <= x.front() || t >= x.back()) {
    if (t == x.front()) return f.front();
    if (t == x.back()) return f.back();
    return 0.0;
  }
  auto it = std::upper_bound(x.begin(), x.end(), t);
  size_t i = size_t(it - x.begin());
  double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * f[i - 1] + w * f[i];
}

double WeightProfile::support_hi() const {
  return kind == Kind::Indicator01 ? 1.0 : x.back();
}

double WeightProfile::norm_sq() const {
  if (kind == Kind::Indicator01) return 1.0;
  return integrate_real([&](double t) { return std::norm(eval(t)); },
                        x.front(), x.back());
}

TruncatedWeight truncated_values_quadrature(const WeightProfile& spec,
                                            double t) {
  TruncatedWeight w;
  w.t = t;
  double hi = spec.support_hi();
  if (t >= hi) {
    w.degenerate = true;
    return w;
  }
  w.nu_I = integrate_real(
      [&](double x) { return std::norm(spec.eval(x)) / (1.0 - std::exp(-x)); },
      t, hi);
  w.s_t = integrate_real(
      [&](double x) {
        return std::exp(-x) * std::norm(spec.eval(x)) / (1.0 - std::exp(-x));
      },
      t, hi);
  return w;
}

TruncatedWeight truncated_values(const WeightProfile& spec, double t) {
  if (t <= 0.0) throw Error("truncated_values: t must be positive");
  if (spec.kind == WeightProfile::Kind::Indicator01) {
    TruncatedWeight w;
    w.t = t;
    if (t >= 1.0) {
      w.degenerate = true;  // s_t = 0: the truncated weight is bounded
      return w;
    }
    w.s_t = std::log((1.0 - std::exp(-1.0)) / (1.0 - std::exp(-t)));
    w.nu_I = w.s_t + (1.0 - t);
    return w;
  }
  return truncated_values_quadrature(spec, t);
}

bool profile_admissible(const WeightProfile& spec) {
  if (std::abs(spec.norm_sq() - 1.0) > 1e-8) return false;
  if (spec.kind == WeightProfile::Kind::Indicator01) return true;  // divergent
  auto density = [&](double x) {
    return std::norm(spec.eval(x)) / (1.0 - std::exp(-x));
  };
  // integrate only where the interpolant is supported to keep the
  // integrand smooth for the adaptive rule
  double lo = spec.x.front(), hi = spec.support_hi();
  double head = lo < 0.1 ? integrate_real(density, lo, std::min(0.1, hi)) : 0.0;
  double tail = hi > 0.1 ? integrate_real(density, std::max(0.1, lo), hi) : 0.0;
  return head > 10.0 * tail;
}

Complex ht_inner(const WeightProfile& spec, double t, const Func& u) {
  double a = std::max(t, u.lo);
  double b = std::min(spec.support_hi(), u.hi);
  if (b <= a) return 0.0;
  return integrate_complex(
      [&](double x) {
        Complex h = spec.eval(x) / std::sqrt(1.0 - std::exp(-x));
        return std::conj(h) * u.eval(x);
      },
      a, b);
}

Mat gbr_omega(const WeightProfile& spec, double t, const GBROperand& A) {
  Complex hu = ht_inner(spec, t, A.u);
  // (v, h_t) = conj((h_t, v))
  Complex vh = std::conj(ht_inner(spec, t, A.v));
  return A.M * (hu * vh);
}

Mat gbr_apply(const SuperOp& phi, const WeightProfile& spec, double t,
              const GBROperand& A) {
  if (!phi.is_unital()) throw NotUnital("gbr_apply: phi(I) != I");
  if (A.M.rows() != phi.dim_in() || A.M.cols() != phi.dim_in())
    throw DimensionMismatch("gbr_apply: operand dimension mismatch");
  TruncatedWeight w = truncated_values(spec, t);
  Mat omega = gbr_omega(spec, t, A);
  return resolvent_subordinate(phi, w.s_t).apply(omega);
}

std::vector<BoundRow> gbr_norm_bound(const SuperOp& phi,
                                     const WeightProfile& spec,
                                     const std::vector<double>& t_grid) {
  if (!phi.is_unital()) throw NotUnital("gbr_norm_bound: phi(I) != I");
  std::vector<BoundRow> rows;
  for (double t : t_grid) {
    TruncatedWeight w = truncated_values(spec, t);
    double bound = w.nu_I / (1.0 + w.s_t);
    if (bound > 1.0 + 1e-10)
      throw ContractionViolated("gbr_norm_bound: nu_t(I)/(1+s_t) = " +
                                std::to_string(bound) + " at t = " +
                                std::to_string(t));
    rows.push_back({t, w.nu_I, w.s_t, bound, w.degenerate});
  }
  return rows;
}

std::vector<DecayRow> normal_spine_decay(const SuperOp& phi,
                                         const WeightProfile& spec,
                                         double t_fixed,
                                         const std::vector<double>& b_grid,
                                         const GBROperand& A) {
  if (!phi.is_unital()) throw NotUnital("normal_spine_decay: phi(I) != I");
  if (A.u.lo < t_fixed - 1e-9 || A.v.lo < t_fixed - 1e-9)
    throw SupportViolation(
        "normal_spine_decay: operand legs must vanish on (0, t_fixed)");

  // The legs live beyond t_fixed, so Omega_{nu_b}(A) = Omega_{nu_t}(A) for
  // every b < t_fixed; only the resolvent changes.
  Mat omega = gbr_omega(spec, t_fixed, A);
  double omega_norm = spectral_norm(omega);

  std::vector<double> bs = b_grid;
  std::sort(bs.begin(), bs.end(), std::greater<double>());

  std::vector<DecayRow> rows;
  for (double b : bs) {
    if (b <= 0.0 || b >= t_fixed)
      throw Error("normal_spine_decay: b_grid must lie in (0, t_fixed)");
    TruncatedWeight w = truncated_values(spec, b);
    Mat out = resolvent_subordinate(phi, w.s_t).apply(omega);
    double norm = spectral_norm(out);
    double bound = omega_norm / (1.0 + w.s_t);
    if (norm > bound * (1.0 + 1e-8))
      throw ContractionViolated("normal_spine_decay: norm exceeds bound at b=" +
                                std::to_string(b));
    if (!rows.empty() && norm > rows.back().norm * (1.0 + 1e-8))
      throw NoConvergence("normal_spine_decay: norms not monotone at b=" +
                          std::to_string(b));
    rows.push_back({b, w.s_t, bound, norm});
  }
  return rows;
}

}  // namespace qpm

#pragma once

#include <compare>

#include "fermicov/common.hpp"

namespace fermicov {

/// A grid point of the discrete torus, indexed by k in {1, ..., 2n} with
/// alpha = -beta + k beta / n. Index 2n is the point beta (identified with -beta).
struct TorusPoint {
  int index = 0;
  auto operator<=>(const TorusPoint&) const = default;
};

/// T_n = {-beta + k beta/n : k = 1..2n} inside (-beta, beta]. All mod-2beta
/// arithmetic runs on integer indices.
class DiscreteTorus {
 public:
  DiscreteTorus(double beta, int n);

  double beta() const { return beta_; }
  int n() const { return n_; }
  int size() const { return 2 * n_; }
  /// n^{-1} beta
  double spacing() const { return beta_ / n_; }
  /// beta^{-1} n
  double inverse_spacing() const { return n_ / beta_; }

  TorusPoint point(int k) const;
  /// Grid point with alpha = steps * beta / n, steps taken mod 2n.
  TorusPoint from_steps(long steps) const;
  TorusPoint zero() const { return {n_}; }
  TorusPoint beta_point() const { return {2 * n_}; }

  double value(TorusPoint p) const;
  /// alpha * n / beta as an integer in {1-n, ..., n}.
  int steps(TorusPoint p) const { return p.index - n_; }
  /// Locates alpha on the grid (within 1e-9 spacing); throws DomainError otherwise.
  TorusPoint locate(double alpha) const;

  TorusPoint add(TorusPoint a, TorusPoint b) const;
  TorusPoint sub(TorusPoint a, TorusPoint b) const;
  TorusPoint shift(TorusPoint a, long steps) const;
  /// alpha + beta
  TorusPoint antipode(TorusPoint a) const { return shift(a, n_); }
  /// alpha in (-beta, 0]
  bool in_lower_half(TorusPoint a) const { return a.index <= n_; }
  /// alpha in [0, beta)
  bool in_upper_window(TorusPoint a) const { return a.index >= n_ && a.index < 2 * n_; }

  bool operator==(const DiscreteTorus& other) const = default;

 private:
  double beta_;
  int n_;
};

/// Antiperiodic function T_n -> C^dim. All 2n values are stored; column k-1
/// holds the value at grid index k, and values(k+n) == -values(k) exactly.
class APFunction {
 public:
  APFunction(const DiscreteTorus& torus, int dim);

  /// values: dim x 2n. Throws DomainError unless exactly antiperiodic.
  static APFunction from_values(const DiscreteTorus& torus, CMatrix values);
  /// half: dim x n, the values on (-beta, 0] (indices 1..n); extended by antiperiodicity.
  static APFunction from_half(const DiscreteTorus& torus, const CMatrix& half);

  const DiscreteTorus& torus() const { return torus_; }
  int dim() const { return static_cast<int>(values_.rows()); }
  const CMatrix& values() const { return values_; }

  CVector at(TorusPoint p) const { return values_.col(p.index - 1); }
  cplx at(TorusPoint p, int component) const { return values_(component, p.index - 1); }
  /// Sets the value at p and -value at p + beta.
  void set(TorusPoint p, const CVector& v);

  bool is_antiperiodic() const;

 private:
  APFunction(const DiscreteTorus& torus, CMatrix values);

  DiscreteTorus torus_;
  CMatrix values_;
};

/// n^{-1} beta sum_alpha <f1(alpha), f2(alpha)>, conjugate-linear in f1.
cplx inner(const APFunction& f1, const APFunction& f2);
double norm(const APFunction& f);

APFunction delta_ap(const DiscreteTorus& torus);

/// (g * f)(alpha) = n^{-1} beta sum_tau g(alpha - tau) f(tau), f scalar.
APFunction convolve(const APFunction& g, const APFunction& f);

/// (d f)(alpha) = beta^{-1} n (f(alpha + n^{-1} beta) - f(alpha)).
APFunction discrete_derivative(const APFunction& f);

/// phi-hat(alpha) = delta_ap(alpha) phi.
APFunction embed_vector(const CVector& phi, const DiscreteTorus& torus);

/// (A-hat f)(alpha) = A f(alpha).
APFunction apply_fiberwise(const CMatrix& a, const APFunction& f);

/// Scalar derivative on the n independent coordinates f(1..n) of an
/// antiperiodic function (f(k+n) = -f(k)). Same spectrum as d on l2_ap.
CMatrix antiperiodic_derivative_matrix(const DiscreteTorus& torus);

}  // namespace fermicov

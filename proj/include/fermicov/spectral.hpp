#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fermicov/common.hpp"
#include "fermicov/torus.hpp"

namespace fermicov {

/// Dense Hermitian matrix, symmetrized on construction.
class HermitianMatrix {
 public:
  /// Throws DomainError if ||A - A*||_max > 1e-12 * max(1, ||A||_max).
  explicit HermitianMatrix(const CMatrix& a);
  static HermitianMatrix diagonal(const RVector& d);

  int dim() const { return static_cast<int>(a_.rows()); }
  const CMatrix& matrix() const { return a_; }

 private:
  CMatrix a_;
};

/// H = U diag(lambda) U*, eigenvalues ascending, each eigenvector's
/// largest-magnitude component real positive.
struct SpectralData {
  RVector eigenvalues;
  CMatrix eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  CMatrix reconstruct() const;
};

SpectralData eig_hermitian(const HermitianMatrix& h);

/// sgn(x) = 1 for x >= 0, -1 otherwise.
inline int sgn(double x) { return x >= 0.0 ? 1 : -1; }

/// |lambda - beta^{-1} n| <= 1e-12 beta^{-1} n
bool is_singular_eigenvalue(double lambda, const DiscreteTorus& torus);

/// -beta^{-1} n ln|1 - n^{-1} beta lambda| off the singular point, eta on it.
double bernoulli_euler_F(double lambda, const DiscreteTorus& torus, double eta);

/// sgn(1 - n^{-1} beta lambda) with sgn(0) = +1; the whole singular band
/// counts as 0, so a solver returning beta^{-1} n off by an ulp gets +1.
inline int sign_factor(double lambda, const DiscreteTorus& torus) {
  if (is_singular_eigenvalue(lambda, torus)) return 1;
  return sgn(1.0 - torus.spacing() * lambda);
}

/// sum_j f(lambda_j) v_j <v_j, x>
template <class F>
CVector apply_scalar_function(F&& f, const SpectralData& s, const CVector& x) {
  if (x.size() != s.dim()) throw DomainError("apply_scalar_function: dimension mismatch");
  CVector coeff = s.eigenvectors.adjoint() * x;
  for (int j = 0; j < s.dim(); ++j) coeff(j) *= f(s.eigenvalues(j));
  return s.eigenvectors * coeff;
}

/// U f(lambda) U*
template <class F>
CMatrix matrix_function(F&& f, const SpectralData& s) {
  CMatrix scaled = s.eigenvectors;
  for (int j = 0; j < s.dim(); ++j) scaled.col(j) *= f(s.eigenvalues(j));
  return scaled * s.eigenvectors.adjoint();
}

/// E^k x with E = sgn(1 - n^{-1} beta H); E is an involution.
CVector sign_power(const SpectralData& s, const DiscreteTorus& torus, long k, const CVector& x);

/// Cutoff functions chi: R -> [0, inf).
class CutoffSpec {
 public:
  struct One {};
  struct Indicator {
    double lo, hi;
  };
  struct Gaussian {
    double center, width;
  };
  struct Table {
    std::vector<std::pair<double, double>> points;  // sorted by lambda
  };
  using Kind = std::variant<One, Indicator, Gaussian, Table>;

  CutoffSpec() : kind_(One{}) {}
  static CutoffSpec one() { return CutoffSpec(); }
  static CutoffSpec indicator(double lo, double hi);
  static CutoffSpec gaussian(double center, double width);
  /// Nearest-point lookup on (lambda, chi) pairs; values must be >= 0.
  static CutoffSpec table(std::vector<std::pair<double, double>> points);

  double operator()(double lambda) const;
  const Kind& kind() const { return kind_; }
  std::string name() const;

 private:
  explicit CutoffSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

}  // namespace fermicov

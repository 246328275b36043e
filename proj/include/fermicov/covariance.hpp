#pragma once

#include <optional>
#include <vector>

#include "fermicov/common.hpp"
#include "fermicov/spectral.hpp"
#include "fermicov/torus.hpp"

namespace fermicov {

/// The kernel g_lambda on T_n: the antiperiodic solution of
/// (d + lambda) g = -2 delta_ap. values(k-1) is g at grid index k.
struct KernelEval {
  double lambda = 0.0;
  DiscreteTorus torus{1.0, 2};
  std::optional<double> eta;
  RVector values;

  double at(TorusPoint p) const { return values(p.index - 1); }
  /// max_alpha |d g(alpha) + lambda g(alpha) + 2 delta_ap(alpha)|
  double residual() const;
};

/// g_lambda at one grid point. With eta absent and lambda = beta^{-1} n the
/// closed limit is used (-1 at beta/n, +1 at beta/n - beta, 0 elsewhere).
double kernel_value(double lambda, const DiscreteTorus& torus, std::optional<double> eta, TorusPoint alpha);

KernelEval kernel_g(double lambda, const DiscreteTorus& torus, std::optional<double> eta = std::nullopt);

/// e^{-alpha lambda} / (1 + e^{beta lambda}) for alpha in (-beta, 0].
double kernel_g_continuum(double lambda, double beta, double alpha);

/// sum_j g_{lambda_j}(alpha) chi(lambda_j) <phi2, v_j><v_j, phi1>
cplx covariance_entry(const SpectralData& h, const CutoffSpec& chi, const CVector& phi1, const CVector& phi2,
                      TorusPoint alpha, const DiscreteTorus& torus, std::optional<double> eta = std::nullopt);

/// One (alpha_q, phi_q, j_q) triple. color is 0-based into M.
struct PointSpec {
  TorusPoint alpha;
  CVector phi;
  int color = 0;
};

/// A determinant-bound test case; points holds 2N entries, the first N
/// are the "creator" slots q = 1..N and the rest q = N+1..2N.
struct BoundInstance {
  HermitianMatrix H{CMatrix::Identity(1, 1)};
  DiscreteTorus torus{1.0, 2};
  CutoffSpec chi;
  RMatrix M = RMatrix::Identity(1, 1);
  std::vector<PointSpec> points;

  int N() const { return static_cast<int>(points.size()) / 2; }
  int d() const { return H.dim(); }
  int m() const { return static_cast<int>(M.rows()); }
  /// Throws DomainError on any violated invariant.
  void validate() const;
};

/// The N x N matrix whose determinant covariance_det returns.
CMatrix covariance_matrix(const BoundInstance& inst, const SpectralData& h, std::optional<double> eta = std::nullopt);

/// prod_k ||row_k||: Hadamard bound on |det|, also the scale of its roundoff.
double hadamard_scale(const CMatrix& a);

/// det_{k,l} [ M_{j_k, j_{N+l}} covariance_entry(phi_k, phi_{N+l}, alpha_k - alpha_{N+l}) ]
cplx covariance_det(const BoundInstance& inst, std::optional<double> eta = std::nullopt);
cplx covariance_det(const BoundInstance& inst, const SpectralData& h, std::optional<double> eta = std::nullopt);

/// prod_q ||sqrt(chi(H)) phi_q|| M_{j_q j_q}^{1/2}
double determinant_bound(const BoundInstance& inst);
double determinant_bound(const BoundInstance& inst, const SpectralData& h);

/// Dense matrix of C_H = -2 (d + H-hat)^{-1} in the coordinates
/// (f(k), component c) -> k*d + c, k = 1..n. The l2_ap norm is a constant
/// multiple of the Euclidean one here, so operator norms agree.
CMatrix covariance_operator_matrix(const HermitianMatrix& h, const DiscreteTorus& torus);

struct GramRow {
  int n = 0;
  double cov_norm = 0.0;
  double embed_norm = 0.0;
  double gram_factor = 0.0;  // ||C_H||^{1/2} ||e1-hat||
  std::vector<double> per_eigenvalue_norms;
};

struct GramReport {
  std::vector<GramRow> rows;
  bool has_zero_mode = false;
  double cov_exponent = 0.0;
  double embed_exponent = 0.0;
  double gram_exponent = 0.0;
};

/// Operator norm of C_H and ||e1-hat|| over a list of tori, with fitted
/// log-log growth exponents in n. Without an eigenvalue within 1e-9 of 0
/// the flag is cleared but the numbers are still computed.
GramReport gram_norm_demo(const HermitianMatrix& h, const std::vector<DiscreteTorus>& tori);

/// Least-squares slope of log y against log x.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// max_i n^{-1} beta sum_tau sum_q |<phi_q, (C_H chi(H) phi_i-hat)(tau)>| over
/// an orthonormal basis. Finite-n snapshot; no limit is taken.
double decay_parameter(const SpectralData& h, const CutoffSpec& chi, const std::vector<CVector>& basis,
                       const DiscreteTorus& torus);

}  // namespace fermicov

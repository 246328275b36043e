#pragma once

#include <limits>
#include <vector>

#include "fermicov/car_fock.hpp"
#include "fermicov/common.hpp"
#include "fermicov/covariance.hpp"

namespace fermicov {

/// Element of B(F) viewed as a Hilbert-Schmidt vector, <A, B> = Tr(A* B).
struct HSVector {
  FockSpace space{1};
  CMatrix matrix;

  double norm() const { return matrix.norm(); }
};

cplx hs_inner(const HSVector& a, const HSVector& b);

/// Modular data of a faithful state: Delta X = D X D^{-1}, all computed in
/// the eigenbasis of D through log-weights.
class ModularData {
 public:
  /// Throws NumericalError unless every weight of D is a normal double.
  explicit ModularData(const QuasiFreeState& state);

  const QuasiFreeState& state() const { return state_; }
  double beta() const { return state_.beta; }

  /// D^z, guarded against entries above 1e300.
  CMatrix power(cplx z) const;
  /// eta = D^{1/2}
  HSVector eta() const;

  CMatrix to_eigenbasis(const CMatrix& x) const { return state_.eigvecs.adjoint() * x * state_.eigvecs; }
  CMatrix from_eigenbasis(const CMatrix& x) const { return state_.eigvecs * x * state_.eigvecs.adjoint(); }
  const RVector& log_weights() const { return state_.log_weights; }

 private:
  QuasiFreeState state_;
};

/// Delta^z X = D^z X D^{-z}. Throws NumericalError if an entry would exceed 1e300.
HSVector modular_power(const ModularData& mod, cplx z, const HSVector& x);

struct ChainLink {
  cplx z;
  CMatrix x;
};

/// Delta^{z_1/beta} x_1 ... Delta^{z_N/beta} x_N eta for (z_q) in the tube
/// Re z_q >= 0, sum Re z_q <= beta/2 (slack 1e-12), evaluated as
/// D^{z_1/beta} x_1 ... D^{z_N/beta} x_N D^{1/2 - sum z_q/beta}.
HSVector correlation_vector(const ModularData& mod, const std::vector<ChainLink>& chain);

bool in_tube(const std::vector<cplx>& z, double kappa);

/// (Tr |X|^s)^{1/s}; s = infinity gives the operator norm. Throws for s < 1.
double schatten_norm(const CMatrix& x, double s);
inline constexpr double kSchattenInf = std::numeric_limits<double>::infinity();

struct RepresentationResult {
  cplx inner_product_form;
  cplx trace_form;
  int split = 0;  // 0-based position, 2N if absent
  int sign = 1;
  double eta_used = 0.0;
  bool clamped = false;
  int modes = 0;
};

/// Covariance determinant as (-1)^pi <L, R> of two modular correlation
/// vectors on Fock space over h (x) M, with H replaced by F_eta(H).
/// eta is clamped to 700/beta (reported). Throws CapacityError above the Fock cap.
RepresentationResult determinant_representation(const BoundInstance& inst, double eta);

}  // namespace fermicov

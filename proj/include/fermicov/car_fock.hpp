#pragma once

#include <functional>
#include <vector>

#include "fermicov/common.hpp"
#include "fermicov/spectral.hpp"

namespace fermicov {

/// Dense-Fock mode cap: FERMICOV_FOCK_CAP if set (1..14), else 10.
int fock_cap();
constexpr int kFockHardCap = 14;

/// Fermionic Fock space over D modes; occupation basis, bit i of the
/// basis index is the occupation of mode i.
class FockSpace {
 public:
  /// Throws DomainError for D outside 1..14 and CapacityError above fock_cap().
  explicit FockSpace(int modes);
  int modes() const { return modes_; }
  long dim() const { return 1L << modes_; }
  bool operator==(const FockSpace&) const = default;

 private:
  int modes_;
};

struct FockOperator {
  FockSpace space;
  CMatrix matrix;

  FockOperator adjoint() const { return {space, matrix.adjoint()}; }
  FockOperator operator*(const FockOperator& o) const { return {space, matrix * o.matrix}; }
  FockOperator operator+(const FockOperator& o) const { return {space, matrix + o.matrix}; }
  FockOperator operator-(const FockOperator& o) const { return {space, matrix - o.matrix}; }
  static FockOperator identity(const FockSpace& s) { return {s, CMatrix::Identity(s.dim(), s.dim())}; }
};

/// {A, B} = AB + BA
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

/// Mode annihilators c_0..c_{D-1}.
std::vector<FockOperator> jordan_wigner(int modes);

/// a(psi) = sum_i conj(psi_i) c_i (antilinear in psi).
FockOperator annihilator(const FockSpace& space, const CVector& psi);
/// a+(psi) = a(psi)*
FockOperator creator(const FockSpace& space, const CVector& psi);

/// dGamma(h) = sum_ij h_ij c_i^+ c_j
FockOperator second_quantize(const HermitianMatrix& h);

/// Gauge-invariant quasi-free state rho(X) = Tr(D X), D = e^{-beta dGamma(h)} / Z.
struct QuasiFreeState {
  FockSpace space{1};
  double beta = 1.0;
  CMatrix h;        // one-particle Hamiltonian
  CMatrix symbol;   // S = (1 + e^{beta h})^{-1}
  CMatrix density;  // D
  CMatrix eigvecs;  // D = V diag(exp(log_weights)) V*
  RVector log_weights;

  cplx expect(const CMatrix& x) const { return (density * x).trace(); }
};

/// Throws NumericalError if the normalized weights are not finite.
QuasiFreeState quasifree_density(const HermitianMatrix& h, double beta);
/// State with prescribed symbol 0 < S < 1 at beta = 1 (h = ln((1 - S) / S)).
QuasiFreeState quasifree_from_symbol(const HermitianMatrix& S);

/// rho(O_pi(a+(Psi_1)..a+(Psi_N1), a(Psi_{N1+N2})..a(Psi_{N1+1}))).
/// pi is 0-based: pi[slot] is the position of argument slot in the product.
struct MonomialSpec {
  int N1 = 0;
  int N2 = 0;
  std::vector<CVector> psi;
  Permutation pi;

  /// Label of the vector in argument slot i.
  int label_of_slot(int slot) const { return slot < N1 ? slot : N1 + N2 - 1 - (slot - N1); }
};

/// (-1)^pi Tr(D A_{pi^{-1}(1)} ... A_{pi^{-1}(N1+N2)}) by explicit products.
cplx expect_monomial(const QuasiFreeState& state, const MonomialSpec& spec);

/// two_point(k, l, creator_first) for k, l in 0..N-1.
using TwoPointFn = std::function<cplx(int, int, bool)>;

/// det_{k,l} two_point(k, l, pi(k) < pi(slot of Psi_{N+l})); the annihilator
/// slots are reversed, so Psi_{N+l} sits in slot 2N-1-l (0-based).
cplx wick_determinant(const TwoPointFn& two_point, int N, const Permutation& pi);

/// <Psi_{N+l}, S Psi_k> if creator_first, else -<Psi_{N+l}, (1-S) Psi_k>.
TwoPointFn symbol_two_point(const CMatrix& symbol, const std::vector<CVector>& psi, int N);

}  // namespace fermicov

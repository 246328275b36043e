#include "fermicov/car_fock.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/LU>

#include "fermicov/kernels.hpp"

namespace fermicov {

int fock_cap() {
  const char* env = std::getenv("FERMICOV_FOCK_CAP");
  if (!env || !*env) return 10;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > kFockHardCap)
    throw DomainError("FERMICOV_FOCK_CAP must be an integer in 1..14, got '" + std::string(env) + "'");
  return static_cast<int>(v);
}

FockSpace::FockSpace(int modes) : modes_(modes) {
  if (modes < 1 || modes > kFockHardCap)
    throw DomainError("FockSpace: mode count must lie in 1..14, got " + std::to_string(modes));
  if (modes > fock_cap())
    throw CapacityError("FockSpace: " + std::to_string(modes) + " modes exceeds the Fock cap " +
                        std::to_string(fock_cap()));
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

std::vector<FockOperator> jordan_wigner(int modes) {
  const FockSpace space(modes);
  std::vector<FockOperator> out;
  for (int i = 0; i < modes; ++i) {
    CVector e = CVector::Zero(modes);
    e(i) = 1.0;
    out.push_back({space, kernels::omp::annihilator(e)});
  }
  return out;
}

FockOperator annihilator(const FockSpace& space, const CVector& psi) {
  if (psi.size() != space.modes()) throw DomainError("annihilator: vector length must equal the mode count");
  return {space, kernels::omp::annihilator(psi)};
}

FockOperator creator(const FockSpace& space, const CVector& psi) { return annihilator(space, psi).adjoint(); }

FockOperator second_quantize(const HermitianMatrix& h) {
  const FockSpace space(h.dim());
  return {space, kernels::omp::dgamma(h.matrix())};
}

QuasiFreeState quasifree_density(const HermitianMatrix& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("quasifree_density: beta must be positive");
  QuasiFreeState st;
  st.space = FockSpace(h.dim());
  st.beta = beta;
  st.h = h.matrix();

  const SpectralData one = eig_hermitian(h);
  st.symbol = matrix_function(
      [&](double l) {
        const double b = beta * l;
        return b > 0.0 ? std::exp(-b) / (1.0 + std::exp(-b)) : 1.0 / (1.0 + std::exp(b));
      },
      one);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(kernels::omp::dgamma(h.matrix()));
  if (es.info() != Eigen::Success) throw NumericalError("quasifree_density: eigen-solver failed on dGamma");
  const RVector& w = es.eigenvalues();
  // shift by the ground energy so the largest weight is exactly 1
  RVector lw = -beta * (w.array() - w(0));
  const double log_z = std::log((lw.array().exp()).sum());
  lw.array() -= log_z;
  if (!lw.allFinite()) throw NumericalError("quasifree_density: Boltzmann weights not finite; reduce beta*|h|");
  st.eigvecs = es.eigenvectors();
  st.log_weights = lw;
  st.density = st.eigvecs * lw.array().exp().matrix().cast<cplx>().asDiagonal() * st.eigvecs.adjoint();
  return st;
}

QuasiFreeState quasifree_from_symbol(const HermitianMatrix& S) {
  const SpectralData s = eig_hermitian(S);
  for (int j = 0; j < s.dim(); ++j)
    if (!(s.eigenvalues(j) > 0.0 && s.eigenvalues(j) < 1.0))
      throw DomainError("quasifree_from_symbol: need 0 < S < 1");
  return quasifree_density(HermitianMatrix(matrix_function([](double x) { return std::log((1.0 - x) / x); }, s)), 1.0);
}

cplx expect_monomial(const QuasiFreeState& state, const MonomialSpec& spec) {
  const int total = spec.N1 + spec.N2;
  if (spec.N1 < 0 || spec.N2 < 0 || static_cast<int>(spec.psi.size()) != total)
    throw DomainError("expect_monomial: need N1 + N2 vectors");
  if (static_cast<int>(spec.pi.size()) != total || !is_permutation(spec.pi))
    throw DomainError("expect_monomial: pi is not a permutation of the argument slots");
  const Permutation slot_at = inverse_permutation(spec.pi);
  CMatrix prod = state.density;
  for (int pos = 0; pos < total; ++pos) {
    const int slot = slot_at[pos];
    const CVector& v = spec.psi[spec.label_of_slot(slot)];
    const FockOperator a = annihilator(state.space, v);
    prod = prod * (slot < spec.N1 ? CMatrix(a.matrix.adjoint()) : a.matrix);
  }
  return static_cast<double>(permutation_sign(spec.pi)) * prod.trace();
}

cplx wick_determinant(const TwoPointFn& two_point, int N, const Permutation& pi) {
  if (N < 1 || static_cast<int>(pi.size()) != 2 * N || !is_permutation(pi))
    throw DomainError("wick_determinant: pi must be a permutation of 2N slots");
  CMatrix a(N, N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) a(k, l) = two_point(k, l, pi[k] < pi[2 * N - 1 - l]);
  return a.determinant();
}

TwoPointFn symbol_two_point(const CMatrix& symbol, const std::vector<CVector>& psi, int N) {
  if (static_cast<int>(psi.size()) != 2 * N) throw DomainError("symbol_two_point: need 2N vectors");
  return [symbol, psi, N](int k, int l, bool creator_first) -> cplx {
    const CVector& u = psi[k];
    const CVector& v = psi[N + l];
    const cplx su = v.dot(symbol * u);
    return creator_first ? su : -(v.dot(u) - su);
  };
}

}  // namespace fermicov

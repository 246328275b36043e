#pragma once

// Hot loops in two flavors with identical signatures: a serial reference
// and an OpenMP version. Both produce bit-identical results (each output
// entry is written by one thread, in the same accumulation order).

#include <optional>
#include <vector>

#include "fermicov/common.hpp"
#include "fermicov/torus.hpp"

namespace fermicov::kernels {

namespace serial {
/// dGamma(h) = sum_ij h_ij c_i^+ c_j on 2^D x 2^D, D = h.rows().
CMatrix dgamma(const CMatrix& h);
/// a(psi) = sum_i conj(psi_i) c_i.
CMatrix annihilator(const CVector& psi);
/// Row i holds g_{lambda_i} on the 2n grid points.
RMatrix kernel_table(const std::vector<double>& lambdas, const DiscreteTorus& torus, std::optional<double> eta);
}  // namespace serial

namespace omp {
CMatrix dgamma(const CMatrix& h);
CMatrix annihilator(const CVector& psi);
RMatrix kernel_table(const std::vector<double>& lambdas, const DiscreteTorus& torus, std::optional<double> eta);
}  // namespace omp

/// Jordan-Wigner sign (-1)^{number of occupied modes below i} in state s.
inline double jw_sign(unsigned s, int i) {
  return (__builtin_popcount(s & ((1u << i) - 1u)) & 1) ? -1.0 : 1.0;
}

}  // namespace fermicov::kernels

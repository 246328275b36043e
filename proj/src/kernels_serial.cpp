#include "fermicov/covariance.hpp"
#include "fermicov/kernels.hpp"

namespace fermicov::kernels::serial {

CMatrix dgamma(const CMatrix& h) {
  const int D = static_cast<int>(h.rows());
  const unsigned dim = 1u << D;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (unsigned s = 0; s < dim; ++s)
    for (int j = 0; j < D; ++j) {
      if (!(s & (1u << j))) continue;
      const unsigned s1 = s & ~(1u << j);
      const double sg1 = jw_sign(s, j);
      for (int i = 0; i < D; ++i) {
        if (s1 & (1u << i)) continue;
        out(s1 | (1u << i), s) += h(i, j) * (sg1 * jw_sign(s1, i));
      }
    }
  return out;
}

CMatrix annihilator(const CVector& psi) {
  const int D = static_cast<int>(psi.size());
  const unsigned dim = 1u << D;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (unsigned s = 0; s < dim; ++s)
    for (int i = 0; i < D; ++i)
      if (s & (1u << i)) out(s & ~(1u << i), s) += std::conj(psi(i)) * jw_sign(s, i);
  return out;
}

RMatrix kernel_table(const std::vector<double>& lambdas, const DiscreteTorus& torus, std::optional<double> eta) {
  RMatrix out(static_cast<int>(lambdas.size()), torus.size());
  for (size_t i = 0; i < lambdas.size(); ++i) out.row(i) = kernel_g(lambdas[i], torus, eta).values.transpose();
  return out;
}

}  // namespace fermicov::kernels::serial

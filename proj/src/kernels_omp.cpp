#include "fermicov/covariance.hpp"
#include "fermicov/kernels.hpp"

namespace fermicov::kernels::omp {

CMatrix dgamma(const CMatrix& h) {
  const int D = static_cast<int>(h.rows());
  const long dim = 1L << D;
  CMatrix out = CMatrix::Zero(dim, dim);
  // column s is owned by one thread
#pragma omp parallel for schedule(static)
  for (long ls = 0; ls < dim; ++ls) {
    const unsigned s = static_cast<unsigned>(ls);
    for (int j = 0; j < D; ++j) {
      if (!(s & (1u << j))) continue;
      const unsigned s1 = s & ~(1u << j);
      const double sg1 = jw_sign(s, j);
      for (int i = 0; i < D; ++i) {
        if (s1 & (1u << i)) continue;
        out(s1 | (1u << i), s) += h(i, j) * (sg1 * jw_sign(s1, i));
      }
    }
  }
  return out;
}

CMatrix annihilator(const CVector& psi) {
  const int D = static_cast<int>(psi.size());
  const long dim = 1L << D;
  CMatrix out = CMatrix::Zero(dim, dim);
#pragma omp parallel for schedule(static)
  for (long ls = 0; ls < dim; ++ls) {
    const unsigned s = static_cast<unsigned>(ls);
    for (int i = 0; i < D; ++i)
      if (s & (1u << i)) out(s & ~(1u << i), s) += std::conj(psi(i)) * jw_sign(s, i);
  }
  return out;
}

RMatrix kernel_table(const std::vector<double>& lambdas, const DiscreteTorus& torus, std::optional<double> eta) {
  const long rows = static_cast<long>(lambdas.size());
  RMatrix out(rows, torus.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < rows; ++i) out.row(i) = kernel_g(lambdas[i], torus, eta).values.transpose();
  return out;
}

}  // namespace fermicov::kernels::omp

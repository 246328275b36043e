#include "fermicov/random.hpp"

#include <Eigen/QR>

namespace fermicov {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CVector random_cvector(Rng& rng, int d) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

CMatrix random_unitary(Rng& rng, int d) {
  CMatrix a(d, d);
  for (int j = 0; j < d; ++j) a.col(j) = random_cvector(rng, d);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (std::abs(r(j, j)) > 0.0) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

CMatrix random_hermitian(Rng& rng, const RVector& eigs) {
  const CMatrix u = random_unitary(rng, static_cast<int>(eigs.size()));
  const CMatrix h = u * eigs.cast<cplx>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

CMatrix random_gue(Rng& rng, int d) {
  CMatrix a(d, d);
  for (int j = 0; j < d; ++j) a.col(j) = random_cvector(rng, d);
  return 0.5 * (a + a.adjoint());
}

RMatrix random_psd(Rng& rng, int m, int rank) {
  std::normal_distribution<double> g;
  RMatrix b(m, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < m; ++i) b(i, j) = g(rng);
  RMatrix p = b * b.transpose();
  return 0.5 * (p + p.transpose());
}

TreeGraph random_tree(Rng& rng, int m) {
  TreeGraph t;
  t.vertices = m;
  for (int v = 1; v < m; ++v) {
    const int u = uniform_int(rng, 0, v - 1);
    const double w = uniform(rng, 0.0, 1.0);
    t.edges.push_back({u, v, w});
  }
  return t;
}

CMatrix random_symbol(Rng& rng, int d, double lo, double hi) {
  RVector e(d);
  for (int i = 0; i < d; ++i) e(i) = uniform(rng, lo, hi);
  return random_hermitian(rng, e);
}

}  // namespace fermicov

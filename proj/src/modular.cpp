#include "fermicov/modular.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "fermicov/mspace.hpp"
#include "fermicov/ordering.hpp"

namespace fermicov {

namespace {

const double kLogGuard = std::log(1e300);

// Right-multiplies by diag(exp(w * lp)) in place.
void scale_columns(CMatrix& a, const RVector& lp, cplx w) {
  for (Eigen::Index k = 0; k < a.cols(); ++k) a.col(k) *= std::exp(w * lp(k));
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron_identity(const CMatrix& a, int r) {
  CMatrix out = CMatrix::Zero(a.rows() * r, a.cols() * r);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (int s = 0; s < r; ++s) out(i * r + s, j * r + s) = a(i, j);
  return out;
}

}  // namespace

cplx hs_inner(const HSVector& a, const HSVector& b) {
  if (!(a.space == b.space)) throw DomainError("hs_inner: Fock space mismatch");
  return (a.matrix.conjugate().cwiseProduct(b.matrix)).sum();
}

ModularData::ModularData(const QuasiFreeState& state) : state_(state) {
  const double floor = std::log(std::numeric_limits<double>::min());
  if (state_.log_weights.minCoeff() < floor)
    throw NumericalError("ModularData: density matrix is not numerically invertible (weight below 2.2e-308)");
}

CMatrix ModularData::power(cplx z) const {
  const RVector& lp = log_weights();
  for (Eigen::Index k = 0; k < lp.size(); ++k)
    if (z.real() * lp(k) > kLogGuard) throw NumericalError("modular power: entry would exceed 1e300");
  CMatrix v = state_.eigvecs;
  scale_columns(v, lp, z);
  return v * state_.eigvecs.adjoint();
}

HSVector ModularData::eta() const { return {state_.space, power(0.5)}; }

HSVector modular_power(const ModularData& mod, cplx z, const HSVector& x) {
  if (!(x.space == mod.state().space)) throw DomainError("modular_power: Fock space mismatch");
  const RVector& lp = mod.log_weights();
  CMatrix y = mod.to_eigenbasis(x.matrix);
  for (Eigen::Index k = 0; k < y.rows(); ++k)
    for (Eigen::Index l = 0; l < y.cols(); ++l) {
      const double mag = std::abs(y(k, l));
      if (mag == 0.0) continue;
      const double re = z.real() * (lp(k) - lp(l));
      if (std::log(mag) + re > kLogGuard) throw NumericalError("modular_power: entry would exceed 1e300");
      y(k, l) *= std::exp(z * (lp(k) - lp(l)));
    }
  return {x.space, mod.from_eigenbasis(y)};
}

bool in_tube(const std::vector<cplx>& z, double kappa) {
  const double slack = 1e-12 * std::max(1.0, kappa);
  double sum = 0.0;
  for (const cplx& w : z) {
    if (w.real() < -slack) return false;
    sum += w.real();
  }
  return sum <= kappa + slack;
}

HSVector correlation_vector(const ModularData& mod, const std::vector<ChainLink>& chain) {
  const double beta = mod.beta();
  std::vector<cplx> zs;
  for (const auto& link : chain) zs.push_back(link.z);
  if (!in_tube(zs, 0.5 * beta)) throw DomainError("correlation_vector: chain parameters outside the tube");
  const RVector& lp = mod.log_weights();
  const long dim = mod.state().space.dim();
  CMatrix acc = CMatrix::Identity(dim, dim);
  cplx total = 0.0;
  for (const auto& link : chain) {
    if (link.x.rows() != dim || link.x.cols() != dim) throw DomainError("correlation_vector: operator dimension mismatch");
    scale_columns(acc, lp, link.z / beta);
    acc = acc * mod.to_eigenbasis(link.x);
    total += link.z / beta;
  }
  scale_columns(acc, lp, 0.5 - total);
  return {mod.state().space, mod.from_eigenbasis(acc)};
}

double schatten_norm(const CMatrix& x, double s) {
  if (!(s >= 1.0)) throw DomainError("schatten_norm: s must be >= 1");
  const RVector sv = Eigen::BDCSVD<CMatrix>(x).singularValues();
  if (sv.size() == 0) return 0.0;
  if (std::isinf(s)) return sv.maxCoeff();
  const double top = sv.maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((sv / top).array().pow(s).sum(), 1.0 / s);
}

RepresentationResult determinant_representation(const BoundInstance& inst, double eta) {
  inst.validate();
  if (!(eta > 0.0)) throw DomainError("determinant_representation: eta must be positive");
  const DiscreteTorus& torus = inst.torus;
  const double beta = torus.beta();
  const int n = torus.n();
  const int N = inst.N();
  const int d = inst.d();

  const SpectralData hs = eig_hermitian(inst.H);
  const QuotientSpace qs = QuotientSpace::from_gram(inst.M);
  const int r = qs.rank;
  const FockSpace space(d * r);

  RepresentationResult res;
  res.modes = d * r;
  res.eta_used = std::min(eta, 700.0 / beta);
  res.clamped = res.eta_used < eta;
  const CMatrix h_eta = matrix_function([&](double l) { return bernoulli_euler_F(l, torus, res.eta_used); }, hs);
  const QuasiFreeState state = quasifree_density(HermitianMatrix(kron_identity(h_eta, r)), beta);
  const ModularData mod(state);

  std::vector<TorusPoint> alphas;
  for (const auto& p : inst.points) alphas.push_back(p.alpha);
  const OrderingPermutation op = build_ordering_permutation(alphas, N, torus);
  res.sign = op.sign;
  res.split = op.split;

  // x_q in position order: a+(E^u sqrt(chi) phi (x) e_j) or a(...)
  std::vector<CMatrix> x(2 * N);
  std::vector<double> t(2 * N);
  for (int pos = 0; pos < 2 * N; ++pos) {
    const int q = op.label_at[pos];
    const PointSpec& p = inst.points[q];
    const int u = op.shifted_units[q];
    CVector phi = apply_scalar_function([&](double l) { return std::sqrt(inst.chi(l)); }, hs, p.phi);
    phi = sign_power(hs, torus, u, phi);
    const FockOperator a = annihilator(space, kron(phi, qs.vector(p.color)));
    x[pos] = q < N ? CMatrix(a.matrix.adjoint()) : a.matrix;
    t[pos] = static_cast<double>(u) / n;
  }

  const int p = op.split;
  std::vector<ChainLink> right, left;
  if (p < 2 * N) {
    right.push_back({beta * (static_cast<double>(2 * op.units_at(p) - n) / (2.0 * n)), x[p]});
    for (int pos = p + 1; pos < 2 * N; ++pos)
      right.push_back({beta * static_cast<double>(op.increments[pos]) / n, x[pos]});
  }
  if (p > 0) {
    left.push_back({beta * (static_cast<double>(n - 2 * op.units_at(p - 1)) / (2.0 * n)), x[p - 1].adjoint()});
    for (int pos = p - 2; pos >= 0; --pos)
      left.push_back({beta * static_cast<double>(op.increments[pos + 1]) / n, x[pos].adjoint()});
  }
  const HSVector R = correlation_vector(mod, right);
  const HSVector L = correlation_vector(mod, left);
  res.inner_product_form = static_cast<double>(op.sign) * hs_inner(L, R);

  // Tr(D^{1+t_1} x_1 D^{t_2-t_1} x_2 ... x_2N D^{-t_2N}) in the eigenbasis of D
  const RVector& lp = mod.log_weights();
  const long dim = space.dim();
  CMatrix acc = CMatrix::Identity(dim, dim);
  for (int pos = 0; pos < 2 * N; ++pos) {
    const double w = pos == 0 ? 1.0 + t[0] : t[pos] - t[pos - 1];
    scale_columns(acc, lp, w);
    acc = acc * mod.to_eigenbasis(x[pos]);
  }
  scale_columns(acc, lp, -t[2 * N - 1]);
  res.trace_form = static_cast<double>(op.sign) * acc.trace();
  return res;
}

}  // namespace fermicov

#include "fermicov/torus.hpp"

#include <cmath>
#include <string>

namespace fermicov {

DiscreteTorus::DiscreteTorus(double beta, int n) : beta_(beta), n_(n) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("DiscreteTorus: beta must be positive and finite");
  if (n < 2 || n % 2 != 0)
    throw DomainError("DiscreteTorus: n must be an even integer >= 2, got " + std::to_string(n));
}

TorusPoint DiscreteTorus::point(int k) const {
  if (k < 1 || k > 2 * n_)
    throw DomainError("DiscreteTorus::point: index out of range: " + std::to_string(k));
  return {k};
}

TorusPoint DiscreteTorus::from_steps(long steps) const { return shift(zero(), steps); }

double DiscreteTorus::value(TorusPoint p) const {
  return -beta_ + static_cast<double>(p.index) * beta_ / n_;
}

TorusPoint DiscreteTorus::locate(double alpha) const {
  if (!std::isfinite(alpha)) throw DomainError("DiscreteTorus::locate: non-finite point");
  const double steps = alpha / spacing();
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9)
    throw DomainError("DiscreteTorus::locate: " + std::to_string(alpha) + " is not a grid point");
  return from_steps(static_cast<long>(rounded));
}

TorusPoint DiscreteTorus::shift(TorusPoint a, long steps) const {
  const long period = 2L * n_;
  long k = (static_cast<long>(a.index) - 1 + steps) % period;
  if (k < 0) k += period;
  return {static_cast<int>(k) + 1};
}

TorusPoint DiscreteTorus::add(TorusPoint a, TorusPoint b) const { return shift(a, steps(b)); }

TorusPoint DiscreteTorus::sub(TorusPoint a, TorusPoint b) const { return shift(a, -steps(b)); }

// ---------------------------------------------------------------------------

APFunction::APFunction(const DiscreteTorus& torus, int dim)
    : torus_(torus), values_(CMatrix::Zero(dim, torus.size())) {
  if (dim < 1) throw DomainError("APFunction: fiber dimension must be positive");
}

APFunction::APFunction(const DiscreteTorus& torus, CMatrix values)
    : torus_(torus), values_(std::move(values)) {}

APFunction APFunction::from_values(const DiscreteTorus& torus, CMatrix values) {
  if (values.cols() != torus.size() || values.rows() < 1)
    throw DomainError("APFunction::from_values: expected dim x 2n values");
  APFunction f(torus, std::move(values));
  if (!f.is_antiperiodic()) throw DomainError("APFunction::from_values: values are not antiperiodic");
  return f;
}

APFunction APFunction::from_half(const DiscreteTorus& torus, const CMatrix& half) {
  const int n = torus.n();
  if (half.cols() != n || half.rows() < 1)
    throw DomainError("APFunction::from_half: expected dim x n values");
  CMatrix values(half.rows(), 2 * n);
  values.leftCols(n) = half;
  values.rightCols(n) = -half;
  return APFunction(torus, std::move(values));
}

void APFunction::set(TorusPoint p, const CVector& v) {
  if (v.size() != dim()) throw DomainError("APFunction::set: dimension mismatch");
  values_.col(p.index - 1) = v;
  values_.col(torus_.antipode(p).index - 1) = -v;
}

bool APFunction::is_antiperiodic() const {
  const int n = torus_.n();
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < dim(); ++c)
      if (values_(c, k + n) != -values_(c, k)) return false;
  return true;
}

cplx inner(const APFunction& f1, const APFunction& f2) {
  if (!(f1.torus() == f2.torus()) || f1.dim() != f2.dim())
    throw DomainError("inner: torus or dimension mismatch");
  cplx sum = 0.0;
  for (int k = 0; k < f1.torus().size(); ++k) sum += f1.values().col(k).dot(f2.values().col(k));
  return f1.torus().spacing() * sum;
}

double norm(const APFunction& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

APFunction delta_ap(const DiscreteTorus& torus) {
  APFunction d(torus, 1);
  CVector v(1);
  v(0) = 0.5 * torus.inverse_spacing();
  d.set(torus.zero(), v);
  return d;
}

APFunction convolve(const APFunction& g, const APFunction& f) {
  const DiscreteTorus& torus = g.torus();
  if (!(torus == f.torus())) throw DomainError("convolve: torus mismatch");
  if (f.dim() != 1) throw DomainError("convolve: second argument must be scalar-valued");
  const int n = torus.n();
  CMatrix half = CMatrix::Zero(g.dim(), n);
  for (int k = 1; k <= n; ++k) {
    const TorusPoint alpha{k};
    for (int t = 1; t <= torus.size(); ++t) {
      const TorusPoint tau{t};
      const cplx ft = f.at(tau, 0);
      if (ft == 0.0) continue;
      half.col(k - 1) += g.at(torus.sub(alpha, tau)) * ft;
    }
  }
  half *= torus.spacing();
  return APFunction::from_half(torus, half);
}

APFunction discrete_derivative(const APFunction& f) {
  const DiscreteTorus& torus = f.torus();
  const int n = torus.n();
  CMatrix half(f.dim(), n);
  for (int k = 1; k <= n; ++k) {
    const TorusPoint alpha{k};
    half.col(k - 1) = torus.inverse_spacing() * (f.at(torus.shift(alpha, 1)) - f.at(alpha));
  }
  return APFunction::from_half(torus, half);
}

APFunction embed_vector(const CVector& phi, const DiscreteTorus& torus) {
  if (phi.size() < 1) throw DomainError("embed_vector: empty vector");
  APFunction f(torus, static_cast<int>(phi.size()));
  f.set(torus.zero(), 0.5 * torus.inverse_spacing() * phi);
  return f;
}

APFunction apply_fiberwise(const CMatrix& a, const APFunction& f) {
  if (a.cols() != f.dim() || a.rows() != a.cols())
    throw DomainError("apply_fiberwise: operator/fiber dimension mismatch");
  const int n = f.torus().n();
  return APFunction::from_half(f.torus(), a * f.values().leftCols(n));
}

CMatrix antiperiodic_derivative_matrix(const DiscreteTorus& torus) {
  const int n = torus.n();
  const double c = torus.inverse_spacing();
  CMatrix d = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    d(k, k) = -c;
    if (k + 1 < n)
      d(k, k + 1) = c;
    else
      d(k, 0) -= c;  // f(n+1) = -f(1)
  }
  return d;
}

}  // namespace fermicov

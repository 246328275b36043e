#include "fermicov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermicov {

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DomainError("HermitianMatrix: expected a nonempty square matrix");
  if (!a.allFinite()) throw DomainError("HermitianMatrix: non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("HermitianMatrix: matrix is not Hermitian");
  a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return HermitianMatrix(d.cast<cplx>().asDiagonal().toDenseMatrix());
}

CMatrix SpectralData::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

SpectralData eig_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: eigen-solver did not converge");
  SpectralData s{solver.eigenvalues(), solver.eigenvectors()};
  // Eigen returns ascending eigenvalues; fix the phase of each eigenvector.
  for (int j = 0; j < s.dim(); ++j) {
    Eigen::Index imax = 0;
    s.eigenvectors.col(j).cwiseAbs().maxCoeff(&imax);
    const cplx c = s.eigenvectors(imax, j);
    if (std::abs(c) > 0.0) s.eigenvectors.col(j) *= std::conj(c) / std::abs(c);
    s.eigenvectors(imax, j) = std::abs(s.eigenvectors(imax, j));
  }
  return s;
}

bool is_singular_eigenvalue(double lambda, const DiscreteTorus& torus) {
  const double c = torus.inverse_spacing();
  return std::abs(lambda - c) <= 1e-12 * c;
}

double bernoulli_euler_F(double lambda, const DiscreteTorus& torus, double eta) {
  if (is_singular_eigenvalue(lambda, torus)) return eta;
  return -torus.inverse_spacing() * std::log(std::abs(1.0 - torus.spacing() * lambda));
}

CVector sign_power(const SpectralData& s, const DiscreteTorus& torus, long k, const CVector& x) {
  const bool odd = (k % 2) != 0;
  return apply_scalar_function(
      [&](double lambda) { return odd ? static_cast<double>(sign_factor(lambda, torus)) : 1.0; }, s, x);
}

CutoffSpec CutoffSpec::indicator(double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("CutoffSpec::indicator: empty interval");
  return CutoffSpec(Indicator{lo, hi});
}

CutoffSpec CutoffSpec::gaussian(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(center))
    throw DomainError("CutoffSpec::gaussian: width must be positive");
  return CutoffSpec(Gaussian{center, width});
}

CutoffSpec CutoffSpec::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw DomainError("CutoffSpec::table: no points");
  for (const auto& [l, v] : points)
    if (!std::isfinite(l) || !std::isfinite(v) || v < 0.0)
      throw DomainError("CutoffSpec::table: values must be finite and nonnegative");
  std::sort(points.begin(), points.end());
  return CutoffSpec(Table{std::move(points)});
}

double CutoffSpec::operator()(double lambda) const {
  struct Visitor {
    double lambda;
    double operator()(const One&) const { return 1.0; }
    double operator()(const Indicator& i) const { return (lambda >= i.lo && lambda <= i.hi) ? 1.0 : 0.0; }
    double operator()(const Gaussian& g) const {
      const double z = (lambda - g.center) / g.width;
      return std::exp(-0.5 * z * z);
    }
    double operator()(const Table& t) const {
      auto it = std::lower_bound(t.points.begin(), t.points.end(), lambda,
                                 [](const auto& p, double l) { return p.first < l; });
      if (it == t.points.end()) return t.points.back().second;
      if (it == t.points.begin()) return it->second;
      auto prev = std::prev(it);
      return (lambda - prev->first <= it->first - lambda) ? prev->second : it->second;
    }
  };
  return std::visit(Visitor{lambda}, kind_);
}

std::string CutoffSpec::name() const {
  std::ostringstream os;
  os.precision(17);
  struct Visitor {
    std::ostringstream& os;
    void operator()(const One&) const { os << "one"; }
    void operator()(const Indicator& i) const { os << "indicator[" << i.lo << "," << i.hi << "]"; }
    void operator()(const Gaussian& g) const { os << "gaussian(" << g.center << "," << g.width << ")"; }
    void operator()(const Table& t) const { os << "table(" << t.points.size() << ")"; }
  };
  std::visit(Visitor{os}, kind_);
  return os.str();
}

}  // namespace fermicov

#include "fermicov/covariance.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace fermicov {

namespace {

// g on (-beta, 0]; j = 1 - steps(alpha) in {1..n} is the integer exponent.
double kernel_lower(double lambda, const DiscreteTorus& torus, std::optional<double> eta, int j) {
  const bool singular = is_singular_eigenvalue(lambda, torus);
  if (singular && !eta) return j == torus.n() ? 1.0 : 0.0;
  const double F = bernoulli_euler_F(lambda, torus, singular ? *eta : 0.0);
  const int s = sign_factor(lambda, torus);
  const double a = j * torus.spacing() * F;
  const double b = torus.beta() * F;
  const double mag = b > 0.0 ? std::exp(a - b) / (std::exp(-b) + 1.0) : std::exp(a) / (1.0 + std::exp(b));
  return (s < 0 && j % 2 != 0) ? -mag : mag;
}

}  // namespace

double kernel_value(double lambda, const DiscreteTorus& torus, std::optional<double> eta, TorusPoint alpha) {
  if (eta && !(*eta > 0.0)) throw DomainError("kernel: eta must be positive");
  if (torus.in_lower_half(alpha)) return kernel_lower(lambda, torus, eta, 1 - torus.steps(alpha));
  return -kernel_lower(lambda, torus, eta, 1 - torus.steps(torus.antipode(alpha)));
}

KernelEval kernel_g(double lambda, const DiscreteTorus& torus, std::optional<double> eta) {
  KernelEval k{lambda, torus, eta, RVector(torus.size())};
  const int n = torus.n();
  for (int i = 1; i <= n; ++i) {
    k.values(i - 1) = kernel_value(lambda, torus, eta, TorusPoint{i});
    k.values(i - 1 + n) = -k.values(i - 1);
  }
  return k;
}

double KernelEval::residual() const {
  const double c = torus.inverse_spacing();
  double worst = 0.0;
  for (int k = 1; k <= torus.size(); ++k) {
    const TorusPoint a{k};
    const double next = at(torus.shift(a, 1));
    double delta = 0.0;
    if (a == torus.zero()) delta = 0.5 * c;
    if (a == torus.beta_point()) delta = -0.5 * c;
    worst = std::max(worst, std::abs(c * (next - at(a)) + lambda * at(a) + 2.0 * delta));
  }
  return worst;
}

double kernel_g_continuum(double lambda, double beta, double alpha) {
  if (!(alpha > -beta && alpha <= 0.0)) throw DomainError("kernel_g_continuum: alpha must lie in (-beta, 0]");
  const double b = beta * lambda;
  if (b > 0.0) return std::exp(-alpha * lambda - b) / (std::exp(-b) + 1.0);
  return std::exp(-alpha * lambda) / (1.0 + std::exp(b));
}

cplx covariance_entry(const SpectralData& h, const CutoffSpec& chi, const CVector& phi1, const CVector& phi2,
                      TorusPoint alpha, const DiscreteTorus& torus, std::optional<double> eta) {
  if (phi1.size() != h.dim() || phi2.size() != h.dim())
    throw DomainError("covariance_entry: dimension mismatch");
  const CVector c1 = h.eigenvectors.adjoint() * phi1;
  const CVector c2 = h.eigenvectors.adjoint() * phi2;
  cplx sum = 0.0;
  for (int j = 0; j < h.dim(); ++j) {
    const double lambda = h.eigenvalues(j);
    const double x = chi(lambda);
    if (x == 0.0) continue;
    sum += kernel_value(lambda, torus, eta, alpha) * x * std::conj(c2(j)) * c1(j);
  }
  return sum;
}

void BoundInstance::validate() const {
  const int nm = m();
  if (nm < 1 || M.cols() != nm) throw DomainError("BoundInstance: M must be square and nonempty");
  if (!M.allFinite()) throw DomainError("BoundInstance: M has non-finite entries");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw DomainError("BoundInstance: M not symmetric");
  if (M.cwiseAbs().maxCoeff() == 0.0) throw DomainError("BoundInstance: M must be nonzero");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) throw DomainError("BoundInstance: M not positive semidefinite");
  if (points.empty() || points.size() % 2 != 0) throw DomainError("BoundInstance: need 2N >= 2 points");
  for (size_t q = 0; q < points.size(); ++q) {
    const auto& p = points[q];
    if (p.alpha.index < 1 || p.alpha.index > torus.size() || !torus.in_upper_window(p.alpha))
      throw DomainError("BoundInstance: alpha_" + std::to_string(q + 1) + " not a grid point in [0, beta)");
    if (p.phi.size() != d()) throw DomainError("BoundInstance: phi_" + std::to_string(q + 1) + " has wrong dimension");
    if (p.color < 0 || p.color >= nm) throw DomainError("BoundInstance: color index out of range");
  }
}

cplx covariance_det(const BoundInstance& inst, std::optional<double> eta) {
  return covariance_det(inst, eig_hermitian(inst.H), eta);
}

cplx covariance_det(const BoundInstance& inst, const SpectralData& h, std::optional<double> eta) {
  return covariance_matrix(inst, h, eta).determinant();
}

double hadamard_scale(const CMatrix& a) {
  double s = 1.0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) s *= a.row(k).norm();
  return s;
}

CMatrix covariance_matrix(const BoundInstance& inst, const SpectralData& h, std::optional<double> eta) {
  inst.validate();
  const int N = inst.N();
  CMatrix a(N, N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      const PointSpec& pk = inst.points[k];
      const PointSpec& pl = inst.points[N + l];
      const TorusPoint diff = inst.torus.sub(pk.alpha, pl.alpha);
      a(k, l) = inst.M(pk.color, pl.color) * covariance_entry(h, inst.chi, pk.phi, pl.phi, diff, inst.torus, eta);
    }
  return a;
}

double determinant_bound(const BoundInstance& inst) { return determinant_bound(inst, eig_hermitian(inst.H)); }

double determinant_bound(const BoundInstance& inst, const SpectralData& h) {
  double b = 1.0;
  for (const auto& p : inst.points) {
    const CVector v = apply_scalar_function([&](double l) { return std::sqrt(inst.chi(l)); }, h, p.phi);
    b *= v.norm() * std::sqrt(std::max(0.0, inst.M(p.color, p.color)));
  }
  return b;
}

CMatrix covariance_operator_matrix(const HermitianMatrix& h, const DiscreteTorus& torus) {
  const int n = torus.n();
  const int d = h.dim();
  const CMatrix dap = antiperiodic_derivative_matrix(torus);
  CMatrix a = CMatrix::Zero(n * d, n * d);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (dap(k, l) != 0.0) a.block(k * d, l * d, d, d) += dap(k, l) * CMatrix::Identity(d, d);
  for (int k = 0; k < n; ++k) a.block(k * d, k * d, d, d) += h.matrix();
  Eigen::PartialPivLU<CMatrix> lu(a);
  return -2.0 * lu.inverse();
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_exponent: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

GramReport gram_norm_demo(const HermitianMatrix& h, const std::vector<DiscreteTorus>& tori) {
  if (tori.empty()) throw DomainError("gram_norm_demo: no tori");
  GramReport rep;
  const SpectralData s = eig_hermitian(h);
  for (int j = 0; j < s.dim(); ++j)
    if (std::abs(s.eigenvalues(j)) <= 1e-9) rep.has_zero_mode = true;
  std::vector<double> ns, cov, emb, gram;
  for (const auto& torus : tori) {
    GramRow row;
    row.n = torus.n();
    row.cov_norm = Eigen::JacobiSVD<CMatrix>(covariance_operator_matrix(h, torus)).singularValues()(0);
    CVector e1 = CVector::Zero(h.dim());
    e1(0) = 1.0;
    row.embed_norm = norm(embed_vector(e1, torus));
    row.gram_factor = std::sqrt(row.cov_norm) * row.embed_norm;
    for (int j = 0; j < s.dim(); ++j) {
      const HermitianMatrix single = HermitianMatrix::diagonal(RVector::Constant(1, s.eigenvalues(j)));
      row.per_eigenvalue_norms.push_back(
          Eigen::JacobiSVD<CMatrix>(covariance_operator_matrix(single, torus)).singularValues()(0));
    }
    ns.push_back(row.n);
    cov.push_back(row.cov_norm);
    emb.push_back(row.embed_norm);
    gram.push_back(row.gram_factor);
    rep.rows.push_back(std::move(row));
  }
  if (ns.size() >= 2) {
    rep.cov_exponent = fit_exponent(ns, cov);
    rep.embed_exponent = fit_exponent(ns, emb);
    rep.gram_exponent = fit_exponent(ns, gram);
  }
  return rep;
}

double decay_parameter(const SpectralData& h, const CutoffSpec& chi, const std::vector<CVector>& basis,
                       const DiscreteTorus& torus) {
  const int b = static_cast<int>(basis.size());
  for (int i = 0; i < b; ++i) {
    if (basis[i].size() != h.dim()) throw DomainError("decay_parameter: basis vector has wrong dimension");
    for (int j = 0; j < b; ++j) {
      const cplx ip = basis[i].dot(basis[j]);
      if (std::abs(ip - (i == j ? 1.0 : 0.0)) > 1e-10) throw DomainError("decay_parameter: basis is not orthonormal");
    }
  }
  double best = 0.0;
  for (int i = 0; i < b; ++i) {
    double sum = 0.0;
    for (int t = 1; t <= torus.size(); ++t)
      for (int q = 0; q < b; ++q)
        sum += std::abs(covariance_entry(h, chi, basis[i], basis[q], TorusPoint{t}, torus));
    best = std::max(best, torus.spacing() * sum);
  }
  return best;
}

}  // namespace fermicov

#include <doctest.h>

#include <cmath>

#include "fermicov/covariance.hpp"
#include "fermicov/random.hpp"
#include "fermicov/verify.hpp"
#include "oracles.hpp"

using namespace fermicov;

TEST_CASE("kernel closed limit at the singular eigenvalue") {
  for (double beta : {0.5, 1.0, 2.0})
    for (int n : {2, 4, 8}) {
      const DiscreteTorus t(beta, n);
      const KernelEval k = kernel_g(t.inverse_spacing(), t);
      for (int i = 1; i <= t.size(); ++i) {
        const double a = t.value({i});
        double expect = 0.0;
        if (std::abs(a - t.spacing()) < 1e-12) expect = -1.0;
        if (std::abs(a - (t.spacing() - beta)) < 1e-12) expect = 1.0;
        CHECK(k.values(i - 1) == expect);
      }
      CHECK(k.residual() <= 1e-12 * t.inverse_spacing());
    }
}

TEST_CASE("kernel at lambda = 0 and against the dense solve") {
  const DiscreteTorus t(1.0, 4);
  const KernelEval k0 = kernel_g(0.0, t);
  for (int i = 1; i <= t.size(); ++i) CHECK(k0.values(i - 1) == (i <= 4 ? 0.5 : -0.5));

  const DiscreteTorus t8(1.0, 8);
  const KernelEval k3 = kernel_g(3.0, t8);
  CHECK(k3.residual() <= 1e-10);
  const RVector ref = oracle::kernel_dense(3.0, t8);
  CHECK((k3.values - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());

  // finite eta at the singular point still solves the equation for F = eta
  const KernelEval ke = kernel_g(8.0, t8, 3.0);
  CHECK(ke.values.allFinite());
  CHECK_THROWS_AS(kernel_g(1.0, t8, -1.0), DomainError);
}

TEST_CASE("kernel regimes") {
  const DiscreteTorus t(1.0, 8);
  for (double lambda : {-1e5, -300.0, -8.0, 7.9, 8.1, 16.0, 40.0, 1e5}) {
    const KernelEval k = kernel_g(lambda, t);
    CHECK(k.values.allFinite());
    const RVector ref = oracle::kernel_dense(lambda, t);
    CHECK((k.values - ref).cwiseAbs().maxCoeff() <= 1e-10 * ref.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("continuum kernel") {
  CHECK(kernel_g_continuum(0.0, 1.0, -0.3) == 0.5);
  CHECK(kernel_g_continuum(std::log(3.0), 1.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_g_continuum(1.0, 1.0, 0.5), DomainError);

  std::vector<double> ns, errs;
  for (int n : {8, 16, 32, 64}) {
    const DiscreteTorus t(1.0, n);
    const KernelEval k = kernel_g(1.0, t);
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) worst = std::max(worst, std::abs(k.values(i - 1) - kernel_g_continuum(1.0, 1.0, t.value({i}))));
    ns.push_back(n);
    errs.push_back(worst);
  }
  CHECK(fit_exponent(ns, errs) == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("covariance entries") {
  const DiscreteTorus t(1.0, 4);
  {
    const SpectralData h0 = eig_hermitian(HermitianMatrix(CMatrix::Zero(2, 2)));
    const CVector e1 = CVector::Unit(2, 0);
    CHECK(covariance_entry(h0, CutoffSpec::one(), e1, e1, t.zero(), t) == cplx(0.5));
  }
  for (double lambda : {-3.0, 0.7, 2.5, 6.0}) {
    const SpectralData h = eig_hermitian(HermitianMatrix(lambda * CMatrix::Identity(3, 3)));
    const double x = 1.0 - lambda / 4.0;
    const double closed = 1.0 / x / (1.0 + std::pow(std::abs(x), -4));
    const cplx c = covariance_entry(h, CutoffSpec::one(), CVector::Unit(3, 1), CVector::Unit(3, 1), t.zero(), t);
    CHECK(std::abs(c - closed) <= 1e-13 * std::abs(closed));
  }
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const DiscreteTorus tt(uniform(rng, 0.5, 2.0), 2 * uniform_int(rng, 1, 6));
    const CMatrix hm = uniform(rng, 0.1, 3.0) * tt.inverse_spacing() * random_gue(rng, 4);
    const SpectralData h = eig_hermitian(HermitianMatrix(hm));
    const CutoffSpec chi = rep % 2 ? CutoffSpec::gaussian(0.0, tt.inverse_spacing()) : CutoffSpec::one();
    const CVector p1 = random_cvector(rng, 4), p2 = random_cvector(rng, 4);
    const CVector ref = oracle::covariance_dense(hm, chi, p1, p2, tt);
    for (int k = 1; k <= tt.size(); ++k) {
      const cplx c = covariance_entry(h, chi, p1, p2, {k}, tt);
      CHECK(std::abs(c - ref(k - 1)) <= 1e-9 * ref.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("covariance determinant") {
  const DiscreteTorus t(1.0, 4);
  BoundInstance one{HermitianMatrix(CMatrix::Zero(1, 1)), t, CutoffSpec::one(), RMatrix::Identity(1, 1),
                    {{t.zero(), CVector::Ones(1), 0}, {t.zero(), CVector::Ones(1), 0}}};
  CHECK(covariance_det(one) == cplx(0.5));
  CHECK(determinant_bound(one) == 1.0);

  for (int N : {1, 2, 3})
    for (double lambda : {-2.0, 1.0, 3.0}) {
      const BoundInstance s = sharpness_instance(lambda, t, N);
      const double g0 = kernel_value(lambda, t, std::nullopt, t.zero());
      CHECK(std::abs(covariance_det(s) - std::pow(g0, N)) <= 1e-13 * std::pow(std::abs(g0), N));
    }

  // N = 3, d = 3, m = 2 against the Leibniz expansion of oracle entries
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    const DiscreteTorus tt(1.0, 4);
    const CMatrix hm = 2.0 * random_gue(rng, 3);
    const RMatrix M = random_psd(rng, 2, 2);
    BoundInstance inst{HermitianMatrix(hm), tt, CutoffSpec::one(), M, {}};
    for (int q = 0; q < 6; ++q)
      inst.points.push_back({tt.from_steps(uniform_int(rng, 0, 3)), random_cvector(rng, 3), uniform_int(rng, 0, 1)});
    CMatrix a(3, 3);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const auto& pk = inst.points[k];
        const auto& pl = inst.points[3 + l];
        const CVector f = oracle::covariance_dense(hm, inst.chi, pk.phi, pl.phi, tt);
        a(k, l) = M(pk.color, pl.color) * f(tt.sub(pk.alpha, pl.alpha).index - 1);
      }
    const cplx ref = oracle::leibniz_det(a);
    CHECK(std::abs(covariance_det(inst) - ref) <= 1e-9 * hadamard_scale(a));
    CHECK(std::abs(ref) <= determinant_bound(inst) * (1 + 1e-10));
  }

  BoundInstance bad = one;
  bad.points[0].alpha = t.point(1);  // alpha outside [0, beta)
  CHECK_THROWS_AS(covariance_det(bad), DomainError);
  bad = one;
  bad.points[1].color = 1;
  CHECK_THROWS_AS(covariance_det(bad), DomainError);
  bad = one;
  bad.M(0, 0) = -1;
  CHECK_THROWS_AS(covariance_det(bad), DomainError);
}

TEST_CASE("Gram demonstration") {
  const HermitianMatrix h0(CMatrix::Zero(1, 1));
  std::vector<DiscreteTorus> tori;
  for (int n : {4, 8, 16, 32}) tori.emplace_back(1.0, n);
  const GramReport g = gram_norm_demo(h0, tori);
  CHECK(g.has_zero_mode);
  for (const auto& row : g.rows) CHECK(row.embed_norm == doctest::Approx(std::sqrt(row.n / 2.0)).epsilon(1e-14));
  // norm of C_0 against a dense SVD of the oracle operator
  for (const auto& row : g.rows) {
    const DiscreteTorus t(1.0, row.n);
    const RMatrix q = oracle::antiperiodic_isometry(t);
    const RMatrix a = q.transpose() * oracle::full_derivative(t) * q;
    const RMatrix c = -2.0 * a.inverse();
    Eigen::JacobiSVD<RMatrix> svd(c);
    CHECK(row.cov_norm == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  }
  // H = diag(0, 5): the zero eigenvalue carries the largest resolvent
  const GramReport g2 = gram_norm_demo(HermitianMatrix::diagonal(RVector::LinSpaced(2, 0, 5)), tori);
  for (const auto& row : g2.rows) {
    REQUIRE(row.per_eigenvalue_norms.size() == 2);
    CHECK(row.per_eigenvalue_norms[0] > row.per_eigenvalue_norms[1]);
    CHECK(row.cov_norm == doctest::Approx(row.per_eigenvalue_norms[0]).epsilon(1e-12));
  }
  CHECK(fit_exponent({1, 2, 4}, {3, 6, 12}) == doctest::Approx(1.0));
}

TEST_CASE("decay parameter") {
  const SpectralData h0 = eig_hermitian(HermitianMatrix(CMatrix::Zero(1, 1)));
  const std::vector<CVector> basis{CVector::Ones(1)};
  for (int n : {4, 8}) {
    const DiscreteTorus t(1.0, n);
    // direct double sum: n^{-1} beta sum_tau |(C chi phi-hat)(tau)| = spacing * sum |g_0|
    const RVector g = oracle::kernel_dense(0.0, t);
    const double ref = t.spacing() * g.cwiseAbs().sum();
    CHECK(decay_parameter(h0, CutoffSpec::one(), basis, t) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK(decay_parameter(h0, CutoffSpec::indicator(5, 6), basis, DiscreteTorus(1, 4)) == 0.0);
  const double a = decay_parameter(h0, CutoffSpec::one(), basis, DiscreteTorus(1, 16));
  const double b = decay_parameter(h0, CutoffSpec::one(), basis, DiscreteTorus(1, 32));
  CHECK(std::abs(a - b) <= 0.1 * a);
  CHECK_THROWS_AS(decay_parameter(h0, CutoffSpec::one(), {2.0 * CVector::Ones(1)}, DiscreteTorus(1, 4)), DomainError);
}

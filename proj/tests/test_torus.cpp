#include <doctest.h>

#include "fermicov/random.hpp"
#include "fermicov/torus.hpp"
#include "oracles.hpp"

using namespace fermicov;

namespace {

APFunction random_ap(Rng& rng, const DiscreteTorus& t, int dim) {
  CMatrix half(dim, t.n());
  for (int k = 0; k < t.n(); ++k) half.col(k) = random_cvector(rng, dim);
  return APFunction::from_half(t, half);
}

}  // namespace

TEST_CASE("torus grid") {
  const DiscreteTorus t(1.0, 4);
  CHECK(t.size() == 8);
  CHECK(t.value(t.point(1)) == doctest::Approx(-0.75));
  CHECK(t.value(t.zero()) == 0.0);
  CHECK(t.value(t.beta_point()) == 1.0);
  CHECK(t.locate(0.25).index == 5);
  CHECK(t.locate(-1.0) == t.beta_point());  // -beta is beta
  CHECK(t.add(t.locate(0.75), t.locate(0.5)) == t.locate(-0.75));
  CHECK(t.sub(t.locate(-0.75), t.locate(0.5)) == t.locate(0.75));
  CHECK(t.antipode(t.zero()) == t.beta_point());
  CHECK(t.in_upper_window(t.zero()));
  CHECK_FALSE(t.in_upper_window(t.beta_point()));

  CHECK_THROWS_AS(DiscreteTorus(1.0, 3), DomainError);
  CHECK_THROWS_AS(DiscreteTorus(1.0, 0), DomainError);
  CHECK_THROWS_AS(DiscreteTorus(-1.0, 2), DomainError);
  CHECK_THROWS_AS(t.locate(0.1), DomainError);
  CHECK_THROWS_AS(t.point(9), DomainError);
}

TEST_CASE("delta_ap") {
  {
    const DiscreteTorus t(1.0, 2);
    const APFunction d = delta_ap(t);
    CHECK(d.at(t.locate(0.5), 0) == 0.0);
    CHECK(d.at(t.locate(1.0), 0) == -1.0);
    CHECK(d.at(t.locate(-0.5), 0) == 0.0);
    CHECK(d.at(t.locate(0.0), 0) == 1.0);
  }
  {
    const DiscreteTorus t(2.0, 4);
    const APFunction d = delta_ap(t);
    int nonzero = 0;
    for (int k = 1; k <= t.size(); ++k)
      if (d.at({k}, 0) != 0.0) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(d.at(t.locate(0.0), 0) == 1.0);
    CHECK(d.at(t.locate(2.0), 0) == -1.0);
  }
  for (double beta : {0.5, 1.0, 3.0})
    for (int n : {2, 6, 16}) {
      const DiscreteTorus t(beta, n);
      const APFunction d = delta_ap(t);
      CHECK(d.is_antiperiodic());
      CHECK(inner(d, d).real() == doctest::Approx(n / beta / 2).epsilon(1e-14));
    }
}

TEST_CASE("APFunction antiperiodicity is enforced") {
  const DiscreteTorus t(1.0, 2);
  CMatrix v = CMatrix::Zero(1, 4);
  v(0, 0) = 1.0;
  CHECK_THROWS_AS(APFunction::from_values(t, v), DomainError);
  v(0, 2) = -1.0;
  CHECK(APFunction::from_values(t, v).is_antiperiodic());
  APFunction f(t, 2);
  f.set(t.point(1), CVector::Ones(2));
  CHECK(f.at(t.point(3)) == -CVector::Ones(2));
}

TEST_CASE("convolution") {
  Rng rng(7);
  for (int n : {2, 4, 8}) {
    const DiscreteTorus t(1.3, n);
    const APFunction g = random_ap(rng, t, 3);
    const APFunction conv = convolve(g, delta_ap(t));
    CHECK((conv.values() - g.values()).norm() <= 1e-13 * g.values().norm());

    // piecewise constant against the double-sum oracle
    const APFunction c = APFunction::from_half(t, CMatrix::Constant(1, n, cplx(0.7, 0)));
    const CMatrix ref = oracle::convolution_double_sum(c, c);
    CHECK((convolve(c, c).values() - ref).norm() <= 1e-13 * std::max(1.0, ref.norm()));

    const APFunction f = random_ap(rng, t, 1);
    const CMatrix ref2 = oracle::convolution_double_sum(g, f);
    CHECK((convolve(g, f).values() - ref2).norm() <= 1e-13 * ref2.norm());

    const APFunction zero(t, 1);
    CHECK(convolve(g, zero).values().norm() == 0.0);
  }
  CHECK_THROWS_AS(convolve(APFunction(DiscreteTorus(1, 2), 1), APFunction(DiscreteTorus(1, 4), 1)), DomainError);
}

TEST_CASE("discrete derivative") {
  const DiscreteTorus t(1.0, 4);
  // constant c on (-beta, 0]: jumps only at the two seams
  const APFunction f = APFunction::from_half(t, CMatrix::Constant(1, 4, cplx(2.0, 0)));
  const APFunction df = discrete_derivative(f);
  for (int k = 1; k <= t.size(); ++k) {
    const double expect = (k == 4) ? -16.0 : (k == 8 ? 16.0 : 0.0);
    CHECK(df.at({k}, 0).real() == doctest::Approx(expect));
  }
  // matrix-form oracle
  Rng rng(3);
  const APFunction g = random_ap(rng, t, 2);
  const CMatrix ref = g.values() * oracle::full_derivative(t).transpose().cast<cplx>();
  CHECK((discrete_derivative(g).values() - ref).norm() <= 1e-13 * ref.norm());

  // the lambda = 0 kernel is 1/2 on (-beta, 0]
  const APFunction g0 = APFunction::from_half(t, CMatrix::Constant(1, 4, cplx(0.5, 0)));
  CHECK((discrete_derivative(g0).values() + 2.0 * delta_ap(t).values()).norm() == 0.0);

  for (int n : {2, 4, 8}) {
    const DiscreteTorus tn(1.0, n);
    Eigen::ComplexEigenSolver<CMatrix> es(antiperiodic_derivative_matrix(tn));
    CHECK(es.eigenvalues().imag().cwiseAbs().minCoeff() > 0.1);
  }
}

TEST_CASE("embedding is isometric up to beta^{-1} n / 2") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const DiscreteTorus t(uniform(rng, 0.2, 4.0), 2 * uniform_int(rng, 1, 10));
    const CVector phi = random_cvector(rng, 3);
    const APFunction hat = embed_vector(phi, t);
    // direct summation
    cplx s = 0.0;
    for (int k = 1; k <= t.size(); ++k) s += t.spacing() * hat.at({k}).squaredNorm();
    CHECK(std::abs(s - t.inverse_spacing() / 2 * phi.squaredNorm()) <= 1e-13 * std::abs(s));
    CHECK(std::abs(inner(hat, hat) - s) <= 1e-13 * std::abs(s));
  }
  const DiscreteTorus t(1.0, 8);
  CHECK(inner(embed_vector(CVector::Unit(2, 0), t), embed_vector(CVector::Unit(2, 0), t)).real() == doctest::Approx(4.0));
  CHECK(embed_vector(CVector::Zero(2), t).values().norm() == 0.0);
}

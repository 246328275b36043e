#include <doctest.h>

#include <cstdlib>

#include "fermicov/car_fock.hpp"
#include "fermicov/kernels.hpp"
#include "fermicov/random.hpp"

using namespace fermicov;

namespace {

cplx ip(const CVector& a, const CVector& b) { return a.dot(b); }

CMatrix fermi_symbol(const CMatrix& h, double beta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CMatrix v = es.eigenvectors();
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) *= 1.0 / (1.0 + std::exp(beta * es.eigenvalues()(j)));
  return v * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("Jordan-Wigner operators") {
  const auto c1 = jordan_wigner(1);
  CMatrix expect(2, 2);
  expect << 0, 1, 0, 0;
  CHECK(c1[0].matrix == expect);
  CHECK(anticommutator(c1[0].matrix, c1[0].adjoint().matrix) == CMatrix::Identity(2, 2));

  const auto c = jordan_wigner(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(anticommutator(c[i].matrix, c[j].matrix).norm() == 0.0);
      const CMatrix ac = anticommutator(c[i].matrix, c[j].adjoint().matrix);
      CHECK((ac - (i == j ? 1.0 : 0.0) * CMatrix::Identity(8, 8)).norm() == 0.0);
    }

  Rng rng(1);
  const FockSpace fs(3);
  const CVector psi = random_cvector(rng, 3);
  const cplx i(0, 1);
  CHECK((annihilator(fs, i * psi).matrix + i * annihilator(fs, psi).matrix).norm() <= 1e-14);
  CHECK((creator(fs, psi).matrix - annihilator(fs, psi).matrix.adjoint()).norm() == 0.0);
  const CVector phi = random_cvector(rng, 3);
  const CMatrix car = anticommutator(annihilator(fs, psi).matrix, creator(fs, phi).matrix);
  CHECK((car - ip(psi, phi) * CMatrix::Identity(8, 8)).norm() <= 1e-13);
}

TEST_CASE("Fock space limits") {
  CHECK_THROWS_AS(FockSpace(0), DomainError);
  CHECK_THROWS_AS(FockSpace(15), DomainError);
  CHECK(FockSpace(3).dim() == 8);
  ::setenv("FERMICOV_FOCK_CAP", "3", 1);
  CHECK(fock_cap() == 3);
  CHECK_THROWS_AS(FockSpace(4), CapacityError);
  ::setenv("FERMICOV_FOCK_CAP", "99", 1);
  CHECK_THROWS_AS(fock_cap(), DomainError);
  ::unsetenv("FERMICOV_FOCK_CAP");
  CHECK(fock_cap() == 10);
}

TEST_CASE("second quantization") {
  const FockOperator n3 = second_quantize(HermitianMatrix(CMatrix::Identity(3, 3)));
  for (long s = 0; s < 8; ++s) CHECK(n3.matrix(s, s) == cplx(__builtin_popcountl(s)));
  CHECK((n3.matrix - CMatrix(n3.matrix.diagonal().asDiagonal())).norm() == 0.0);
  CHECK(second_quantize(HermitianMatrix(CMatrix::Zero(2, 2))).matrix.norm() == 0.0);

  Rng rng(6);
  const CMatrix h = random_gue(rng, 3);
  const FockSpace fs(3);
  const FockOperator dg = second_quantize(HermitianMatrix(h));
  for (int rep = 0; rep < 5; ++rep) {
    const CVector psi = random_cvector(rng, 3);
    const CMatrix comm = dg.matrix * creator(fs, psi).matrix - creator(fs, psi).matrix * dg.matrix;
    CHECK((comm - creator(fs, h * psi).matrix).norm() <= 1e-11);
  }
}

TEST_CASE("quasi-free states") {
  {
    const QuasiFreeState st = quasifree_density(HermitianMatrix(CMatrix::Zero(1, 1)), 1.0);
    CHECK((st.density - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-15);
    CHECK(std::abs(st.symbol(0, 0) - 0.5) <= 1e-15);
  }
  Rng rng(8);
  const CMatrix h = random_gue(rng, 2);
  const QuasiFreeState st = quasifree_density(HermitianMatrix(h), 1.7);
  CHECK(std::abs(st.density.trace() - 1.0) <= 1e-13);
  const CMatrix S = fermi_symbol(h, 1.7);
  CHECK((st.symbol - S).norm() <= 1e-12);
  for (int rep = 0; rep < 5; ++rep) {
    const CVector p1 = random_cvector(rng, 2), p2 = random_cvector(rng, 2);
    const cplx lhs = st.expect(creator(st.space, p1).matrix * annihilator(st.space, p2).matrix);
    CHECK(std::abs(lhs - ip(p2, S * p1)) <= 1e-10);
    CHECK(std::abs(st.expect(creator(st.space, p1).matrix * creator(st.space, p2).matrix)) <= 1e-12);
  }
  // symbol round trip
  const CMatrix sym = random_symbol(rng, 3);
  const QuasiFreeState fs = quasifree_from_symbol(HermitianMatrix(sym));
  CHECK((fs.symbol - sym).norm() <= 1e-12);
  // huge energies stay finite
  const QuasiFreeState cold = quasifree_density(HermitianMatrix::diagonal(RVector::LinSpaced(2, -800, 900)), 1.0);
  CHECK(cold.density.allFinite());
  CHECK(std::abs(cold.density.trace() - 1.0) <= 1e-13);
}

TEST_CASE("monomials and the Wick determinant") {
  Rng rng(21);
  const CMatrix sym = random_symbol(rng, 3);
  const QuasiFreeState st = quasifree_from_symbol(HermitianMatrix(sym));
  const CVector p1 = random_cvector(rng, 3), p2 = random_cvector(rng, 3);

  MonomialSpec two{1, 1, {p1, p2}, {0, 1}};
  CHECK(std::abs(expect_monomial(st, two) - ip(p2, sym * p1)) <= 1e-12);
  two.pi = {1, 0};
  CHECK(std::abs(expect_monomial(st, two) - (ip(p2, sym * p1) - ip(p2, p1))) <= 1e-12);

  MonomialSpec odd{2, 1, {p1, p2, random_cvector(rng, 3)}, {0, 1, 2}};
  CHECK(std::abs(expect_monomial(st, odd)) <= 1e-12);

  // N = 2 with a transposition, against the two-point determinant
  std::vector<CVector> psi;
  for (int i = 0; i < 4; ++i) psi.push_back(random_cvector(rng, 3));
  const Permutation pi{0, 2, 1, 3};
  const MonomialSpec four{2, 2, psi, pi};
  const cplx wick = wick_determinant(symbol_two_point(sym, psi, 2), 2, pi);
  CHECK(std::abs(expect_monomial(st, four) - wick) <= 1e-10 * std::max(1.0, std::abs(wick)));

  CHECK(four.label_of_slot(2) == 3);
  CHECK(four.label_of_slot(3) == 2);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  Rng rng(33);
  for (int d : {1, 3, 6}) {
    const CMatrix h = random_gue(rng, d);
    CHECK(kernels::serial::dgamma(h) == kernels::omp::dgamma(h));
    const CVector psi = random_cvector(rng, d);
    CHECK(kernels::serial::annihilator(psi) == kernels::omp::annihilator(psi));
  }
  const DiscreteTorus t(1.0, 16);
  std::vector<double> ls;
  for (int i = 0; i < 40; ++i) ls.push_back(uniform(rng, -100, 100));
  ls.push_back(16.0);
  CHECK(kernels::serial::kernel_table(ls, t, std::nullopt) == kernels::omp::kernel_table(ls, t, std::nullopt));
  CHECK(kernels::serial::kernel_table(ls, t, 5.0) == kernels::omp::kernel_table(ls, t, 5.0));
  CHECK(kernels::jw_sign(0b101u, 2) == -1.0);
  CHECK(kernels::jw_sign(0b101u, 0) == 1.0);
}

TEST_CASE("permutation helpers") {
  CHECK(is_permutation(std::vector<int>{2, 0, 1}));
  CHECK_FALSE(is_permutation(std::vector<int>{0, 0, 1}));
  CHECK(permutation_sign(std::vector<int>{1, 0}) == -1);
  CHECK(permutation_sign(std::vector<int>{2, 0, 1}) == 1);
  CHECK(inverse_permutation(std::vector<int>{2, 0, 1}) == Permutation{1, 2, 0});
}

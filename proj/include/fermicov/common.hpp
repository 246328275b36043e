#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fermicov {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Invalid arguments: shape mismatch, off-grid points, violated preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerically pathological input: solver failure, overflow/underflow guards.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fock space larger than the configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Permutations are stored 0-based as image vectors: perm[i] = pi(i).
using Permutation = std::vector<int>;

bool is_permutation(std::span<const int> perm);

/// Sign of a permutation (or of any sequence of distinct integers) by
/// inversion count.
int permutation_sign(std::span<const int> seq);

Permutation inverse_permutation(std::span<const int> perm);

}  // namespace fermicov

#pragma once

#include <vector>

#include "fermicov/common.hpp"
#include "fermicov/torus.hpp"

namespace fermicov {

/// Time ordering of the 2N operators of a covariance determinant. Labels
/// 0..N-1 are creators (alpha-tilde = alpha), N..2N-1 annihilators
/// (alpha-tilde = alpha + beta/n). Positions sort by alpha, creators before
/// annihilators at equal alpha, then by label.
struct OrderingPermutation {
  Permutation position_of;  // label -> position
  Permutation label_at;     // position -> label
  int sign = 1;             // relative to (a+_1..a+_N, a_2N..a_N+1)
  std::vector<int> shifted_units;  // alpha-tilde in grid steps, per label
  std::vector<int> increments;     // by position; [0] = 0, [i] = units(i) - units(i-1)
  int split = 0;                   // first position with alpha-tilde >= beta/2 (2N if none)

  int units_at(int pos) const { return shifted_units[label_at[pos]]; }
};

/// alphas: 2N grid points in [0, beta). Throws DomainError otherwise.
OrderingPermutation build_ordering_permutation(const std::vector<TorusPoint>& alphas, int N,
                                               const DiscreteTorus& torus);

/// Re-inspects the two ordering conditions directly: alpha-tilde nondecreasing
/// along positions, and creators strictly before annihilators at equal alpha.
bool ordering_conditions_hold(const OrderingPermutation& op, const std::vector<TorusPoint>& alphas, int N);

}  // namespace fermicov

#include "fermicov/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace fermicov {

OrderingPermutation build_ordering_permutation(const std::vector<TorusPoint>& alphas, int N,
                                               const DiscreteTorus& torus) {
  if (N < 1 || static_cast<int>(alphas.size()) != 2 * N)
    throw DomainError("build_ordering_permutation: need 2N grid points");
  for (const auto& a : alphas)
    if (a.index < 1 || a.index > torus.size() || !torus.in_upper_window(a))
      throw DomainError("build_ordering_permutation: alpha must be a grid point in [0, beta)");

  const int total = 2 * N;
  OrderingPermutation op;
  op.shifted_units.resize(total);
  for (int q = 0; q < total; ++q) op.shifted_units[q] = torus.steps(alphas[q]) + (q >= N ? 1 : 0);

  op.label_at.resize(total);
  std::iota(op.label_at.begin(), op.label_at.end(), 0);
  std::sort(op.label_at.begin(), op.label_at.end(), [&](int a, int b) {
    return std::make_tuple(alphas[a].index, a >= N, a) < std::make_tuple(alphas[b].index, b >= N, b);
  });
  op.position_of = inverse_permutation(op.label_at);

  // reference slot of each label: creators in order, annihilators reversed
  std::vector<int> ref_slot(total);
  for (int pos = 0; pos < total; ++pos) {
    const int q = op.label_at[pos];
    ref_slot[pos] = q < N ? q : 3 * N - 1 - q;
  }
  op.sign = permutation_sign(ref_slot);

  op.increments.assign(total, 0);
  for (int pos = 1; pos < total; ++pos) op.increments[pos] = op.units_at(pos) - op.units_at(pos - 1);

  op.split = total;
  for (int pos = 0; pos < total; ++pos)
    if (2 * op.units_at(pos) >= torus.n()) {
      op.split = pos;
      break;
    }
  return op;
}

bool ordering_conditions_hold(const OrderingPermutation& op, const std::vector<TorusPoint>& alphas, int N) {
  const int total = 2 * N;
  if (static_cast<int>(op.position_of.size()) != total || !is_permutation(op.position_of)) return false;
  for (int k = 0; k < total; ++k)
    for (int l = 0; l < total; ++l) {
      if (k == l) continue;
      if (op.shifted_units[k] < op.shifted_units[l] && op.position_of[k] > op.position_of[l]) return false;
    }
  for (int k = 0; k < N; ++k)
    for (int l = N; l < total; ++l)
      if (alphas[k] == alphas[l] && op.position_of[k] > op.position_of[l]) return false;
  for (int pos = 1; pos < total; ++pos)
    if (op.increments[pos] < 0) return false;
  return true;
}

}  // namespace fermicov

#include "fermicov/common.hpp"

namespace fermicov {

bool is_permutation(std::span<const int> perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

int permutation_sign(std::span<const int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) sign = -sign;
  return sign;
}

Permutation inverse_permutation(std::span<const int> perm) {
  if (!is_permutation(perm)) throw DomainError("inverse_permutation: not a permutation");
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

}  // namespace fermicov

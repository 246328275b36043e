#pragma once

#include <cstdint>
#include <random>

#include "fermicov/common.hpp"
#include "fermicov/mspace.hpp"

namespace fermicov {

using Rng = std::mt19937_64;

/// splitmix64 mix of (base, id); gives independent per-instance seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id);

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive
CVector random_cvector(Rng& rng, int d);
/// Haar-ish unitary from the QR of a complex Gaussian matrix.
CMatrix random_unitary(Rng& rng, int d);
/// U diag(eigs) U*
CMatrix random_hermitian(Rng& rng, const RVector& eigs);
/// Gaussian-entry Hermitian matrix (GUE-like), unit scale.
CMatrix random_gue(Rng& rng, int d);
/// B B^T with B of size m x rank.
RMatrix random_psd(Rng& rng, int m, int rank);
/// Random labelled tree on m vertices (random attachment), weights U[0,1].
TreeGraph random_tree(Rng& rng, int m);
/// Symbol with spectrum in [lo, hi] inside (0, 1).
CMatrix random_symbol(Rng& rng, int d, double lo = 0.05, double hi = 0.95);

}  // namespace fermicov

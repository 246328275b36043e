#pragma once

#include <vector>

#include "fermicov/common.hpp"

namespace fermicov {

/// The quotient space built from a PSD Gram matrix M: row k of coords gives
/// the coordinates of e_k in an orthonormal basis, so coords coords* = M.
struct QuotientSpace {
  int m = 0;
  int rank = 0;
  CMatrix coords;

  /// Coordinates of e_k (0-based) as a vector of length rank.
  CVector vector(int k) const { return coords.row(k).adjoint(); }
  CMatrix gram() const { return coords * coords.adjoint(); }

  /// Throws DomainError if M is not symmetric, has an eigenvalue below
  /// -1e-8 ||M||, or is zero. Eigenvalues below 1e-10 ||M|| are dropped.
  static QuotientSpace from_gram(const RMatrix& M);
};

struct TreeEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

struct TreeGraph {
  int vertices = 0;
  std::vector<TreeEdge> edges;

  /// Connected and acyclic.
  bool is_tree() const;
};

class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);

 private:
  std::vector<int> parent_, rank_;
};

/// M_{kl} = int_0^t 1[k ~ l in g minus {edges with weight >= s}] ds, by exact
/// t minus the minimax path weight from k to l, clipped at 0.
RMatrix bk_matrix(const TreeGraph& g, double t);

}  // namespace fermicov

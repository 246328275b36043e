#include "fermicov/mspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace fermicov {

QuotientSpace QuotientSpace::from_gram(const RMatrix& M) {
  if (M.rows() != M.cols() || M.rows() < 1) throw DomainError("quotient_space: M must be square and nonempty");
  if (!M.allFinite()) throw DomainError("quotient_space: non-finite entries");
  const double mnorm = M.cwiseAbs().maxCoeff();
  if (mnorm == 0.0) throw DomainError("quotient_space: M = 0");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, mnorm))
    throw DomainError("quotient_space: M not symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (M + M.transpose()));
  const RVector& w = es.eigenvalues();
  const double spec = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  if (w(0) < -1e-8 * spec) throw DomainError("quotient_space: M is not positive semidefinite");

  std::vector<int> keep;
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i)
    if (w(i) > 1e-10 * spec) keep.push_back(i);
  QuotientSpace q;
  q.m = static_cast<int>(M.rows());
  q.rank = static_cast<int>(keep.size());
  q.coords = CMatrix::Zero(q.m, q.rank);
  for (int c = 0; c < q.rank; ++c) {
    RVector v = es.eigenvectors().col(keep[c]);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    q.coords.col(c) = (std::sqrt(w(keep[c])) * v).cast<cplx>();
  }
  return q;
}

UnionFind::UnionFind(int n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

bool TreeGraph::is_tree() const {
  if (vertices < 1 || static_cast<int>(edges.size()) != vertices - 1) return false;
  UnionFind uf(vertices);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= vertices || e.v >= vertices) return false;
    if (!uf.unite(e.u, e.v)) return false;
  }
  return true;
}

RMatrix bk_matrix(const TreeGraph& g, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("bk_matrix: t must lie in [0, 1]");
  const int m = g.vertices;
  if (m < 1) throw DomainError("bk_matrix: graph has no vertices");
  std::vector<std::vector<std::pair<int, double>>> adj(m);
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= m || e.v >= m) throw DomainError("bk_matrix: edge endpoint out of range");
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) throw DomainError("bk_matrix: edge weights must lie in [0, 1]");
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  // k, l are joined once s exceeds the minimax path weight between them
  // (the largest edge on the best path), so the integral is t minus that
  // merge time, clipped at 0; k = l gives exactly t.
  RMatrix out = RMatrix::Zero(m, m);
  std::vector<double> merge(m);
  std::vector<bool> done(m);
  for (int k = 0; k < m; ++k) {
    std::fill(merge.begin(), merge.end(), INFINITY);
    std::fill(done.begin(), done.end(), false);
    merge[k] = 0.0;
    for (int it = 0; it < m; ++it) {
      int v = -1;
      for (int w = 0; w < m; ++w)
        if (!done[w] && merge[w] < INFINITY && (v < 0 || merge[w] < merge[v])) v = w;
      if (v < 0) break;
      done[v] = true;
      for (const auto& [w, wt] : adj[v]) merge[w] = std::min(merge[w], std::max(merge[v], wt));
    }
    for (int l = 0; l < m; ++l) out(k, l) = merge[l] < t ? t - merge[l] : 0.0;
  }
  return out;
}

}  // namespace fermicov

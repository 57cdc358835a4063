#pragma once

#include <numeric>
#include <vector>

namespace netd {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n = 0) { reset(n); }

  void reset(int n) {
    parent.resize(n);
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // Smaller root wins so component labels are stable regardless of
    // union order; several callers rely on that for determinism.
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }
};

}  // namespace netd

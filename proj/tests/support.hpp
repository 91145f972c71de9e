#pragma once

// Independent oracles and seeded generators shared by the unit tests. The
// oracles here deliberately avoid the library's hom-set and enumeration code.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dblcat/corpus.hpp"

namespace testing_support {

using namespace dblcat;

// Monotone maps [a] -> [b], by walking every sequence.
inline std::uint64_t count_monotone(int a, int b) {
  std::uint64_t n = 0;
  std::function<void(int, int)> walk = [&](int pos, int lo) {
    if (pos > a) {
      ++n;
      return;
    }
    for (int v = lo; v <= b; ++v) walk(pos + 1, v);
  };
  walk(0, 0);
  return n;
}

inline std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Monotone maps from the join [q] * [p] (q + p + 2 elements) into [n].
inline std::uint64_t join_count(int n, int p, int q) { return count_monotone(p + q + 1, n); }

// Order pairs i <= j in [n], counted directly.
inline int order_pairs(int n) {
  int c = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) ++c;
  return c;
}

// alpha: x -> y is cartesian iff every horn (beta: z -> y, gamma: pz -> px with
// p(alpha) gamma = p(beta)) has exactly one filler delta: z -> x. Scans whole
// morphism lists instead of hom-sets.
inline bool horn_cartesian(const FinFunctor& p, int alpha) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  const int x = D.src[alpha], y = D.tgt[alpha];
  const int pa = p.on_morphisms[alpha];
  for (int beta = 0; beta < D.num_morphisms(); ++beta) {
    if (D.tgt[beta] != y) continue;
    const int z = D.src[beta];
    for (int gamma = 0; gamma < C.num_morphisms(); ++gamma) {
      if (C.src[gamma] != p.on_objects[z] || C.tgt[gamma] != p.on_objects[x]) continue;
      if (C.compose(pa, gamma) != p.on_morphisms[beta]) continue;
      int fillers = 0;
      for (int delta = 0; delta < D.num_morphisms(); ++delta)
        if (D.src[delta] == z && D.tgt[delta] == x && p.on_morphisms[delta] == gamma &&
            D.compose(alpha, delta) == beta)
          ++fillers;
      if (fillers != 1) return false;
    }
  }
  return true;
}

// Cartesian fibration by horn fillers: each (gamma: c -> py) has a cartesian lift.
inline bool horn_cartesian_fibration(const FinFunctor& p) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  for (int y = 0; y < D.num_objects(); ++y)
    for (int gamma = 0; gamma < C.num_morphisms(); ++gamma) {
      if (C.tgt[gamma] != p.on_objects[y]) continue;
      bool found = false;
      for (int a = 0; a < D.num_morphisms() && !found; ++a)
        found = D.tgt[a] == y && p.on_morphisms[a] == gamma && horn_cartesian(p, a);
      if (!found) return false;
    }
  return true;
}

// Every (gamma: c -> py) has exactly one lift with target y.
inline bool unique_lifts_by_target(const FinFunctor& p) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  for (int y = 0; y < D.num_objects(); ++y)
    for (int gamma = 0; gamma < C.num_morphisms(); ++gamma) {
      if (C.tgt[gamma] != p.on_objects[y]) continue;
      int n = 0;
      for (int a = 0; a < D.num_morphisms(); ++a) n += D.tgt[a] == y && p.on_morphisms[a] == gamma;
      if (n != 1) return false;
    }
  return true;
}

// Poset on 0..n-1 from a random DAG with edges i -> j for i < j, closed
// transitively; morphisms listed as pairs.
inline FinCategory gen_poset(std::mt19937& rng, int n, double density = 0.4) {
  std::bernoulli_distribution edge(density);
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    le[i][i] = 1;
    for (int j = i + 1; j < n; ++j) le[i][j] = edge(rng);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = 1;
  CategoryBuilder b;
  for (int i = 0; i < n; ++i) b.add_object(std::to_string(i));
  std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) arrow[i][i] = b.identity(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (le[i][j]) arrow[i][j] = b.add_morphism(std::to_string(i) + "<" + std::to_string(j), i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (arrow[i][j] >= 0 && arrow[j][k] >= 0) b.set_comp(arrow[j][k], arrow[i][j], arrow[i][k]);
  return b.finish();
}

// Two objects with an inverse pair between them.
inline FinCategory iso_pair() {
  CategoryBuilder b;
  int x = b.add_object("x"), y = b.add_object("y");
  int f = b.add_morphism("f", x, y), g = b.add_morphism("g", y, x);
  b.set_comp(g, f, b.identity(x));
  b.set_comp(f, g, b.identity(y));
  return b.finish();
}

// One object with an idempotent e: e e = e.
inline FinCategory idempotent() {
  CategoryBuilder b;
  int x = b.add_object("x");
  int e = b.add_morphism("e", x, x);
  b.set_comp(e, e, e);
  return b.finish();
}

// Functor between thin categories determined by a monotone object map;
// nullopt when the map is not order preserving.
inline std::optional<FinFunctor> thin_functor(CategoryPtr a, CategoryPtr b, const std::vector<int>& ob) {
  FinFunctor f{a, b, ob, {}};
  for (int k = 0; k < a->num_morphisms(); ++k) {
    auto h = b->hom(ob[a->src[k]], ob[a->tgt[k]]);
    if (h.size() != 1) return std::nullopt;
    f.on_morphisms.push_back(h[0]);
  }
  return f;
}

// A random order-preserving functor between posets, retrying object maps.
inline std::optional<FinFunctor> gen_thin_functor(std::mt19937& rng, CategoryPtr a, CategoryPtr b) {
  std::uniform_int_distribution<int> pick(0, b->num_objects() - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<int> ob(a->num_objects());
    for (int& o : ob) o = pick(rng);
    if (auto f = thin_functor(a, b, ob)) return f;
  }
  return std::nullopt;
}

template <class T>
std::shared_ptr<const T> share(T v) {
  return std::make_shared<const T>(std::move(v));
}

// Shared small corpus for unit tests (the acceptance binary uses the full one).
inline const std::vector<CorpusEntry>& small_corpus() {
  static const std::vector<CorpusEntry> c = [] {
    CorpusOptions o;
    o.seed = 7;
    o.count = 40;
    return generate_corpus(o);
  }();
  return c;
}

}  // namespace testing_support

#include "dblcat/two_cat.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dblcat/enumerate.hpp"

namespace dblcat {

namespace {

int triple(int n, int x, int y, int z) { return (x * n + y) * n + z; }

CategoryPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

FinCategory empty_category() { return discrete({}); }

// Fills comp1 for a 2-category whose only composites with non-unit factors are
// listed in extra as (x, y, z, g, f, gf).
void unit_comp1(FinTwoCategory& t, const std::vector<std::array<int, 6>>& extra) {
  const int n = t.num_objects();
  t.comp1.assign(n * n * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int a = t.hom(x, y).num_objects(), b = t.hom(y, z).num_objects();
        auto& tab = t.comp1[triple(n, x, y, z)];
        tab.assign(a * b, -1);
        for (int g = 0; g < b; ++g)
          for (int f = 0; f < a; ++f) {
            if (y == z && g == t.unit[y]) tab[g * a + f] = f;
            else if (x == y && f == t.unit[x]) tab[g * a + f] = g;
          }
      }
  for (auto [x, y, z, g, f, gf] : extra) t.comp1[triple(n, x, y, z)][g * t.hom(x, y).num_objects() + f] = gf;
}

// Per-hom ranks of the cells of a double category with identity v-arrows.
struct LocalIndex {
  int n = 0;
  std::vector<int> h_local, s_local;  // global -> rank within its hom
  std::vector<std::vector<int>> h_global, s_global;  // per (x, y): rank -> global
  explicit LocalIndex(const FinDoubleCategory& d) : n(d.num_objects()) {
    h_global.assign(n * n, {});
    s_global.assign(n * n, {});
    for (int h = 0; h < d.num_h(); ++h) {
      auto& v = h_global[d.h_src[h] * n + d.h_tgt[h]];
      h_local.push_back(static_cast<int>(v.size()));
      v.push_back(h);
    }
    for (int s = 0; s < d.num_s(); ++s) {
      auto& v = s_global[d.h_src[d.s_top[s]] * n + d.h_tgt[d.s_top[s]]];
      s_local.push_back(static_cast<int>(v.size()));
      v.push_back(s);
    }
  }
};

struct NerveOffsets {
  std::vector<int> h_off, s_off;
  explicit NerveOffsets(const FinTwoCategory& t) {
    const int n = t.num_objects();
    int h = 0, s = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        h_off.push_back(h);
        s_off.push_back(s);
        h += t.hom(x, y).num_objects();
        s += t.hom(x, y).num_morphisms();
      }
    h_off.push_back(h);
    s_off.push_back(s);
  }
  int h(int n, int x, int y, int f) const { return h_off[x * n + y] + f; }
  int s(int n, int x, int y, int a) const { return s_off[x * n + y] + a; }
};

bool is_gaunt_category(const FinCategory& c) {
  for (int f = 0; f < c.num_morphisms(); ++f)
    if (!c.is_identity(f) && c.inverse(f)) return false;
  return true;
}

bool is_identity_functor(const FinFunctor& f) {
  for (int i = 0; i < static_cast<int>(f.on_objects.size()); ++i)
    if (f.on_objects[i] != i) return false;
  for (int i = 0; i < static_cast<int>(f.on_morphisms.size()); ++i)
    if (f.on_morphisms[i] != i) return false;
  return true;
}

std::string cell_name(const FinTwoCategory& t, int x, int y, int f) {
  return t.objects[x] + "->" + t.objects[y] + ":" + t.hom(x, y).objects[f];
}

}  // namespace

int FinTwoCategory::compose1(int x, int y, int z, int g, int f) const {
  return comp1[triple(num_objects(), x, y, z)][g * hom(x, y).num_objects() + f];
}

int FinTwoCategory::compose2(int x, int y, int z, int beta, int alpha) const {
  return comp2[triple(num_objects(), x, y, z)][beta * hom(x, y).num_morphisms() + alpha];
}

bool FinTwoCategory::operator==(const FinTwoCategory& o) const {
  if (objects != o.objects || unit != o.unit || comp1 != o.comp1 || comp2 != o.comp2) return false;
  if (homs.size() != o.homs.size()) return false;
  for (std::size_t i = 0; i < homs.size(); ++i)
    if (!(*homs[i] == *o.homs[i])) return false;
  return true;
}

Report validate_two_category(const FinTwoCategory& t) {
  Report r;
  const int n = t.num_objects();
  if (static_cast<int>(t.homs.size()) != n * n || static_cast<int>(t.unit.size()) != n ||
      static_cast<int>(t.comp1.size()) != n * n * n || static_cast<int>(t.comp2.size()) != n * n * n) {
    r.add("shape", "hom, unit or composition arrays have the wrong length");
    return r;
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!t.homs[x * n + y]) {
        r.add("shape", "missing hom " + t.objects[x] + "," + t.objects[y]);
        return r;
      }
      for (auto& v : validate_category(t.hom(x, y)).violations)
        r.add("hom " + t.objects[x] + "," + t.objects[y] + ": " + v.law, v.witness);
    }
  for (int x = 0; x < n; ++x)
    if (t.unit[x] < 0 || t.unit[x] >= t.hom(x, x).num_objects()) r.add("unit", "no unit at " + t.objects[x]);
  if (!r.ok()) return r;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FinCategory &A = t.hom(x, y), &B = t.hom(y, z), &AB = t.hom(x, z);
        if (static_cast<int>(t.comp1[triple(n, x, y, z)].size()) != A.num_objects() * B.num_objects() ||
            static_cast<int>(t.comp2[triple(n, x, y, z)].size()) != A.num_morphisms() * B.num_morphisms()) {
          r.add("shape", "composition table size at " + t.objects[x] + "," + t.objects[y] + "," + t.objects[z]);
          return r;
        }
        for (int g = 0; g < B.num_objects(); ++g)
          for (int f = 0; f < A.num_objects(); ++f) {
            int gf = t.compose1(x, y, z, g, f);
            if (gf < 0 || gf >= AB.num_objects())
              r.add("composition", "undefined " + cell_name(t, y, z, g) + " o " + cell_name(t, x, y, f));
          }
        for (int b = 0; b < B.num_morphisms(); ++b)
          for (int a = 0; a < A.num_morphisms(); ++a) {
            int ba = t.compose2(x, y, z, b, a);
            if (ba < 0 || ba >= AB.num_morphisms()) {
              r.add("composition", "undefined 2-cell composite " + B.morphisms[b] + " * " + A.morphisms[a]);
              continue;
            }
            if (AB.src[ba] != t.compose1(x, y, z, B.src[b], A.src[a]) ||
                AB.tgt[ba] != t.compose1(x, y, z, B.tgt[b], A.tgt[a]))
              r.add("functoriality", "boundary of " + B.morphisms[b] + " * " + A.morphisms[a]);
          }
      }
  if (!r.ok()) return r;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FinCategory &A = t.hom(x, y), &B = t.hom(y, z), &AB = t.hom(x, z);
        for (int g = 0; g < B.num_objects(); ++g)
          for (int f = 0; f < A.num_objects(); ++f)
            if (t.compose2(x, y, z, B.ident[g], A.ident[f]) != AB.ident[t.compose1(x, y, z, g, f)])
              r.add("functoriality", "identity 2-cells at " + cell_name(t, y, z, g) + " o " + cell_name(t, x, y, f));
        for (int b1 = 0; b1 < B.num_morphisms(); ++b1)
          for (int b2 : B.out[B.tgt[b1]])
            for (int a1 = 0; a1 < A.num_morphisms(); ++a1)
              for (int a2 : A.out[A.tgt[a1]]) {
                int lhs = t.compose2(x, y, z, B.compose(b2, b1), A.compose(a2, a1));
                int rhs = AB.compose(t.compose2(x, y, z, b2, a2), t.compose2(x, y, z, b1, a1));
                if (lhs != rhs)
                  r.add("interchange", "(" + B.morphisms[b2] + " o " + B.morphisms[b1] + ") * (" + A.morphisms[a2] +
                                           " o " + A.morphisms[a1] + ")");
              }
      }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& A = t.hom(x, y);
      const int ux = t.unit[x], uy = t.unit[y];
      const int iux = t.hom(x, x).ident[ux], iuy = t.hom(y, y).ident[uy];
      for (int f = 0; f < A.num_objects(); ++f)
        if (t.compose1(x, x, y, f, ux) != f || t.compose1(x, y, y, uy, f) != f)
          r.add("unit", cell_name(t, x, y, f));
      for (int a = 0; a < A.num_morphisms(); ++a)
        if (t.compose2(x, x, y, a, iux) != a || t.compose2(x, y, y, iuy, a) != a)
          r.add("unit", "2-cell " + A.morphisms[a]);
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const FinCategory &A = t.hom(x, y), &B = t.hom(y, z), &Cc = t.hom(z, w);
          for (int h = 0; h < Cc.num_objects(); ++h)
            for (int g = 0; g < B.num_objects(); ++g)
              for (int f = 0; f < A.num_objects(); ++f)
                if (t.compose1(x, z, w, h, t.compose1(x, y, z, g, f)) !=
                    t.compose1(x, y, w, t.compose1(y, z, w, h, g), f))
                  r.add("associativity", cell_name(t, z, w, h) + " o " + cell_name(t, y, z, g) + " o " +
                                             cell_name(t, x, y, f));
          for (int c = 0; c < Cc.num_morphisms(); ++c)
            for (int b = 0; b < B.num_morphisms(); ++b)
              for (int a = 0; a < A.num_morphisms(); ++a)
                if (t.compose2(x, z, w, c, t.compose2(x, y, z, b, a)) !=
                    t.compose2(x, y, w, t.compose2(y, z, w, c, b), a))
                  r.add("associativity", "2-cells " + Cc.morphisms[c] + " * " + B.morphisms[b] + " * " + A.morphisms[a]);
        }
  return r;
}

Report validate_two_functor(const TwoFunctor& f) {
  Report r;
  if (!f.source || !f.target) {
    r.add("shape", "missing source or target");
    return r;
  }
  const FinTwoCategory &S = *f.source, &T = *f.target;
  const int n = S.num_objects();
  if (static_cast<int>(f.ob.size()) != n || static_cast<int>(f.homs.size()) != n * n) {
    r.add("shape", "object map or hom functors have the wrong length");
    return r;
  }
  for (int x = 0; x < n; ++x)
    if (f.ob[x] < 0 || f.ob[x] >= T.num_objects()) {
      r.add("objects", "no image for " + S.objects[x]);
      return r;
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinFunctor& h = f.hom(x, y);
      if (!h.source || !h.target || !(*h.source == S.hom(x, y)) || !(*h.target == T.hom(f.ob[x], f.ob[y]))) {
        r.add("hom functor", "wrong source or target at " + S.objects[x] + "," + S.objects[y]);
        continue;
      }
      for (auto& v : validate_functor(h).violations)
        r.add("hom functor " + S.objects[x] + "," + S.objects[y] + ": " + v.law, v.witness);
    }
  if (!r.ok()) return r;
  for (int x = 0; x < n; ++x)
    if (f.hom(x, x).on_objects[S.unit[x]] != T.unit[f.ob[x]]) r.add("unit", "at " + S.objects[x]);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FinCategory &A = S.hom(x, y), &B = S.hom(y, z);
        const FinFunctor &fa = f.hom(x, y), &fb = f.hom(y, z), &fab = f.hom(x, z);
        const int X = f.ob[x], Y = f.ob[y], Z = f.ob[z];
        for (int g = 0; g < B.num_objects(); ++g)
          for (int h = 0; h < A.num_objects(); ++h)
            if (fab.on_objects[S.compose1(x, y, z, g, h)] != T.compose1(X, Y, Z, fb.on_objects[g], fa.on_objects[h]))
              r.add("composition", cell_name(S, y, z, g) + " o " + cell_name(S, x, y, h));
        for (int b = 0; b < B.num_morphisms(); ++b)
          for (int a = 0; a < A.num_morphisms(); ++a)
            if (fab.on_morphisms[S.compose2(x, y, z, b, a)] !=
                T.compose2(X, Y, Z, fb.on_morphisms[b], fa.on_morphisms[a]))
              r.add("composition", "2-cells " + B.morphisms[b] + " * " + A.morphisms[a]);
      }
  return r;
}

void fill_thin_comp2(FinTwoCategory& t) {
  const int n = t.num_objects();
  t.comp2.assign(n * n * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FinCategory &A = t.hom(x, y), &B = t.hom(y, z), &AB = t.hom(x, z);
        auto& tab = t.comp2[triple(n, x, y, z)];
        tab.assign(A.num_morphisms() * B.num_morphisms(), -1);
        for (int b = 0; b < B.num_morphisms(); ++b)
          for (int a = 0; a < A.num_morphisms(); ++a) {
            auto h = AB.hom(t.compose1(x, y, z, B.src[b], A.src[a]), t.compose1(x, y, z, B.tgt[b], A.tgt[a]));
            if (h.size() != 1) throw ContractError("fill_thin_comp2: hom is not thin or composite missing");
            tab[b * A.num_morphisms() + a] = h[0];
          }
      }
}

FinTwoCategory locally_discrete(const FinCategory& c) {
  FinTwoCategory t;
  t.objects = c.objects;
  const int n = c.num_objects();
  std::vector<int> local(c.num_morphisms());
  std::vector<std::vector<int>> cells(n * n);
  for (int f = 0; f < c.num_morphisms(); ++f) {
    auto& v = cells[c.src[f] * n + c.tgt[f]];
    local[f] = static_cast<int>(v.size());
    v.push_back(f);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<std::string> names;
      for (int f : cells[x * n + y]) names.push_back(c.morphisms[f]);
      t.homs.push_back(share(discrete(names)));
    }
  for (int x = 0; x < n; ++x) t.unit.push_back(local[c.ident[x]]);
  t.comp1.assign(n * n * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const auto &A = cells[x * n + y], &B = cells[y * n + z];
        auto& tab = t.comp1[triple(n, x, y, z)];
        tab.assign(A.size() * B.size(), -1);
        for (std::size_t g = 0; g < B.size(); ++g)
          for (std::size_t f = 0; f < A.size(); ++f) tab[g * A.size() + f] = local[c.compose(B[g], A[f])];
      }
  t.comp2 = t.comp1;  // discrete homs: morphism i is the identity of object i
  return t;
}

FinCategory underlying_category(const FinTwoCategory& t) {
  const int n = t.num_objects();
  NerveOffsets off(t);
  FinCategory c;
  c.objects = t.objects;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int f = 0; f < t.hom(x, y).num_objects(); ++f) {
        c.morphisms.push_back(t.hom(x, y).objects[f]);
        c.src.push_back(x);
        c.tgt.push_back(y);
      }
  for (int x = 0; x < n; ++x) c.ident.push_back(off.h(n, x, x, t.unit[x]));
  c.comp.reset(c.morphisms.size());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int g = 0; g < t.hom(y, z).num_objects(); ++g)
          for (int f = 0; f < t.hom(x, y).num_objects(); ++f)
            c.comp.set(off.h(n, y, z, g), off.h(n, x, y, f), off.h(n, x, z, t.compose1(x, y, z, g, f)));
  c.index();
  return c;
}

FinFunctor underlying_functor(const TwoFunctor& f, CategoryPtr source, CategoryPtr target) {
  const FinTwoCategory &S = *f.source, &T = *f.target;
  const int n = S.num_objects(), m = T.num_objects();
  NerveOffsets so(S), to(T);
  FinFunctor r{source, target, f.ob, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int g : f.hom(x, y).on_objects) r.on_morphisms.push_back(to.h(m, f.ob[x], f.ob[y], g));
  return r;
}

FinTwoCategory product(const FinTwoCategory& a, const FinTwoCategory& b) {
  FinTwoCategory t;
  const int na = a.num_objects(), nb = b.num_objects(), n = na * nb;
  for (auto& x : a.objects)
    for (auto& y : b.objects) t.objects.push_back("(" + x + "," + y + ")");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t.homs.push_back(share(product(a.hom(x / nb, y / nb), b.hom(x % nb, y % nb))));
  for (int x = 0; x < n; ++x) t.unit.push_back(a.unit[x / nb] * b.hom(x % nb, x % nb).num_objects() + b.unit[x % nb]);
  t.comp1.assign(n * n * n, {});
  t.comp2.assign(n * n * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int xa = x / nb, ya = y / nb, za = z / nb, xb = x % nb, yb = y % nb, zb = z % nb;
        const FinCategory &A1 = a.hom(xa, ya), &A2 = a.hom(ya, za), &B1 = b.hom(xb, yb), &B2 = b.hom(yb, zb);
        const int o1 = B1.num_objects(), o2 = B2.num_objects(), o12 = b.hom(xb, zb).num_objects();
        const int m1 = B1.num_morphisms(), m2 = B2.num_morphisms(), m12 = b.hom(xb, zb).num_morphisms();
        auto& c1 = t.comp1[triple(n, x, y, z)];
        c1.assign(A1.num_objects() * o1 * A2.num_objects() * o2, -1);
        for (int g = 0; g < A2.num_objects() * o2; ++g)
          for (int f = 0; f < A1.num_objects() * o1; ++f)
            c1[g * A1.num_objects() * o1 + f] =
                a.compose1(xa, ya, za, g / o2, f / o1) * o12 + b.compose1(xb, yb, zb, g % o2, f % o1);
        auto& c2 = t.comp2[triple(n, x, y, z)];
        c2.assign(A1.num_morphisms() * m1 * A2.num_morphisms() * m2, -1);
        for (int g = 0; g < A2.num_morphisms() * m2; ++g)
          for (int f = 0; f < A1.num_morphisms() * m1; ++f)
            c2[g * A1.num_morphisms() * m1 + f] =
                a.compose2(xa, ya, za, g / m2, f / m1) * m12 + b.compose2(xb, yb, zb, g % m2, f % m1);
      }
  return t;
}

TwoFunctor product_projection(TwoPtr a, TwoPtr b, TwoPtr ab, int factor) {
  TwoFunctor f{ab, factor == 0 ? a : b, {}, {}};
  const int nb = b->num_objects(), n = ab->num_objects();
  for (int x = 0; x < n; ++x) f.ob.push_back(factor == 0 ? x / nb : x % nb);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& B = b->hom(x % nb, y % nb);
      const int o = B.num_objects(), m = B.num_morphisms();
      FinFunctor h{ab->homs[x * n + y], f.target->homs[f.ob[x] * f.target->num_objects() + f.ob[y]], {}, {}};
      for (int i = 0; i < ab->hom(x, y).num_objects(); ++i) h.on_objects.push_back(factor == 0 ? i / o : i % o);
      for (int i = 0; i < ab->hom(x, y).num_morphisms(); ++i) h.on_morphisms.push_back(factor == 0 ? i / m : i % m);
      f.homs.push_back(std::move(h));
    }
  return f;
}

TwoFunctor identity_two_functor(TwoPtr t) {
  TwoFunctor f{t, t, {}, {}};
  for (int x = 0; x < t->num_objects(); ++x) f.ob.push_back(x);
  for (auto& h : t->homs) f.homs.push_back(identity_functor(h));
  return f;
}

FinTwoCategory two_cell() {
  FinTwoCategory t;
  t.objects = {"0", "1"};
  FinCategory c = chain(1);
  c.objects = {"f0", "f1"};
  c.morphisms = {"id_f0", "f0=>f1", "id_f1"};
  t.homs = {share(discrete({"id0"})), share(std::move(c)), share(empty_category()), share(discrete({"id1"}))};
  t.unit = {0, 0};
  unit_comp1(t, {});
  fill_thin_comp2(t);
  return t;
}

FinTwoCategory lax_triangle() {
  FinTwoCategory t;
  t.objects = {"0", "1", "2"};
  FinCategory c = chain(1);
  c.objects = {"12.01", "02"};
  c.morphisms = {"id_12.01", "12.01=>02", "id_02"};
  auto none = share(empty_category());
  t.homs = {share(discrete({"id0"})), share(discrete({"01"})), share(std::move(c)),
            none, share(discrete({"id1"})), share(discrete({"12"})),
            none, none, share(discrete({"id2"}))};
  t.unit = {0, 0, 0};
  unit_comp1(t, {{0, 1, 2, 0, 0, 0}});
  fill_thin_comp2(t);
  return t;
}

TwoFunctor lax_triangle_projection(TwoPtr lax, TwoPtr cell) {
  TwoFunctor f{lax, cell, {0, 1, 1}, {}};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      FinFunctor h{lax->homs[x * 3 + y], cell->homs[f.ob[x] * 2 + f.ob[y]], {}, {}};
      const FinCategory& A = lax->hom(x, y);
      if (x == 0 && y == 2) {
        h.on_objects = {0, 1};
        h.on_morphisms = {0, 1, 2};
      } else {
        h.on_objects.assign(A.num_objects(), 0);
        h.on_morphisms.assign(A.num_morphisms(), 0);
      }
      f.homs.push_back(std::move(h));
    }
  return f;
}

int nerve_h_index(const FinTwoCategory& t, int x, int y, int f) {
  return NerveOffsets(t).h(t.num_objects(), x, y, f);
}

int nerve_s_index(const FinTwoCategory& t, int x, int y, int alpha) {
  return NerveOffsets(t).s(t.num_objects(), x, y, alpha);
}

FinDoubleCategory double_nerve(const FinTwoCategory& t) {
  const int n = t.num_objects();
  NerveOffsets off(t);
  FinDoubleCategory d;
  d.objects = t.objects;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& A = t.hom(x, y);
      for (int f = 0; f < A.num_objects(); ++f) {
        d.h_names.push_back(A.objects[f]);
        d.h_src.push_back(x);
        d.h_tgt.push_back(y);
      }
      for (int a = 0; a < A.num_morphisms(); ++a) {
        d.s_names.push_back(A.morphisms[a]);
        d.s_top.push_back(off.h(n, x, y, A.src[a]));
        d.s_bot.push_back(off.h(n, x, y, A.tgt[a]));
        d.s_left.push_back(x);
        d.s_right.push_back(y);
      }
    }
  for (int x = 0; x < n; ++x) {
    d.v_names.push_back("id_" + t.objects[x]);
    d.v_src.push_back(x);
    d.v_tgt.push_back(x);
    d.v_id.push_back(x);
    d.h_id.push_back(off.h(n, x, x, t.unit[x]));
    d.s_hid.push_back(off.s(n, x, x, t.hom(x, x).ident[t.unit[x]]));
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int f = 0; f < t.hom(x, y).num_objects(); ++f) d.s_vid.push_back(off.s(n, x, y, t.hom(x, y).ident[f]));
  d.reset_tables();
  for (int x = 0; x < n; ++x) d.v_comp.set(x, x, x);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& A = t.hom(x, y);
      A.comp.for_each([&](int b, int a, int ba) { d.s_vcomp.set(off.s(n, x, y, b), off.s(n, x, y, a), off.s(n, x, y, ba)); });
      for (int z = 0; z < n; ++z) {
        const FinCategory& B = t.hom(y, z);
        for (int g = 0; g < B.num_objects(); ++g)
          for (int f = 0; f < A.num_objects(); ++f)
            d.h_comp.set(off.h(n, y, z, g), off.h(n, x, y, f), off.h(n, x, z, t.compose1(x, y, z, g, f)));
        for (int b = 0; b < B.num_morphisms(); ++b)
          for (int a = 0; a < A.num_morphisms(); ++a)
            d.s_hcomp.set(off.s(n, y, z, b), off.s(n, x, y, a), off.s(n, x, z, t.compose2(x, y, z, b, a)));
      }
    }
  d.index();
  return d;
}

DoubleFunctor double_nerve(const TwoFunctor& f, DoublePtr source, DoublePtr target) {
  const FinTwoCategory &S = *f.source, &T = *f.target;
  const int n = S.num_objects(), m = T.num_objects();
  NerveOffsets to(T);
  DoubleFunctor r{source, target, f.ob, {}, f.ob, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int g : f.hom(x, y).on_objects) r.h.push_back(to.h(m, f.ob[x], f.ob[y], g));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a : f.hom(x, y).on_morphisms) r.s.push_back(to.s(m, f.ob[x], f.ob[y], a));
  return r;
}

std::optional<FinTwoCategory> two_category_of(const FinDoubleCategory& d, std::string* why) {
  for (int v = 0; v < d.num_v(); ++v)
    if (!d.v_is_id(v)) {
      if (why) *why = "non-identity vertical arrow " + d.v_names[v];
      return std::nullopt;
    }
  const int n = d.num_objects();
  LocalIndex li(d);
  FinTwoCategory t;
  t.objects = d.objects;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      FinCategory c;
      for (int h : li.h_global[x * n + y]) {
        c.objects.push_back(d.h_names[h]);
        c.ident.push_back(li.s_local[d.s_vid[h]]);
      }
      const auto& sq = li.s_global[x * n + y];
      for (int s : sq) {
        c.morphisms.push_back(d.s_names[s]);
        c.src.push_back(li.h_local[d.s_top[s]]);
        c.tgt.push_back(li.h_local[d.s_bot[s]]);
      }
      c.comp.reset(sq.size());
      for (int b : sq)
        for (int a : sq) {
          int ba = d.svcomp(b, a);
          if (ba >= 0) c.comp.set(li.s_local[b], li.s_local[a], li.s_local[ba]);
        }
      c.index();
      t.homs.push_back(share(std::move(c)));
    }
  for (int x = 0; x < n; ++x) t.unit.push_back(li.h_local[d.h_id[x]]);
  t.comp1.assign(n * n * n, {});
  t.comp2.assign(n * n * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const auto &A = li.h_global[x * n + y], &B = li.h_global[y * n + z];
        auto& c1 = t.comp1[triple(n, x, y, z)];
        c1.assign(A.size() * B.size(), -1);
        for (std::size_t g = 0; g < B.size(); ++g)
          for (std::size_t f = 0; f < A.size(); ++f) {
            int gf = d.hcomp(B[g], A[f]);
            c1[g * A.size() + f] = gf < 0 ? -1 : li.h_local[gf];
          }
        const auto &SA = li.s_global[x * n + y], &SB = li.s_global[y * n + z];
        auto& c2 = t.comp2[triple(n, x, y, z)];
        c2.assign(SA.size() * SB.size(), -1);
        for (std::size_t b = 0; b < SB.size(); ++b)
          for (std::size_t a = 0; a < SA.size(); ++a) {
            int ba = d.shcomp(SB[b], SA[a]);
            c2[b * SA.size() + a] = ba < 0 ? -1 : li.s_local[ba];
          }
      }
  return t;
}

std::optional<TwoFunctor> two_functor_of(const DoubleFunctor& f, TwoPtr source, TwoPtr target) {
  const FinDoubleCategory &S = *f.source, &T = *f.target;
  for (int v = 0; v < S.num_v(); ++v)
    if (!S.v_is_id(v)) return std::nullopt;
  LocalIndex ls(S), lt(T);
  const int n = S.num_objects(), m = T.num_objects();
  TwoFunctor r{source, target, f.ob, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      FinFunctor h{source->homs[x * n + y], target->homs[f.ob[x] * m + f.ob[y]], {}, {}};
      for (int g : ls.h_global[x * n + y]) h.on_objects.push_back(lt.h_local[f.h[g]]);
      for (int s : ls.s_global[x * n + y]) h.on_morphisms.push_back(lt.s_local[f.s[s]]);
      r.homs.push_back(std::move(h));
    }
  return r;
}

namespace {

// hom_D(d1, d2) -> hom_D(d0, d2) x_{hom_C(c0, c2)} hom_C(c1, c2) for alpha: d0 -> d1.
bool comparison_passes(const TwoFunctor& p, int d0, int d1, int d2, int alpha, CompareMode mode,
                       std::string* why) {
  const FinTwoCategory &D = *p.source, &C = *p.target;
  const int c0 = p.ob[d0], c1 = p.ob[d1], c2 = p.ob[d2];
  const int gamma = p.hom(d0, d1).on_objects[alpha];
  const int id_gamma = C.hom(c0, c1).ident[gamma];
  const int id_alpha = D.hom(d0, d1).ident[alpha];
  const FinCategory &A = D.hom(d1, d2), &B = D.hom(d0, d2), &Cc = C.hom(c1, c2);
  const FinFunctor &pb = p.hom(d0, d2), &pa = p.hom(d1, d2);

  FinCategory Q;
  std::map<std::pair<int, int>, int> qob, qmor;
  for (int phi = 0; phi < B.num_objects(); ++phi)
    for (int e = 0; e < Cc.num_objects(); ++e)
      if (pb.on_objects[phi] == C.compose1(c0, c1, c2, e, gamma)) {
        qob[{phi, e}] = Q.num_objects();
        Q.objects.push_back(B.objects[phi] + "|" + Cc.objects[e]);
      }
  for (int nu = 0; nu < B.num_morphisms(); ++nu)
    for (int k = 0; k < Cc.num_morphisms(); ++k) {
      if (pb.on_morphisms[nu] != C.compose2(c0, c1, c2, k, id_gamma)) continue;
      auto s = qob.find({B.src[nu], Cc.src[k]}), t = qob.find({B.tgt[nu], Cc.tgt[k]});
      if (s == qob.end() || t == qob.end()) continue;
      qmor[{nu, k}] = Q.num_morphisms();
      Q.morphisms.push_back(B.morphisms[nu] + "|" + Cc.morphisms[k]);
      Q.src.push_back(s->second);
      Q.tgt.push_back(t->second);
    }
  for (auto& [key, q] : qob) {
    (void)q;
    Q.ident.push_back(-1);
  }
  for (auto& [key, q] : qob) Q.ident[q] = qmor.at({B.ident[key.first], Cc.ident[key.second]});
  Q.comp.reset(Q.morphisms.size());
  for (auto& [g, qg] : qmor)
    for (auto& [f, qf] : qmor) {
      int bn = B.compose(g.first, f.first), bk = Cc.compose(g.second, f.second);
      if (bn < 0 || bk < 0) continue;
      Q.comp.set(qg, qf, qmor.at({bn, bk}));
    }
  Q.index();

  auto qp = share(std::move(Q));
  FinFunctor phi{D.homs[d1 * D.num_objects() + d2], qp, {}, {}};
  for (int psi = 0; psi < A.num_objects(); ++psi) {
    auto it = qob.find({D.compose1(d0, d1, d2, psi, alpha), pa.on_objects[psi]});
    if (it == qob.end()) throw ContractError("comparison functor leaves the pullback");
    phi.on_objects.push_back(it->second);
  }
  for (int nu = 0; nu < A.num_morphisms(); ++nu)
    phi.on_morphisms.push_back(qmor.at({D.compose2(d0, d1, d2, nu, id_alpha), pa.on_morphisms[nu]}));
  bool ok = mode == CompareMode::Iso ? is_isomorphism(phi) : is_equivalence(phi);
  if (!ok && why)
    *why = "comparison at " + D.objects[d2] + " is not an " +
           (mode == CompareMode::Iso ? std::string("isomorphism") : std::string("equivalence")) + " (" +
           std::to_string(A.num_objects()) + "/" + std::to_string(qp->num_objects()) + " objects, " +
           std::to_string(A.num_morphisms()) + "/" + std::to_string(qp->num_morphisms()) + " 2-cells)";
  return ok;
}

bool is_groupoid_over_identities(const FinFunctor& h) {
  const FinCategory &S = *h.source, &T = *h.target;
  for (int f = 0; f < S.num_morphisms(); ++f)
    if (T.is_identity(h.on_morphisms[f]) && !S.inverse(f)) return false;
  return true;
}

}  // namespace

bool is_cocartesian_1cell(const TwoFunctor& p, int d0, int d1, int alpha, CompareMode mode, std::string* why) {
  for (int d2 = 0; d2 < p.source->num_objects(); ++d2)
    if (!comparison_passes(p, d0, d1, d2, alpha, mode, why)) return false;
  return true;
}

TwoFibrationCertificate is_1cocartesian_fibration(const TwoFunctor& p, CompareMode mode) {
  Report v = validate_two_functor(p);
  if (!v.ok()) throw ContractError("is_1cocartesian_fibration: invalid 2-functor: " + v.violations[0].law + " " +
                                   v.violations[0].witness);
  TwoFibrationCertificate cert;
  cert.mode = mode;
  const FinTwoCategory &D = *p.source, &C = *p.target;
  const int n = D.num_objects();

  cert.gaunt_homs = true;
  for (auto& h : D.homs) cert.gaunt_homs = cert.gaunt_homs && is_gaunt_category(*h);

  cert.local_ok = true;
  for (int x = 0; x < n && cert.local_ok; ++x)
    for (int y = 0; y < n && cert.local_ok; ++y) {
      const FinFunctor& h = p.hom(x, y);
      bool ok = mode == CompareMode::Iso ? is_right_fibration(h)
                                         : is_cartesian_fibration(h) && is_groupoid_over_identities(h);
      if (!ok) {
        cert.local_ok = false;
        cert.failure = "hom functor at " + D.objects[x] + "," + D.objects[y] + " has no unique 2-cell lifts";
      }
    }

  // Unique lift of a base 2-cell with prescribed target 1-cell.
  auto lift = [&](int x, int y, int g, int kappa) {
    const FinCategory& A = D.hom(x, y);
    int found = -1;
    for (int a : A.in[g])
      if (p.hom(x, y).on_morphisms[a] == kappa) {
        if (found >= 0) return -2;
        found = a;
      }
    return found;
  };
  cert.composition_ok = cert.local_ok;
  if (cert.local_ok && mode == CompareMode::Iso) {
    for (int x = 0; x < n && cert.composition_ok; ++x)
      for (int y = 0; y < n && cert.composition_ok; ++y)
        for (int z = 0; z < n && cert.composition_ok; ++z) {
          const FinCategory &A = D.hom(x, y), &B = D.hom(y, z);
          const FinCategory &CA = C.hom(p.ob[x], p.ob[y]), &CB = C.hom(p.ob[y], p.ob[z]);
          for (int g = 0; g < B.num_objects() && cert.composition_ok; ++g)
            for (int f = 0; f < A.num_objects() && cert.composition_ok; ++f)
              for (int k : CB.in[p.hom(y, z).on_objects[g]])
                for (int l : CA.in[p.hom(x, y).on_objects[f]]) {
                  int lg = lift(y, z, g, k), lf = lift(x, y, f, l);
                  int lgf = lift(x, z, D.compose1(x, y, z, g, f), C.compose2(p.ob[x], p.ob[y], p.ob[z], k, l));
                  if (lg < 0 || lf < 0 || lgf != D.compose2(x, y, z, lg, lf)) {
                    cert.composition_ok = false;
                    cert.failure = "composition does not preserve the lift at " + cell_name(D, y, z, g) + " o " +
                                   cell_name(D, x, y, f);
                    break;
                  }
                }
        }
  }

  cert.lifts_ok = true;
  cert.unique_lifts = true;
  for (int c0 = 0; c0 < C.num_objects(); ++c0)
    for (int c1 = 0; c1 < C.num_objects(); ++c1)
      for (int gamma = 0; gamma < C.hom(c0, c1).num_objects(); ++gamma)
        for (int d0 = 0; d0 < n; ++d0) {
          if (p.ob[d0] != c0) continue;
          CocartesianLift rec{c0, c1, gamma, d0, -1, -1, 0};
          for (int d1 = 0; d1 < n; ++d1) {
            if (p.ob[d1] != c1) continue;
            for (int a = 0; a < D.hom(d0, d1).num_objects(); ++a) {
              if (p.hom(d0, d1).on_objects[a] != gamma) continue;
              cert.comparisons += n;
              if (!is_cocartesian_1cell(p, d0, d1, a, mode)) continue;
              if (rec.candidates++ == 0) {
                rec.target = d1;
                rec.cell = a;
              }
            }
          }
          if (rec.candidates != 1) cert.unique_lifts = false;
          if (rec.candidates == 0 && cert.lifts_ok) {
            cert.lifts_ok = false;
            if (cert.failure.empty())
              cert.failure = "no cocartesian lift of " + cell_name(C, c0, c1, gamma) + " at " + D.objects[d0];
          }
          cert.lifts.push_back(rec);
        }
  cert.ok = cert.local_ok && cert.composition_ok && cert.lifts_ok;
  return cert;
}

Report validate_two_cat_valued(const TwoCatValuedFunctor& F) {
  Report r;
  if (!F.base) {
    r.add("shape", "missing base");
    return r;
  }
  const FinTwoCategory& t = *F.base;
  const int n = t.num_objects();
  if (static_cast<int>(F.on_objects.size()) != n || static_cast<int>(F.on_1cells.size()) != n * n ||
      static_cast<int>(F.on_2cells.size()) != n * n) {
    r.add("shape", "value arrays have the wrong length");
    return r;
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& A = t.hom(x, y);
      if (static_cast<int>(F.on_1cells[x * n + y].size()) != A.num_objects() ||
          static_cast<int>(F.on_2cells[x * n + y].size()) != A.num_morphisms()) {
        r.add("shape", "per-hom data at " + t.objects[x] + "," + t.objects[y]);
        return r;
      }
      for (int g = 0; g < A.num_objects(); ++g) {
        const FinFunctor& fg = F.on_1cells[x * n + y][g];
        if (!fg.source || !fg.target || !(*fg.source == *F.on_objects[x]) || !(*fg.target == *F.on_objects[y])) {
          r.add("1-cell", "wrong source or target for " + cell_name(t, x, y, g));
          return r;
        }
        for (auto& v : validate_functor(fg).violations) r.add("1-cell " + cell_name(t, x, y, g) + ": " + v.law, v.witness);
      }
      for (int a = 0; a < A.num_morphisms(); ++a)
        if (static_cast<int>(F.on_2cells[x * n + y][a].size()) != F.on_objects[x]->num_objects()) {
          r.add("shape", "components of 2-cell " + A.morphisms[a]);
          return r;
        }
    }
  if (!r.ok()) return r;
  auto F1 = [&](int x, int y, int g) -> const FinFunctor& { return F.on_1cells[x * n + y][g]; };
  auto F2 = [&](int x, int y, int a, int obj) { return F.on_2cells[x * n + y][a][obj]; };
  for (int x = 0; x < n; ++x)
    if (!is_identity_functor(F1(x, x, t.unit[x]))) r.add("unit", "F of the unit at " + t.objects[x]);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory &A = t.hom(x, y), &Fx = *F.on_objects[x], &Fy = *F.on_objects[y];
      for (int a = 0; a < A.num_morphisms(); ++a) {
        const FinFunctor &fs = F1(x, y, A.src[a]), &ft = F1(x, y, A.tgt[a]);
        for (int o = 0; o < Fx.num_objects(); ++o) {
          int m = F2(x, y, a, o);
          if (m < 0 || m >= Fy.num_morphisms() || Fy.src[m] != fs.on_objects[o] || Fy.tgt[m] != ft.on_objects[o]) {
            r.add("2-cell", "component of " + A.morphisms[a] + " at " + Fx.objects[o] + " has the wrong boundary");
            return r;
          }
        }
        for (int mor = 0; mor < Fx.num_morphisms(); ++mor)
          if (Fy.compose(ft.on_morphisms[mor], F2(x, y, a, Fx.src[mor])) !=
              Fy.compose(F2(x, y, a, Fx.tgt[mor]), fs.on_morphisms[mor]))
            r.add("naturality", A.morphisms[a] + " at " + Fx.morphisms[mor]);
        if (A.is_identity(a))
          for (int o = 0; o < Fx.num_objects(); ++o)
            if (!Fy.is_identity(F2(x, y, a, o))) r.add("identity 2-cell", A.morphisms[a] + " at " + Fx.objects[o]);
      }
      A.comp.for_each([&](int b, int a, int ba) {
        for (int o = 0; o < Fx.num_objects(); ++o)
          if (F2(x, y, ba, o) != Fy.compose(F2(x, y, b, o), F2(x, y, a, o)))
            r.add("vertical composition", A.morphisms[b] + " o " + A.morphisms[a] + " at " + Fx.objects[o]);
      });
      for (int z = 0; z < n; ++z) {
        const FinCategory& B = t.hom(y, z);
        const FinCategory& Fz = *F.on_objects[z];
        for (int g = 0; g < B.num_objects(); ++g)
          for (int f = 0; f < A.num_objects(); ++f) {
            FinFunctor comp = compose(F1(y, z, g), F1(x, y, f));
            const FinFunctor& direct = F1(x, z, t.compose1(x, y, z, g, f));
            if (comp.on_objects != direct.on_objects || comp.on_morphisms != direct.on_morphisms)
              r.add("composition", cell_name(t, y, z, g) + " o " + cell_name(t, x, y, f));
          }
        for (int b = 0; b < B.num_morphisms(); ++b)
          for (int a = 0; a < A.num_morphisms(); ++a) {
            const int ba = t.compose2(x, y, z, b, a);
            const FinFunctor& gt = F1(y, z, B.tgt[b]);
            for (int o = 0; o < Fx.num_objects(); ++o) {
              int expect = Fz.compose(gt.on_morphisms[F2(x, y, a, o)], F2(y, z, b, F1(x, y, A.src[a]).on_objects[o]));
              if (F2(x, z, ba, o) != expect)
                r.add("horizontal composition", B.morphisms[b] + " * " + A.morphisms[a] + " at " + Fx.objects[o]);
            }
          }
      }
    }
  return r;
}

TwoCatValuedFunctor constant_two_functor(TwoPtr base, CategoryPtr value) {
  TwoCatValuedFunctor F{base, {}, {}, {}};
  const int n = base->num_objects();
  F.on_objects.assign(n, value);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory& A = base->hom(x, y);
      F.on_1cells.push_back(std::vector<FinFunctor>(A.num_objects(), identity_functor(value)));
      F.on_2cells.push_back(std::vector<std::vector<int>>(A.num_morphisms(), value->ident));
    }
  return F;
}

TwoCatValuedFunctor representable(TwoPtr base, int c) {
  const FinTwoCategory& t = *base;
  const int n = t.num_objects();
  TwoCatValuedFunctor F{base, {}, {}, {}};
  for (int x = 0; x < n; ++x) F.on_objects.push_back(t.homs[c * n + x]);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const FinCategory &A = t.hom(x, y), &Cx = t.hom(c, x);
      std::vector<FinFunctor> ones;
      for (int g = 0; g < A.num_objects(); ++g) {
        FinFunctor f{F.on_objects[x], F.on_objects[y], {}, {}};
        for (int h = 0; h < Cx.num_objects(); ++h) f.on_objects.push_back(t.compose1(c, x, y, g, h));
        for (int m = 0; m < Cx.num_morphisms(); ++m) f.on_morphisms.push_back(t.compose2(c, x, y, A.ident[g], m));
        ones.push_back(std::move(f));
      }
      std::vector<std::vector<int>> twos;
      for (int a = 0; a < A.num_morphisms(); ++a) {
        std::vector<int> comp;
        for (int h = 0; h < Cx.num_objects(); ++h) comp.push_back(t.compose2(c, x, y, a, Cx.ident[h]));
        twos.push_back(std::move(comp));
      }
      F.on_1cells.push_back(std::move(ones));
      F.on_2cells.push_back(std::move(twos));
    }
  return F;
}

TwoCatValuedFunctor from_cat_valued(const CatValuedFunctor& F, TwoPtr base) {
  const FinCategory& c = *F.base;
  const int n = c.num_objects();
  TwoCatValuedFunctor G{base, F.on_objects, {}, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<FinFunctor> ones;
      std::vector<std::vector<int>> twos;
      for (int f = 0; f < c.num_morphisms(); ++f)
        if (c.src[f] == x && c.tgt[f] == y) {
          ones.push_back(F.on_morphisms[f]);
          auto& comp = twos.emplace_back();
          for (int o = 0; o < F.on_objects[x]->num_objects(); ++o)
            comp.push_back(F.on_objects[y]->ident[F.on_morphisms[f].on_objects[o]]);
        }
      G.on_1cells.push_back(std::move(ones));
      G.on_2cells.push_back(std::move(twos));
    }
  return G;
}

CopresheafNerve copresheaf_nerve(const TwoCatValuedFunctor& F) {
  Report rep = validate_two_cat_valued(F);
  if (!rep.ok()) throw ContractError("copresheaf_nerve: " + rep.violations[0].law + " " + rep.violations[0].witness);
  const FinTwoCategory& t = *F.base;
  const int n = t.num_objects();
  auto N = std::make_shared<const FinDoubleCategory>(double_nerve(t));
  NerveOffsets off(t);
  CopresheafNerve res;
  FinDoubleCategory d;

  std::vector<int> ob_off, v_off;
  for (int c = 0; c < n; ++c) {
    const FinCategory& Fc = *F.on_objects[c];
    ob_off.push_back(d.num_objects());
    for (int x = 0; x < Fc.num_objects(); ++x) {
      d.objects.push_back("(" + t.objects[c] + "," + Fc.objects[x] + ")");
      res.object_cells.push_back({c, x});
    }
  }
  for (int c = 0; c < n; ++c) {
    const FinCategory& Fc = *F.on_objects[c];
    v_off.push_back(d.num_v());
    for (int m = 0; m < Fc.num_morphisms(); ++m) {
      d.v_names.push_back("(" + t.objects[c] + "," + Fc.morphisms[m] + ")");
      d.v_src.push_back(ob_off[c] + Fc.src[m]);
      d.v_tgt.push_back(ob_off[c] + Fc.tgt[m]);
      res.v_cells.push_back({c, m});
    }
    for (int x = 0; x < Fc.num_objects(); ++x) d.v_id.push_back(v_off[c] + Fc.ident[x]);
  }
  // Base h-arrow / square -> (x, y, local).
  std::vector<std::array<int, 3>> bh, bs;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      for (int g = 0; g < t.hom(x, y).num_objects(); ++g) bh.push_back({x, y, g});
      for (int a = 0; a < t.hom(x, y).num_morphisms(); ++a) bs.push_back({x, y, a});
    }
  std::vector<int> h_off, s_off;
  for (int h = 0; h < static_cast<int>(bh.size()); ++h) {
    auto [x, y, g] = bh[h];
    const FinFunctor& Fg = F.on_1cells[x * n + y][g];
    h_off.push_back(d.num_h());
    for (int a = 0; a < F.on_objects[x]->num_objects(); ++a) {
      d.h_names.push_back("(" + N->h_names[h] + "," + F.on_objects[x]->objects[a] + ")");
      d.h_src.push_back(ob_off[x] + a);
      d.h_tgt.push_back(ob_off[y] + Fg.on_objects[a]);
      res.h_cells.push_back({h, a});
    }
  }
  auto right_edge = [&](int s, int phi) {
    auto [x, y, mu] = bs[s];
    const FinCategory &A = t.hom(x, y), &Fx = *F.on_objects[x], &Fy = *F.on_objects[y];
    const FinFunctor& Fd = F.on_1cells[x * n + y][A.tgt[mu]];
    return Fy.compose(Fd.on_morphisms[phi], F.on_2cells[x * n + y][mu][Fx.src[phi]]);
  };
  for (int s = 0; s < static_cast<int>(bs.size()); ++s) {
    auto [x, y, mu] = bs[s];
    const FinCategory& Fx = *F.on_objects[x];
    s_off.push_back(d.num_s());
    for (int phi = 0; phi < Fx.num_morphisms(); ++phi) {
      d.s_names.push_back("(" + N->s_names[s] + "," + Fx.morphisms[phi] + ")");
      d.s_top.push_back(h_off[N->s_top[s]] + Fx.src[phi]);
      d.s_bot.push_back(h_off[N->s_bot[s]] + Fx.tgt[phi]);
      d.s_left.push_back(v_off[x] + phi);
      d.s_right.push_back(v_off[y] + right_edge(s, phi));
      res.s_cells.push_back({s, phi});
    }
  }
  for (int c = 0; c < n; ++c)
    for (int x = 0; x < F.on_objects[c]->num_objects(); ++x) d.h_id.push_back(h_off[N->h_id[c]] + x);
  for (auto [c, phi] : res.v_cells) d.s_hid.push_back(s_off[N->s_hid[c]] + phi);
  for (auto [h, a] : res.h_cells) {
    const int x = bh[h][0];
    d.s_vid.push_back(s_off[N->s_vid[h]] + F.on_objects[x]->ident[a]);
  }
  d.reset_tables();
  N->h_comp.for_each([&](int g, int f, int gf) {
    auto [x, y, lf] = bh[f];
    const FinFunctor& Ff = F.on_1cells[x * n + y][lf];
    for (int a = 0; a < F.on_objects[x]->num_objects(); ++a)
      d.h_comp.set(h_off[g] + Ff.on_objects[a], h_off[f] + a, h_off[gf] + a);
  });
  for (int c = 0; c < n; ++c)
    F.on_objects[c]->comp.for_each([&](int g, int f, int gf) { d.v_comp.set(v_off[c] + g, v_off[c] + f, v_off[c] + gf); });
  N->s_hcomp.for_each([&](int tq, int s, int ts) {
    const int x = bs[s][0];
    for (int phi = 0; phi < F.on_objects[x]->num_morphisms(); ++phi)
      d.s_hcomp.set(s_off[tq] + right_edge(s, phi), s_off[s] + phi, s_off[ts] + phi);
  });
  N->s_vcomp.for_each([&](int tq, int s, int ts) {
    const int x = bs[s][0];
    const FinCategory& Fx = *F.on_objects[x];
    Fx.comp.for_each([&](int p2, int p1, int p21) { d.s_vcomp.set(s_off[tq] + p2, s_off[s] + p1, s_off[ts] + p21); });
  });
  d.index();

  auto D = std::make_shared<const FinDoubleCategory>(std::move(d));
  DoubleFunctor& p = res.projection;
  p.source = D;
  p.target = N;
  for (auto [c, x] : res.object_cells) p.ob.push_back(c);
  for (auto [h, a] : res.h_cells) p.h.push_back(h);
  for (auto [c, m] : res.v_cells) p.v.push_back(c);
  for (auto [s, phi] : res.s_cells) p.s.push_back(s);
  return res;
}

TwoUnstraightening unstraighten_2(const TwoCatValuedFunctor& F, CompareMode mode) {
  Report rep = validate_two_cat_valued(F);
  if (!rep.ok()) throw ContractError("unstraighten_2: " + rep.violations[0].law + " " + rep.violations[0].witness);
  const FinTwoCategory& t = *F.base;
  const int n = t.num_objects();
  TwoUnstraightening res;
  res.gaunt_fibers = true;
  for (auto& c : F.on_objects) res.gaunt_fibers = res.gaunt_fibers && is_gaunt_category(*c);
  if (!res.gaunt_fibers) {
    if (mode == CompareMode::Iso) throw ContractError("unstraighten_2: a fiber is not gaunt; use equivalence mode");
    res.note = "fibers are not gaunt: the result is only equivalent to a 2-category";
  }

  auto E = std::make_shared<FinTwoCategory>();
  for (int c = 0; c < n; ++c)
    for (int x = 0; x < F.on_objects[c]->num_objects(); ++x) {
      E->objects.push_back("(" + t.objects[c] + "," + F.on_objects[c]->objects[x] + ")");
      res.object_cells.push_back({c, x});
    }
  const int N = E->num_objects();
  // Per hom of E: 1-cells (gamma, phi) and 2-cells (mu, source, target).
  std::vector<std::vector<std::array<int, 2>>> ones(N * N);
  std::vector<std::map<std::array<int, 2>, int>> one_index(N * N);
  std::vector<std::vector<int>> two_mu(N * N);
  std::vector<std::map<std::array<int, 3>, int>> two_index(N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      auto [c, x] = res.object_cells[i];
      auto [c2, x2] = res.object_cells[j];
      const FinCategory &A = t.hom(c, c2), &Fc2 = *F.on_objects[c2];
      FinCategory h;
      auto& cells = ones[i * N + j];
      for (int g = 0; g < A.num_objects(); ++g) {
        const int fx = F.on_1cells[c * n + c2][g].on_objects[x];
        for (int phi : Fc2.hom(fx, x2)) {
          one_index[i * N + j][{g, phi}] = static_cast<int>(cells.size());
          cells.push_back({g, phi});
          h.objects.push_back("(" + A.objects[g] + "," + Fc2.morphisms[phi] + ")");
        }
      }
      for (int mu = 0; mu < A.num_morphisms(); ++mu) {
        const int comp_x = F.on_2cells[c * n + c2][mu][x];
        for (int s = 0; s < static_cast<int>(cells.size()); ++s) {
          if (cells[s][0] != A.src[mu]) continue;
          for (int e = 0; e < static_cast<int>(cells.size()); ++e) {
            if (cells[e][0] != A.tgt[mu]) continue;
            if (Fc2.compose(cells[e][1], comp_x) != cells[s][1]) continue;
            two_index[i * N + j][{mu, s, e}] = h.num_morphisms();
            two_mu[i * N + j].push_back(mu);
            h.morphisms.push_back(A.morphisms[mu] + ":" + h.objects[s] + "=>" + h.objects[e]);
            h.src.push_back(s);
            h.tgt.push_back(e);
          }
        }
      }
      for (int s = 0; s < static_cast<int>(cells.size()); ++s) h.ident.push_back(two_index[i * N + j].at({A.ident[cells[s][0]], s, s}));
      h.comp.reset(h.morphisms.size());
      for (int b = 0; b < h.num_morphisms(); ++b)
        for (int a = 0; a < h.num_morphisms(); ++a) {
          if (h.tgt[a] != h.src[b]) continue;
          int mu = A.compose(two_mu[i * N + j][b], two_mu[i * N + j][a]);
          h.comp.set(b, a, two_index[i * N + j].at({mu, h.src[a], h.tgt[b]}));
        }
      h.index();
      E->homs.push_back(share(std::move(h)));
    }
  for (int i = 0; i < N; ++i) {
    auto [c, x] = res.object_cells[i];
    E->unit.push_back(one_index[i * N + i].at({t.unit[c], F.on_objects[c]->ident[x]}));
  }
  E->comp1.assign(N * N * N, {});
  E->comp2.assign(N * N * N, {});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const int c = res.object_cells[i][0], c2 = res.object_cells[j][0], c3 = res.object_cells[k][0];
        const auto &A = ones[i * N + j], &B = ones[j * N + k];
        const FinCategory& Fc3 = *F.on_objects[c3];
        auto& t1 = E->comp1[triple(N, i, j, k)];
        t1.assign(A.size() * B.size(), -1);
        for (std::size_t g = 0; g < B.size(); ++g)
          for (std::size_t f = 0; f < A.size(); ++f) {
            const int gg = B[g][0], gf = t.compose1(c, c2, c3, gg, A[f][0]);
            const int phi = Fc3.compose(B[g][1], F.on_1cells[c2 * n + c3][gg].on_morphisms[A[f][1]]);
            t1[g * A.size() + f] = one_index[i * N + k].at({gf, phi});
          }
        const FinCategory &HA = E->hom(i, j), &HB = E->hom(j, k);
        auto& t2 = E->comp2[triple(N, i, j, k)];
        t2.assign(HA.num_morphisms() * HB.num_morphisms(), -1);
        for (int b = 0; b < HB.num_morphisms(); ++b)
          for (int a = 0; a < HA.num_morphisms(); ++a) {
            const int mu = t.compose2(c, c2, c3, two_mu[j * N + k][b], two_mu[i * N + j][a]);
            const int s = t1[HB.src[b] * A.size() + HA.src[a]], e = t1[HB.tgt[b] * A.size() + HA.tgt[a]];
            auto it = two_index[i * N + k].find({mu, s, e});
            if (it == two_index[i * N + k].end())
              throw ContractError("unstraighten_2: horizontal composite of 2-cells is missing");
            t2[b * HA.num_morphisms() + a] = it->second;
          }
      }
  TwoPtr Ep = E;
  TwoFunctor& p = res.projection;
  p.source = Ep;
  p.target = F.base;
  for (auto [c, x] : res.object_cells) p.ob.push_back(c);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      FinFunctor h{Ep->homs[i * N + j], t.homs[p.ob[i] * n + p.ob[j]], {}, {}};
      for (auto [g, phi] : ones[i * N + j]) h.on_objects.push_back(g);
      h.on_morphisms = two_mu[i * N + j];
      p.homs.push_back(std::move(h));
    }
  res.certificate = is_1cocartesian_fibration(p, mode);
  return res;
}

PipelineResult unstraighten_2_pipeline(const TwoCatValuedFunctor& F) {
  PipelineResult res;
  CopresheafNerve X = copresheaf_nerve(F);
  FibrationCertificate c = is_left_cart_fibration(X.projection);
  if (!c.ok) {
    res.detail = "copresheaf nerve is not a (left, cart)-fibration: " + c.failure;
    return res;
  }
  Reflection R = reflect_perp(X.projection);
  std::string why;
  auto E = two_category_of(*R.total, &why);
  if (!E) {
    res.detail = "reflection is not vertically discrete: " + why;
    return res;
  }
  auto Ep = std::make_shared<const FinTwoCategory>(std::move(*E));
  res.projection = two_functor_of(R.q, Ep, F.base);
  if (!res.projection) res.detail = "projection is not a 2-functor";
  return res;
}

namespace {

bool hom_sizes_match(const FinTwoCategory& a, const FinTwoCategory& b, int x, int y, int bx, int by) {
  return a.hom(x, y).num_objects() == b.hom(bx, by).num_objects() &&
         a.hom(x, y).num_morphisms() == b.hom(bx, by).num_morphisms();
}

bool bijective(const std::vector<int>& m, int size) {
  if (static_cast<int>(m.size()) != size) return false;
  std::vector<char> seen(size, 0);
  for (int v : m) {
    if (v < 0 || v >= size || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace

std::optional<TwoFunctor> find_two_isomorphism(TwoPtr a, TwoPtr b, const TwoFunctor* pa, const TwoFunctor* pb,
                                               std::size_t cap) {
  const FinTwoCategory &A = *a, &B = *b;
  const int n = A.num_objects();
  if (n != B.num_objects()) return std::nullopt;
  auto Na = std::make_shared<const FinDoubleCategory>(double_nerve(A));
  auto Nb = std::make_shared<const FinDoubleCategory>(double_nerve(B));
  if (Na->num_h() != Nb->num_h() || Na->num_s() != Nb->num_s()) return std::nullopt;
  std::optional<DoubleFunctor> g, p;
  if (pa && pb) {
    auto Nc = std::make_shared<const FinDoubleCategory>(double_nerve(*pa->target));
    g = double_nerve(*pa, Na, Nc);
    p = double_nerve(*pb, Nb, Nc);
  }
  std::vector<int> sigma(n, -1);
  std::vector<char> used(n, 0);
  std::optional<TwoFunctor> found;
  std::function<void(int)> objects = [&](int x) {
    if (found) return;
    if (x == n) {
      LiftProblem prob;
      prob.shape = Na;
      prob.target = Nb;
      if (g) {
        prob.p = &*p;
        prob.base = &*g;
      }
      prob.fixed_objects = sigma;
      prob.cap = cap;
      enumerate_lifts(prob, [&](const DoubleFunctor& f) {
        if (!bijective(f.h, Nb->num_h()) || !bijective(f.s, Nb->num_s())) return true;
        found = two_functor_of(f, a, b);
        return false;
      });
      return;
    }
    for (int y = 0; y < n; ++y) {
      if (used[y]) continue;
      if (pa && pb && pa->ob[x] != pb->ob[y]) continue;
      bool ok = hom_sizes_match(A, B, x, x, y, y);
      for (int u = 0; u < x && ok; ++u)
        ok = hom_sizes_match(A, B, u, x, sigma[u], y) && hom_sizes_match(A, B, x, u, y, sigma[u]);
      if (!ok) continue;
      sigma[x] = y;
      used[y] = 1;
      objects(x + 1);
      used[y] = 0;
      sigma[x] = -1;
    }
  };
  objects(0);
  return found;
}

std::vector<TwoFunctor> two_lifts(TwoPtr source, const TwoFunctor& p, const TwoFunctor& base,
                                  const std::vector<int>& fixed_objects, std::size_t cap) {
  auto Ns = std::make_shared<const FinDoubleCategory>(double_nerve(*source));
  auto Nd = std::make_shared<const FinDoubleCategory>(double_nerve(*p.source));
  auto Nc = std::make_shared<const FinDoubleCategory>(double_nerve(*p.target));
  DoubleFunctor np = double_nerve(p, Nd, Nc), ng = double_nerve(base, Ns, Nc);
  LiftProblem prob;
  prob.shape = Ns;
  prob.target = Nd;
  prob.p = &np;
  prob.base = &ng;
  prob.fixed_objects = fixed_objects;
  prob.cap = cap;
  std::vector<TwoFunctor> r;
  for (auto& f : all_lifts(prob)) r.push_back(*two_functor_of(f, source, p.source));
  return r;
}

FinTwoCategory two_fiber(const TwoFunctor& p, int c) {
  const FinTwoCategory &D = *p.source, &C = *p.target;
  const int uc = C.unit[c], iuc = C.hom(c, c).ident[uc];
  std::vector<int> objs;
  for (int x = 0; x < D.num_objects(); ++x)
    if (p.ob[x] == c) objs.push_back(x);
  const int n = static_cast<int>(objs.size());
  FinTwoCategory t;
  std::vector<std::vector<int>> obj_of(n * n), mor_of(n * n);  // local -> D-local
  std::vector<std::vector<int>> obj_loc(n * n), mor_loc(n * n);
  for (int x : objs) t.objects.push_back(D.objects[x]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const FinCategory& H = D.hom(objs[i], objs[j]);
      const FinFunctor& ph = p.hom(objs[i], objs[j]);
      auto& ol = obj_loc[i * n + j];
      auto& ml = mor_loc[i * n + j];
      ol.assign(H.num_objects(), -1);
      ml.assign(H.num_morphisms(), -1);
      FinCategory h;
      for (int f = 0; f < H.num_objects(); ++f)
        if (ph.on_objects[f] == uc) {
          ol[f] = h.num_objects();
          obj_of[i * n + j].push_back(f);
          h.objects.push_back(H.objects[f]);
        }
      for (int m = 0; m < H.num_morphisms(); ++m)
        if (ph.on_morphisms[m] == iuc) {
          ml[m] = h.num_morphisms();
          mor_of[i * n + j].push_back(m);
          h.morphisms.push_back(H.morphisms[m]);
          h.src.push_back(ol[H.src[m]]);
          h.tgt.push_back(ol[H.tgt[m]]);
        }
      for (int f : obj_of[i * n + j]) h.ident.push_back(ml[H.ident[f]]);
      h.comp.reset(h.morphisms.size());
      for (int b : mor_of[i * n + j])
        for (int a : mor_of[i * n + j]) {
          int ba = H.compose(b, a);
          if (ba >= 0) h.comp.set(ml[b], ml[a], ml[ba]);
        }
      h.index();
      t.homs.push_back(share(std::move(h)));
    }
  for (int i = 0; i < n; ++i) t.unit.push_back(obj_loc[i * n + i][D.unit[objs[i]]]);
  t.comp1.assign(n * n * n, {});
  t.comp2.assign(n * n * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto &A = obj_of[i * n + j], &B = obj_of[j * n + k];
        auto& c1 = t.comp1[triple(n, i, j, k)];
        for (int g : B)
          for (int f : A) c1.push_back(obj_loc[i * n + k][D.compose1(objs[i], objs[j], objs[k], g, f)]);
        const auto &MA = mor_of[i * n + j], &MB = mor_of[j * n + k];
        auto& c2 = t.comp2[triple(n, i, j, k)];
        for (int b : MB)
          for (int a : MA) c2.push_back(mor_loc[i * n + k][D.compose2(objs[i], objs[j], objs[k], b, a)]);
      }
  return t;
}

}  // namespace dblcat

#include "dblcat/category.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace dblcat {

std::size_t default_cell_cap() {
  if (const char* env = std::getenv("DBLCAT_MAX_CELLS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

void FinCategory::index() {
  out.assign(objects.size(), {});
  in.assign(objects.size(), {});
  for (int f = 0; f < num_morphisms(); ++f) {
    if (src[f] >= 0 && src[f] < num_objects()) out[src[f]].push_back(f);
    if (tgt[f] >= 0 && tgt[f] < num_objects()) in[tgt[f]].push_back(f);
  }
}

std::vector<int> FinCategory::hom(int x, int y) const {
  std::vector<int> r;
  for (int f : out[x])
    if (tgt[f] == y) r.push_back(f);
  return r;
}

std::optional<int> FinCategory::inverse(int f) const {
  for (int g : out[tgt[f]])
    if (tgt[g] == src[f] && compose(g, f) == ident[src[f]] &&
        compose(f, g) == ident[tgt[f]])
      return g;
  return std::nullopt;
}

bool FinCategory::operator==(const FinCategory& o) const {
  return objects == o.objects && morphisms == o.morphisms && src == o.src &&
         tgt == o.tgt && ident == o.ident && comp == o.comp;
}

int CategoryBuilder::add_object(const std::string& name) {
  int x = cat_.num_objects();
  cat_.objects.push_back(name);
  int id = cat_.num_morphisms();
  cat_.morphisms.push_back("id_" + name);
  cat_.src.push_back(x);
  cat_.tgt.push_back(x);
  cat_.ident.push_back(id);
  return x;
}

int CategoryBuilder::add_morphism(const std::string& name, int s, int t) {
  int f = cat_.num_morphisms();
  cat_.morphisms.push_back(name);
  cat_.src.push_back(s);
  cat_.tgt.push_back(t);
  return f;
}

void CategoryBuilder::set_comp(int g, int f, int gf) { comps_.push_back({g, f, gf}); }

FinCategory CategoryBuilder::finish() {
  FinCategory c = std::move(cat_);
  c.comp.reset(c.morphisms.size());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    c.comp.set(c.ident[c.tgt[f]], f, f);
    c.comp.set(f, c.ident[c.src[f]], f);
  }
  for (auto& t : comps_) c.comp.set(t[0], t[1], t[2]);
  c.index();
  cat_ = FinCategory{};
  comps_.clear();
  return c;
}

Report validate_category(const FinCategory& c) {
  Report r;
  const int no = c.num_objects(), nm = c.num_morphisms();
  auto mname = [&](int f) { return (f >= 0 && f < nm) ? c.morphisms[f] : std::to_string(f); };
  if (static_cast<int>(c.src.size()) != nm || static_cast<int>(c.tgt.size()) != nm ||
      static_cast<int>(c.ident.size()) != no) {
    r.add("table shape", "src/tgt/ident arrays have wrong length");
    return r;
  }
  if (c.comp.range() != static_cast<std::size_t>(nm)) {
    r.add("table shape", "composition table range differs from morphism count");
    return r;
  }
  for (int f = 0; f < nm; ++f)
    if (c.src[f] < 0 || c.src[f] >= no || c.tgt[f] < 0 || c.tgt[f] >= no) {
      r.add("endpoints in range", mname(f));
      return r;
    }
  for (int x = 0; x < no; ++x) {
    int i = c.ident[x];
    if (i < 0 || i >= nm) {
      r.add("identity exists", c.objects[x]);
      continue;
    }
    if (c.src[i] != x || c.tgt[i] != x) r.add("src(ident(x)) = tgt(ident(x)) = x", c.objects[x]);
  }
  if (!r.ok()) return r;
  std::vector<std::vector<int>> out(no);
  for (int f = 0; f < nm; ++f) out[c.src[f]].push_back(f);
  // Entries only on composable pairs.
  c.comp.for_each([&](int g, int f, int gf) {
    if (g >= nm || f >= nm) return;
    if (c.tgt[f] != c.src[g])
      r.add("comp defined only on composable pairs", mname(g) + " o " + mname(f));
    else if (gf < 0 || gf >= nm)
      r.add("composite in range", mname(g) + " o " + mname(f));
  });
  for (int f = 0; f < nm; ++f) {
    if (c.comp.get(c.ident[c.tgt[f]], f) != f) r.add("left unit", mname(f));
    if (c.comp.get(f, c.ident[c.src[f]]) != f) r.add("right unit", mname(f));
    for (int g : out[c.tgt[f]]) {
      int gf = c.comp.get(g, f);
      if (gf < 0 || gf >= nm) {
        r.add("comp total on composable pairs", mname(g) + " o " + mname(f));
        continue;
      }
      if (c.src[gf] != c.src[f]) r.add("src(g∘f) ≠ src(f)", mname(g) + " o " + mname(f) + " = " + mname(gf));
      if (c.tgt[gf] != c.tgt[g]) r.add("tgt(g∘f) ≠ tgt(g)", mname(g) + " o " + mname(f) + " = " + mname(gf));
    }
  }
  if (!r.ok()) return r;
  for (int f = 0; f < nm; ++f)
    for (int g : out[c.tgt[f]]) {
      int gf = c.comp.get(g, f);
      for (int h : out[c.tgt[g]]) {
        int hg = c.comp.get(h, g);
        int a = c.comp.get(h, gf), b = c.comp.get(hg, f);
        if (a != b)
          r.add("associativity", mname(h) + " o " + mname(g) + " o " + mname(f));
      }
    }
  return r;
}

Report validate_functor(const FinFunctor& F) {
  Report r;
  if (!F.source || !F.target) {
    r.add("functor endpoints", "missing source or target");
    return r;
  }
  const FinCategory& a = *F.source;
  const FinCategory& b = *F.target;
  if (static_cast<int>(F.on_objects.size()) != a.num_objects() ||
      static_cast<int>(F.on_morphisms.size()) != a.num_morphisms()) {
    r.add("functor shape", "map sizes differ from source");
    return r;
  }
  for (int x = 0; x < a.num_objects(); ++x)
    if (F.on_objects[x] < 0 || F.on_objects[x] >= b.num_objects()) {
      r.add("object map in range", a.objects[x]);
      return r;
    }
  for (int f = 0; f < a.num_morphisms(); ++f) {
    int g = F.on_morphisms[f];
    if (g < 0 || g >= b.num_morphisms()) {
      r.add("morphism map in range", a.morphisms[f]);
      return r;
    }
    if (b.src[g] != F.on_objects[a.src[f]]) r.add("preserves src", a.morphisms[f]);
    if (b.tgt[g] != F.on_objects[a.tgt[f]]) r.add("preserves tgt", a.morphisms[f]);
  }
  for (int x = 0; x < a.num_objects(); ++x)
    if (F.on_morphisms[a.ident[x]] != b.ident[F.on_objects[x]])
      r.add("preserves identities", a.objects[x]);
  a.comp.for_each([&](int g, int f, int gf) {
    if (F.on_morphisms[gf] != b.compose(F.on_morphisms[g], F.on_morphisms[f]))
      r.add("preserves composition", a.morphisms[g] + " o " + a.morphisms[f]);
  });
  return r;
}

FinCategory opposite(const FinCategory& c) {
  FinCategory o;
  o.objects = c.objects;
  o.morphisms = c.morphisms;
  o.src = c.tgt;
  o.tgt = c.src;
  o.ident = c.ident;
  o.comp.reset(c.morphisms.size());
  c.comp.for_each([&](int g, int f, int gf) { o.comp.set(f, g, gf); });
  o.index();
  return o;
}

FinCategory product(const FinCategory& c, const FinCategory& d) {
  FinCategory p;
  const int no = d.num_objects(), nm = d.num_morphisms();
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < no; ++y) p.objects.push_back("(" + c.objects[x] + "," + d.objects[y] + ")");
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int g = 0; g < nm; ++g) {
      p.morphisms.push_back("(" + c.morphisms[f] + "," + d.morphisms[g] + ")");
      p.src.push_back(c.src[f] * no + d.src[g]);
      p.tgt.push_back(c.tgt[f] * no + d.tgt[g]);
    }
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < no; ++y) p.ident.push_back(c.ident[x] * nm + d.ident[y]);
  p.comp.reset(p.morphisms.size());
  std::vector<std::vector<std::pair<int, int>>> dcomp(nm);
  d.comp.for_each([&](int g2, int f2, int gf2) { dcomp[g2].push_back({f2, gf2}); });
  c.comp.for_each([&](int g1, int f1, int gf1) {
    for (int g2 = 0; g2 < nm; ++g2)
      for (auto [f2, gf2] : dcomp[g2]) p.comp.set(g1 * nm + g2, f1 * nm + f2, gf1 * nm + gf2);
  });
  p.index();
  return p;
}

FinCategory chain(int n) {
  if (n < 0) throw ContractError("chain: negative length");
  FinCategory c;
  for (int i = 0; i <= n; ++i) c.objects.push_back(std::to_string(i));
  std::vector<std::vector<int>> id(n + 1, std::vector<int>(n + 1, -1));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      id[i][j] = c.num_morphisms();
      c.morphisms.push_back(i == j ? "id_" + std::to_string(i)
                                   : std::to_string(i) + "<" + std::to_string(j));
      c.src.push_back(i);
      c.tgt.push_back(j);
    }
  for (int i = 0; i <= n; ++i) c.ident.push_back(id[i][i]);
  c.comp.reset(c.morphisms.size());
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int k = j; k <= n; ++k) c.comp.set(id[j][k], id[i][j], id[i][k]);
  c.index();
  return c;
}

FinCategory discrete(const std::vector<std::string>& names) {
  FinCategory c;
  c.objects = names;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    c.morphisms.push_back("id_" + names[i]);
    c.src.push_back(i);
    c.tgt.push_back(i);
    c.ident.push_back(i);
  }
  c.comp.reset(names.size());
  for (int i = 0; i < static_cast<int>(names.size()); ++i) c.comp.set(i, i, i);
  c.index();
  return c;
}

FinCategory terminal_category() { return discrete({"*"}); }

FinFunctor identity_functor(CategoryPtr c) {
  FinFunctor f{c, c, {}, {}};
  for (int x = 0; x < c->num_objects(); ++x) f.on_objects.push_back(x);
  for (int m = 0; m < c->num_morphisms(); ++m) f.on_morphisms.push_back(m);
  return f;
}

FinFunctor opposite(const FinFunctor& f) {
  return FinFunctor{std::make_shared<const FinCategory>(opposite(*f.source)),
                    std::make_shared<const FinCategory>(opposite(*f.target)), f.on_objects,
                    f.on_morphisms};
}

FinFunctor compose(const FinFunctor& g, const FinFunctor& f) {
  FinFunctor h{f.source, g.target, {}, {}};
  for (int x : f.on_objects) h.on_objects.push_back(g.on_objects[x]);
  for (int m : f.on_morphisms) h.on_morphisms.push_back(g.on_morphisms[m]);
  return h;
}

FinFunctor to_terminal(CategoryPtr c) {
  auto t = std::make_shared<const FinCategory>(terminal_category());
  return FinFunctor{c, t, std::vector<int>(c->num_objects(), 0),
                    std::vector<int>(c->num_morphisms(), 0)};
}

FinFunctor projection_first(CategoryPtr c, CategoryPtr d, CategoryPtr cd) {
  FinFunctor f{cd, c, {}, {}};
  for (int x = 0; x < cd->num_objects(); ++x) f.on_objects.push_back(x / d->num_objects());
  for (int m = 0; m < cd->num_morphisms(); ++m) f.on_morphisms.push_back(m / d->num_morphisms());
  return f;
}

bool is_cartesian_arrow(const FinFunctor& p, int alpha) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  if (alpha < 0 || alpha >= D.num_morphisms())
    throw ContractError("is_cartesian_arrow: morphism not in source category");
  const int x = D.src[alpha], y = D.tgt[alpha];
  const int pa = p.on_morphisms[alpha];
  const int px = p.on_objects[x];
  for (int z = 0; z < D.num_objects(); ++z) {
    const int pz = p.on_objects[z];
    // Image of beta -> (alpha∘beta, p(beta)) must be injective ...
    std::vector<std::uint64_t> images;
    for (int beta : D.out[z]) {
      if (D.tgt[beta] != x) continue;
      images.push_back(pair_key(D.compose(alpha, beta), p.on_morphisms[beta]));
    }
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
    // ... and hit every compatible pair (g, gamma).
    std::size_t target_size = 0;
    for (int g : D.out[z]) {
      if (D.tgt[g] != y) continue;
      const int pg = p.on_morphisms[g];
      for (int gamma : C.out[pz]) {
        if (C.tgt[gamma] != px) continue;
        if (C.compose(pa, gamma) == pg) ++target_size;
      }
    }
    if (target_size != images.size()) return false;
  }
  return true;
}

std::vector<bool> cartesian_arrows(const FinFunctor& p) {
  std::vector<bool> r(p.source->num_morphisms());
  for (int f = 0; f < p.source->num_morphisms(); ++f) r[f] = is_cartesian_arrow(p, f);
  return r;
}

FibrationAnalysis analyze_cartesian_fibration(const FinFunctor& p) {
  FibrationAnalysis a;
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  std::vector<bool> cart = cartesian_arrows(p);
  std::vector<std::vector<int>> fiber(C.num_objects());
  for (int y = 0; y < D.num_objects(); ++y) fiber[p.on_objects[y]].push_back(y);
  a.ok = true;
  for (int gamma = 0; gamma < C.num_morphisms(); ++gamma)
    for (int y : fiber[C.tgt[gamma]]) {
      LiftRecord rec{gamma, y, {}};
      for (int f : D.in[y])
        if (p.on_morphisms[f] == gamma && cart[f]) rec.lifts.push_back(f);
      if (rec.lifts.empty() && a.ok) {
        a.ok = false;
        a.failure = "no cartesian lift of " + C.morphisms[gamma] + " with target " + D.objects[y];
      }
      a.lifts.push_back(std::move(rec));
    }
  return a;
}

bool is_cartesian_fibration(const FinFunctor& p) { return analyze_cartesian_fibration(p).ok; }

bool is_cocartesian_fibration(const FinFunctor& p) {
  return is_cartesian_fibration(opposite(p));
}

bool is_right_fibration(const FinFunctor& p) {
  if (!is_cartesian_fibration(p)) return false;
  for (int f = 0; f < p.source->num_morphisms(); ++f)
    if (!is_cartesian_arrow(p, f)) return false;
  return true;
}

bool is_left_fibration(const FinFunctor& p) { return is_right_fibration(opposite(p)); }

namespace {

struct IsoSearch {
  const FinCategory& a;
  const FinCategory& b;
  const FinFunctor* pa;
  const FinFunctor* pb;
  std::vector<int> obj, mor, obj_inv, mor_inv;
  std::vector<std::vector<std::array<int, 3>>> triples;  // (g, f, gf) touching a morphism
  std::vector<int> order;

  bool objects_step(int x) {
    if (x == a.num_objects()) return morphisms_step(0);
    for (int y = 0; y < b.num_objects(); ++y) {
      if (obj_inv[y] >= 0) continue;
      if (pa && pa->on_objects[x] != pb->on_objects[y]) continue;
      if (a.out[x].size() != b.out[y].size() || a.in[x].size() != b.in[y].size()) continue;
      bool ok = true;
      for (int x2 = 0; x2 < x && ok; ++x2) {
        int y2 = obj[x2];
        ok = a.hom(x, x2).size() == b.hom(y, y2).size() &&
             a.hom(x2, x).size() == b.hom(y2, y).size();
      }
      if (!ok || a.hom(x, x).size() != b.hom(y, y).size()) continue;
      obj[x] = y;
      obj_inv[y] = x;
      if (objects_step(x + 1)) return true;
      obj[x] = -1;
      obj_inv[y] = -1;
    }
    return false;
  }

  bool consistent(int f) {
    for (auto& t : triples[f]) {
      int g = mor[t[0]], h = mor[t[1]], gh = mor[t[2]];
      if (g < 0 || h < 0 || gh < 0) continue;
      if (b.compose(g, h) != gh) return false;
    }
    return true;
  }

  bool morphisms_step(std::size_t k) {
    if (k == order.size()) return true;
    int f = order[k];
    int x = a.src[f], y = a.tgt[f];
    std::vector<int> cands;
    if (a.ident[x] == f)
      cands.push_back(b.ident[obj[x]]);
    else
      cands = b.hom(obj[x], obj[y]);
    for (int g : cands) {
      if (mor_inv[g] >= 0) continue;
      if (pa && pa->on_morphisms[f] != pb->on_morphisms[g]) continue;
      mor[f] = g;
      mor_inv[g] = f;
      if (consistent(f) && morphisms_step(k + 1)) return true;
      mor[f] = -1;
      mor_inv[g] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<CategoryIso> find_isomorphism(const FinCategory& a, const FinCategory& b,
                                            const FinFunctor* pa, const FinFunctor* pb) {
  if (a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms())
    return std::nullopt;
  if ((pa == nullptr) != (pb == nullptr))
    throw ContractError("find_isomorphism: both or neither base functors required");
  IsoSearch s{a, b, pa, pb, {}, {}, {}, {}, {}, {}};
  s.obj.assign(a.num_objects(), -1);
  s.obj_inv.assign(b.num_objects(), -1);
  s.mor.assign(a.num_morphisms(), -1);
  s.mor_inv.assign(b.num_morphisms(), -1);
  s.triples.assign(a.num_morphisms(), {});
  a.comp.for_each([&](int g, int f, int gf) {
    std::array<int, 3> t{g, f, gf};
    s.triples[g].push_back(t);
    if (f != g) s.triples[f].push_back(t);
    if (gf != g && gf != f) s.triples[gf].push_back(t);
  });
  // Identities first, then by source object so hom-sets are filled together.
  for (int x = 0; x < a.num_objects(); ++x) s.order.push_back(a.ident[x]);
  for (int f = 0; f < a.num_morphisms(); ++f)
    if (!a.is_identity(f)) s.order.push_back(f);
  if (!s.objects_step(0)) return std::nullopt;
  return CategoryIso{s.obj, s.mor};
}

bool is_isomorphism(const FinFunctor& f) {
  if (!validate_functor(f).ok()) return false;
  std::vector<int> o = f.on_objects, m = f.on_morphisms;
  std::sort(o.begin(), o.end());
  std::sort(m.begin(), m.end());
  if (static_cast<int>(o.size()) != f.target->num_objects() ||
      static_cast<int>(m.size()) != f.target->num_morphisms())
    return false;
  for (int i = 0; i < static_cast<int>(o.size()); ++i)
    if (o[i] != i) return false;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    if (m[i] != i) return false;
  return true;
}

bool is_equivalence(const FinFunctor& f) {
  if (!validate_functor(f).ok()) return false;
  const FinCategory& a = *f.source;
  const FinCategory& b = *f.target;
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y = 0; y < a.num_objects(); ++y) {
      std::vector<int> img;
      for (int m : a.hom(x, y)) img.push_back(f.on_morphisms[m]);
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end()) return false;
      if (img.size() != b.hom(f.on_objects[x], f.on_objects[y]).size()) return false;
    }
  for (int y = 0; y < b.num_objects(); ++y) {
    bool hit = false;
    for (int x = 0; x < a.num_objects() && !hit; ++x)
      for (int m : b.hom(f.on_objects[x], y))
        if (b.inverse(m)) {
          hit = true;
          break;
        }
    if (!hit) return false;
  }
  return true;
}

}  // namespace dblcat

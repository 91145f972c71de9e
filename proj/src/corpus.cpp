#include "dblcat/corpus.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "dblcat/enumerate.hpp"

namespace dblcat {

namespace {

int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

CategoryPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

FinCategory poset_from(int n, const std::vector<std::vector<char>>& le) {
  FinCategory c;
  for (int i = 0; i < n; ++i) c.objects.push_back(std::to_string(i));
  std::vector<std::vector<int>> id(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j || le[i][j]) {
        id[i][j] = c.num_morphisms();
        c.morphisms.push_back(i == j ? "id_" + std::to_string(i) : std::to_string(i) + "<" + std::to_string(j));
        c.src.push_back(i);
        c.tgt.push_back(j);
      }
  for (int i = 0; i < n; ++i) c.ident.push_back(id[i][i]);
  c.comp.reset(c.morphisms.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (id[i][j] >= 0 && id[j][k] >= 0) c.comp.set(id[j][k], id[i][j], id[i][k]);
  c.index();
  return c;
}

// Longest chain of non-identity morphisms ending at each object.
std::vector<int> levels(const FinCategory& c) {
  const int n = c.num_objects();
  std::vector<int> lv(n, 0);
  for (int f = 0; f < c.num_morphisms(); ++f)
    if (!c.is_identity(f) && c.src[f] == c.tgt[f])
      throw ContractError("random_cat_valued: base has a non-identity endomorphism");
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int f = 0; f < c.num_morphisms(); ++f)
      if (!c.is_identity(f) && lv[c.tgt[f]] < lv[c.src[f]] + 1) {
        lv[c.tgt[f]] = lv[c.src[f]] + 1;
        changed = true;
      }
    if (!changed) return lv;
  }
  throw ContractError("random_cat_valued: base has a cycle");
}

CatValuedFunctor random_cat_valued_from(std::mt19937_64& rng, CategoryPtr base, const std::vector<CategoryPtr>& pool) {
  const FinCategory& C = *base;
  std::vector<int> lv = levels(C);
  int top = 0;
  for (int l : lv) top = std::max(top, l);
  std::vector<int> squash(top + 1, 0);
  for (int l = 1; l <= top; ++l) squash[l] = squash[l - 1] + pick(rng, 2);
  const int R = squash[top];
  std::vector<CategoryPtr> G;
  for (int k = 0; k <= R; ++k) G.push_back(pool[pick(rng, static_cast<int>(pool.size()))]);
  std::vector<FinFunctor> step;
  for (int k = 0; k < R; ++k) {
    auto fs = all_functors(G[k], G[k + 1]);
    step.push_back(fs[pick(rng, static_cast<int>(fs.size()))]);
  }
  // trans[k][l]: G(k) -> G(l) for k <= l.
  std::vector<std::vector<FinFunctor>> trans(R + 1, std::vector<FinFunctor>(R + 1));
  for (int k = 0; k <= R; ++k) {
    trans[k][k] = identity_functor(G[k]);
    for (int l = k; l < R; ++l) trans[k][l + 1] = compose(step[l], trans[k][l]);
  }
  CatValuedFunctor F{base, {}, {}};
  for (int x = 0; x < C.num_objects(); ++x) F.on_objects.push_back(G[squash[lv[x]]]);
  for (int f = 0; f < C.num_morphisms(); ++f) F.on_morphisms.push_back(trans[squash[lv[C.src[f]]]][squash[lv[C.tgt[f]]]]);
  return F;
}

std::vector<CategoryPtr> pool_upto(int max_objects, bool discrete_only) {
  std::vector<CategoryPtr> r;
  for (auto& c : fiber_pool()) {
    if (c.num_objects() > max_objects) continue;
    if (discrete_only && c.num_morphisms() != c.num_objects()) continue;
    r.push_back(share(c));
  }
  return r;
}

void certify(const CorpusEntry& e) {
  FibrationCertificate c = is_left_cart_fibration(e.p);
  if (!c.ok) throw std::logic_error("generated entry " + e.name + " is not a (left, cart)-fibration: " + c.failure);
}

}  // namespace

std::vector<FinFunctor> all_functors(CategoryPtr a, CategoryPtr b, std::size_t cap) {
  auto pt = chain(0);
  LiftProblem prob;
  prob.shape = std::make_shared<const FinDoubleCategory>(boxtimes(*a, pt));
  prob.target = std::make_shared<const FinDoubleCategory>(boxtimes(*b, pt));
  prob.cap = cap;
  std::vector<FinFunctor> r;
  enumerate_lifts(prob, [&](const DoubleFunctor& f) {
    r.push_back(FinFunctor{a, b, f.ob, f.h});
    return true;
  });
  return r;
}

FinCategory random_poset(std::mt19937_64& rng, int n) {
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) le[i][j] = pick(rng, 5) < 2;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = 1;
  return poset_from(n, le);
}

FinCategory random_free_category(std::mt19937_64& rng, int n) {
  for (;;) {
    std::vector<std::array<int, 2>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int mult = std::max(0, pick(rng, 4) - 1);
        for (int k = 0; k < mult && edges.size() < 5; ++k) edges.push_back({i, j});
      }
    // Paths as edge sequences, by depth-first extension.
    std::vector<std::vector<int>> paths;
    std::function<void(std::vector<int>&)> extend = [&](std::vector<int>& p) {
      paths.push_back(p);
      for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (edges[e][0] == edges[p.back()][1]) {
          p.push_back(e);
          extend(p);
          p.pop_back();
        }
    };
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      std::vector<int> p{e};
      extend(p);
    }
    if (paths.size() > 24) continue;
    CategoryBuilder b;
    for (int i = 0; i < n; ++i) b.add_object(std::to_string(i));
    std::map<std::vector<int>, int> index;
    for (auto& p : paths) {
      std::string name;
      for (int e : p) name += (name.empty() ? "e" : ".e") + std::to_string(e);
      index[p] = b.add_morphism(name, edges[p.front()][0], edges[p.back()][1]);
    }
    for (auto& p : paths)
      for (auto& q : paths)
        if (edges[p.back()][1] == edges[q.front()][0]) {
          std::vector<int> pq = p;
          pq.insert(pq.end(), q.begin(), q.end());
          b.set_comp(index.at(q), index.at(p), index.at(pq));
        }
    return b.finish();
  }
}

CatValuedFunctor random_cat_valued(std::mt19937_64& rng, CategoryPtr base, int max_fiber_objects) {
  return random_cat_valued_from(rng, base, pool_upto(max_fiber_objects, false));
}

std::vector<FinCategory> fiber_pool() {
  std::vector<FinCategory> r;
  r.push_back(chain(0));
  r.push_back(chain(1));
  r.push_back(chain(2));
  r.push_back(discrete({"a", "b"}));
  {
    CategoryBuilder b;
    b.add_object("0");
    b.add_object("1");
    b.add_object("2");
    b.add_morphism("0<1", 0, 1);
    b.add_morphism("0<2", 0, 2);
    r.push_back(b.finish());
  }
  {
    CategoryBuilder b;
    b.add_object("0");
    b.add_object("1");
    b.add_object("2");
    b.add_morphism("0<2", 0, 2);
    b.add_morphism("1<2", 1, 2);
    r.push_back(b.finish());
  }
  {
    CategoryBuilder b;
    b.add_object("0");
    b.add_object("1");
    b.add_morphism("f", 0, 1);
    b.add_morphism("g", 0, 1);
    r.push_back(b.finish());
  }
  return r;
}

CatValuedFunctor fixture_cat_valued() {
  auto C = share(chain(1));
  auto c1 = share(chain(1));
  auto c2 = share(chain(2));
  CatValuedFunctor F{C, {c1, c2}, {}};
  FinFunctor mono{c1, c2, {0, 2}, {0, 2, 5}};  // 0 <= 2 in chain(2) is morphism 2; id_2 is 5
  F.on_morphisms = {identity_functor(c1), mono, identity_functor(c2)};
  return F;
}

DoubleFunctor transposition_fixture(CategoryPtr a) {
  auto d = std::make_shared<const FinDoubleCategory>(boxtimes(chain(0), *a));
  return to_terminal(d);
}

std::vector<CorpusEntry> generate_corpus(const CorpusOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const int maxb = std::max(1, opt.max_base_objects), maxf = std::max(1, opt.max_fiber_objects);
  auto pool = pool_upto(maxf, false);
  auto discrete_pool = pool_upto(std::min(maxf, 2), true);
  auto point = share(chain(0));
  auto random_base = [&](int n) { return share(pick(rng, 3) == 0 ? random_free_category(rng, std::min(n, 4)) : random_poset(rng, n)); };
  std::vector<CorpusEntry> out;
  for (int i = 0; i < opt.count; ++i) {
    CorpusEntry e;
    const int slot = i % 20;
    char buf[32];
    if (slot < 10) {
      e.provenance = "copresheaf";
      auto C = random_base(1 + pick(rng, maxb));
      e.functor = random_cat_valued_from(rng, C, pool);
      e.p = copresheaf_of(*e.functor).projection;
    } else if (slot < 13) {
      e.provenance = "two-sided";
      const int na = 1 + pick(rng, std::min(3, maxb)), nb = 1 + pick(rng, std::max(1, std::min(2, maxb / na)));
      auto A = share(random_poset(rng, na)), B = share(random_poset(rng, nb));
      auto AB = share(product(*A, opposite(*B)));
      auto F = random_cat_valued_from(rng, AB, pool);
      e.p = grothendieck_double(F, A, B).projection;
    } else if (slot < 17) {
      e.provenance = "base-change";
      auto C = share(random_poset(rng, 1 + pick(rng, maxb)));
      auto F = random_cat_valued_from(rng, C, pool);
      DoubleFunctor p = copresheaf_of(F).projection;
      auto C2 = share(random_poset(rng, 1 + pick(rng, std::min(3, maxb))));
      auto us = all_functors(C2, C);
      FinFunctor u = us[pick(rng, static_cast<int>(us.size()))];
      auto src = std::make_shared<const FinDoubleCategory>(boxtimes(*C2, *point));
      DoubleFunctor g = boxtimes(u, identity_functor(point), src, p.target);
      e.p = pullback(p, g).projection;
    } else {
      e.provenance = "composite";
      std::shared_ptr<const FinCategory> C2, C;
      Unstraightening un;
      for (;;) {
        C2 = share(random_poset(rng, 1 + pick(rng, std::min(3, maxb))));
        un = unstraighten_1(random_cat_valued_from(rng, C2, discrete_pool));
        if (un.projection.source->num_objects() <= maxb) break;
      }
      C = un.projection.source;
      auto F = random_cat_valued_from(rng, C, pool);
      DoubleFunctor p = copresheaf_of(F).projection;
      auto tgt = std::make_shared<const FinDoubleCategory>(boxtimes(*C2, *point));
      DoubleFunctor q = boxtimes(un.projection, identity_functor(point), p.target, tgt);
      e.p = compose(q, p);
    }
    std::snprintf(buf, sizeof buf, "g%03d-", i);
    e.name = buf + e.provenance;
    e.gaunt = is_gaunt(*e.p.source) && is_gaunt(*e.p.target);
    certify(e);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Instance> corpus_instances(const CorpusOptions& opt) {
  std::vector<Instance> out;
  auto left_cart = [](const DoubleFunctor& p) { return certificate_json(is_left_cart_fibration(p)); };

  CatValuedFunctor F = fixture_cat_valued();
  Instance cv = make_instance("cat-valued-functor", "fixture-cat-valued", encode(F), "fixture");
  cv.certificate = report_json(validate_cat_valued(F));
  out.push_back(cv);
  DoubleFunctor cp = copresheaf_of(F).projection;
  Instance ci = make_instance("double-functor", "fixture-copresheaf", encode(cp), "fixture");
  ci.certificate = left_cart(cp);
  out.push_back(ci);

  auto pool = fiber_pool();
  const std::vector<std::pair<std::string, int>> trans = {{"chain2", 2}, {"fork", 4}, {"parallel", 6}};
  for (auto& [nm, k] : trans) {
    DoubleFunctor t = transposition_fixture(share(pool[k]));
    Instance ti = make_instance("double-functor", "fixture-transposition-" + nm, encode(t), "fixture");
    ti.certificate = left_cart(t);
    out.push_back(ti);
  }
  const std::vector<std::pair<std::string, FinDoubleCategory>> shapes = {
      {"fixture-grid-2-1", grid(2, 1)}, {"fixture-ar-2", arrow_double(2)}, {"fixture-tw-2", twisted_double(2)}};
  for (auto& [nm, d] : shapes) {
    Instance si = make_instance("double", nm, encode(d), "fixture");
    si.certificate = report_json(validate_double(d));
    out.push_back(si);
  }
  auto cell = std::make_shared<const FinTwoCategory>(two_cell());
  auto lax = std::make_shared<const FinTwoCategory>(lax_triangle());
  TwoFunctor lp = lax_triangle_projection(lax, cell);
  Instance li = make_instance("two-functor", "fixture-lax-triangle", encode(lp), "fixture");
  li.certificate = certificate_json(is_1cocartesian_fibration(lp));
  out.push_back(li);
  TwoCatValuedFunctor rep = representable(cell, 0);
  Instance ri = make_instance("cat-valued-functor", "fixture-representable", encode(rep), "fixture");
  ri.certificate = report_json(validate_two_cat_valued(rep));
  out.push_back(ri);

  for (auto& e : generate_corpus(opt)) {
    Instance gi = make_instance("double-functor", e.name, encode(e.p), e.provenance, opt.seed);
    gi.certificate = left_cart(e.p);
    out.push_back(gi);
  }
  return out;
}

}  // namespace dblcat

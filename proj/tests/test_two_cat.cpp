#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

// Local index of each morphism within its hom-set, in morphism order.
std::vector<int> local_indices(const FinCategory& c) {
  std::vector<int> local(c.num_morphisms());
  std::map<std::pair<int, int>, int> next;
  for (int f = 0; f < c.num_morphisms(); ++f) local[f] = next[{c.src[f], c.tgt[f]}]++;
  return local;
}

// A functor between categories as a 2-functor between their locally
// discrete 2-categories.
TwoFunctor locally_discrete_functor(const FinFunctor& f, TwoPtr s, TwoPtr t) {
  const FinCategory &a = *f.source, &b = *f.target;
  auto la = local_indices(a), lb = local_indices(b);
  const int n = a.num_objects();
  TwoFunctor r{s, t, f.on_objects, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto src = s->homs[x * n + y];
      auto tgt = t->homs[f.on_objects[x] * b.num_objects() + f.on_objects[y]];
      FinFunctor h{src, tgt, {}, {}};
      for (int g : a.hom(x, y)) h.on_objects.push_back(lb[f.on_morphisms[g]]);
      for (int k = 0; k < src->num_morphisms(); ++k) h.on_morphisms.push_back(h.on_objects[src->src[k]]);
      r.homs.push_back(h);
      (void)la;
    }
  return r;
}

// Every hom functor sends everything to one object.
TwoFunctor collapse_cell(TwoPtr cell, TwoPtr arrow) {
  const int n = cell->num_objects();
  TwoFunctor r{cell, arrow, {0, 1}, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto src = cell->homs[x * n + y];
      auto tgt = arrow->homs[x * n + y];
      FinFunctor h{src, tgt, {}, {}};
      for (int o = 0; o < src->num_objects(); ++o) h.on_objects.push_back(0);
      for (int k = 0; k < src->num_morphisms(); ++k) h.on_morphisms.push_back(tgt->ident[0]);
      r.homs.push_back(h);
    }
  return r;
}

struct LaxSetup {
  TwoPtr cell = share(two_cell());
  TwoPtr lax = share(lax_triangle());
  TwoFunctor p = lax_triangle_projection(lax, cell);
};

}  // namespace

TEST_CASE("the free 2-cell and the lax triangle") {
  LaxSetup s;
  CHECK(validate_two_category(*s.cell).ok());
  CHECK(validate_two_category(*s.lax).ok());
  CHECK(validate_two_functor(s.p).ok());
  CHECK(s.cell->hom(0, 1).num_objects() == 2);
  CHECK(s.cell->hom(0, 1).num_morphisms() == 3);
  CHECK(s.lax->hom(0, 2).num_objects() == 2);
  CHECK(s.lax->hom(0, 2).num_morphisms() == 3);
  CHECK(s.p.ob == std::vector<int>{0, 1, 1});
}

TEST_CASE("the lax triangle is a 1-cocartesian fibration over the free 2-cell") {
  LaxSetup s;
  for (CompareMode mode : {CompareMode::Iso, CompareMode::Equiv}) {
    TwoFibrationCertificate c = is_1cocartesian_fibration(s.p, mode);
    CHECK_MESSAGE(c.ok, c.failure);
    CHECK(c.local_ok);
    CHECK(c.composition_ok);
    CHECK(c.lifts_ok);
    CHECK(c.gaunt_homs);
    CHECK(c.unique_lifts);
    for (auto& l : c.lifts) CHECK(l.candidates == 1);
  }
}

TEST_CASE("collapsing the 2-cell is not a 1-cocartesian fibration") {
  auto cell = share(two_cell());
  auto arrow = share(locally_discrete(chain(1)));
  TwoFunctor p = collapse_cell(cell, arrow);
  REQUIRE(validate_two_functor(p).ok());
  TwoFibrationCertificate c = is_1cocartesian_fibration(p);
  CHECK_FALSE(c.ok);
  CHECK_FALSE(c.local_ok);
  CHECK_FALSE(c.failure.empty());
}

TEST_CASE("identities and projections") {
  LaxSetup s;
  for (TwoPtr t : {s.cell, s.lax}) CHECK(is_1cocartesian_fibration(identity_two_functor(t)).ok);
  auto ld = share(locally_discrete(chain(2)));
  for (TwoPtr t : {ld, s.cell}) {
    auto prod = share(product(*s.lax, *t));
    REQUIRE(validate_two_category(*prod).ok());
    TwoFunctor pr = product_projection(s.lax, t, prod, 0);
    REQUIRE(validate_two_functor(pr).ok());
    // Fibers must be 1-categories: non-identity 2-cells in t break the local leg.
    TwoFibrationCertificate c = is_1cocartesian_fibration(pr);
    CHECK(c.ok == (t == ld));
    CHECK(c.local_ok == (t == ld));
  }
}

TEST_CASE("double nerves") {
  LaxSetup s;
  std::mt19937 rng(61);
  std::vector<FinTwoCategory> cases{*s.cell, *s.lax, product(*s.lax, *s.cell)};
  for (int t = 0; t < 4; ++t) cases.push_back(locally_discrete(gen_poset(rng, 2 + t)));
  for (auto& t : cases) {
    REQUIRE(validate_two_category(t).ok());
    auto d = share(double_nerve(t));
    CHECK(validate_double(*d).ok());
    for (int v = 0; v < d->num_v(); ++v) CHECK(d->v_is_id(v));
    for (int n = 0; n <= 2; ++n) CHECK(nerve_eval(d, 0, n).size() == static_cast<std::size_t>(t.num_objects()));
    auto back = two_category_of(*d);
    REQUIRE(back);
    CHECK(*back == t);
  }
  FinCategory c = gen_poset(rng, 4);
  FinDoubleCategory a = double_nerve(locally_discrete(c)), b = boxtimes(c, chain(0));
  CHECK(a.num_objects() == b.num_objects());
  CHECK(a.num_h() == b.num_h());
  CHECK(a.num_v() == b.num_v());
  CHECK(a.num_s() == b.num_s());
  CHECK(find_isomorphism(horizontal_category(a), horizontal_category(b)).has_value());
  // A double category with a non-identity v-arrow is not a nerve.
  std::string why;
  CHECK_FALSE(two_category_of(grid(0, 1), &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("representable unstraightens to the lax triangle") {
  LaxSetup s;
  TwoCatValuedFunctor F = representable(s.cell, 0);
  REQUIRE(validate_two_cat_valued(F).ok());
  TwoUnstraightening un = unstraighten_2(F);
  CHECK(un.certificate.ok);
  CHECK(un.gaunt_fibers);
  CHECK(un.projection.source->num_objects() == 3);
  CHECK(validate_two_category(*un.projection.source).ok());
  CHECK(find_two_isomorphism(un.projection.source, s.lax, &un.projection, &s.p).has_value());
  PipelineResult pipe = unstraighten_2_pipeline(F);
  REQUIRE_MESSAGE(pipe.projection, pipe.detail);
  CHECK(find_two_isomorphism(un.projection.source, pipe.projection->source, &un.projection, &*pipe.projection));
}

TEST_CASE("constant functors unstraighten to products") {
  LaxSetup s;
  for (FinCategory k : {chain(0), chain(2), discrete({"a", "b"})}) {
    auto kp = share(k);
    for (TwoPtr base : {s.cell, s.lax}) {
      TwoUnstraightening un = unstraighten_2(constant_two_functor(base, kp));
      CHECK(un.certificate.ok);
      auto kk = share(locally_discrete(k));
      auto prod = share(product(*base, *kk));
      TwoFunctor pr = product_projection(base, kk, prod, 0);
      CHECK(find_two_isomorphism(un.projection.source, prod, &un.projection, &pr).has_value());
      PipelineResult pipe = unstraighten_2_pipeline(constant_two_functor(base, kp));
      REQUIRE(pipe.projection);
      CHECK(find_two_isomorphism(un.projection.source, pipe.projection->source, &un.projection, &*pipe.projection));
    }
  }
}

TEST_CASE("fibers of the 2-categorical unstraightening") {
  LaxSetup s;
  TwoCatValuedFunctor F = representable(s.cell, 0);
  TwoUnstraightening un = unstraighten_2(F);
  for (int c = 0; c < s.cell->num_objects(); ++c) {
    FinTwoCategory fb = two_fiber(un.projection, c);
    CHECK(validate_two_category(fb).ok());
    for (auto& h : fb.homs)
      for (int k = 0; k < h->num_morphisms(); ++k) CHECK(h->is_identity(k));
    CHECK(find_isomorphism(underlying_category(fb), *F.on_objects[c]).has_value());
  }
}

TEST_CASE("non-gaunt fibers need equivalence mode") {
  LaxSetup s;
  TwoCatValuedFunctor F = constant_two_functor(s.cell, share(iso_pair()));
  CHECK_THROWS_AS(unstraighten_2(F, CompareMode::Iso), ContractError);
  TwoUnstraightening un = unstraighten_2(F, CompareMode::Equiv);
  CHECK(un.certificate.ok);
  CHECK_FALSE(un.gaunt_fibers);
  CHECK_FALSE(un.note.empty());
}

TEST_CASE("cocartesian triangles extend uniquely") {
  LaxSetup s;
  for (TwoCatValuedFunctor F : {representable(s.cell, 0), constant_two_functor(s.cell, share(chain(1))),
                                constant_two_functor(s.cell, share(discrete({"a", "b"})))}) {
    TwoUnstraightening un = unstraighten_2(F);
    const TwoFunctor& P = un.projection;
    for (int d0 = 0; d0 < P.source->num_objects(); ++d0) {
      if (P.ob[d0] != 0) continue;
      int found = 0;
      for (auto& L : two_lifts(s.lax, P, s.p, {d0, -1, -1})) {
        const int a01 = L.hom(0, 1).on_objects[0];
        const int a02 = L.hom(0, 2).on_objects[1];
        if (is_cocartesian_1cell(P, d0, L.ob[1], a01, CompareMode::Iso) &&
            is_cocartesian_1cell(P, d0, L.ob[2], a02, CompareMode::Iso))
          ++found;
      }
      CHECK(found == 1);
    }
  }
}

TEST_CASE("on locally discrete bases everything reduces to categories") {
  std::mt19937 rng(62);
  int agree = 0;
  for (int t = 0; t < 40; ++t) {
    auto a = share(gen_poset(rng, 1 + t % 4, 0.5));
    auto b = share(gen_poset(rng, 1 + t % 3, 0.5));
    auto p = gen_thin_functor(rng, a, b);
    if (!p) continue;
    auto ta = share(locally_discrete(*a)), tb = share(locally_discrete(*b));
    TwoFunctor P = locally_discrete_functor(*p, ta, tb);
    REQUIRE(validate_two_functor(P).ok());
    CHECK(is_1cocartesian_fibration(P).ok == is_cocartesian_fibration(*p));
    ++agree;
  }
  CHECK(agree > 20);
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    const CatValuedFunctor& F = *e.functor;
    auto base = share(locally_discrete(*F.base));
    TwoUnstraightening un2 = unstraighten_2(from_cat_valued(F, base));
    CHECK(un2.certificate.ok);
    Unstraightening un1 = unstraighten_1(F);
    auto ue = share(underlying_category(*un2.projection.source));
    auto ub = share(underlying_category(*base));
    FinFunctor p2 = underlying_functor(un2.projection, ue, ub);
    // Relabel the base: morphism f of C is the nerve 1-cell (src, tgt, local).
    auto local = local_indices(*F.base);
    FinFunctor relabel{F.base, ub, {}, {}};
    for (int x = 0; x < F.base->num_objects(); ++x) relabel.on_objects.push_back(x);
    for (int f = 0; f < F.base->num_morphisms(); ++f)
      relabel.on_morphisms.push_back(nerve_h_index(*base, F.base->src[f], F.base->tgt[f], local[f]));
    REQUIRE(validate_functor(relabel).ok());
    FinFunctor p1 = compose(relabel, un1.projection);
    CHECK(find_isomorphism(*ue, *un1.projection.source, &p2, &p1).has_value());
    for (auto& h : un2.projection.source->homs)
      for (int k = 0; k < h->num_morphisms(); ++k) CHECK(h->is_identity(k));
  }
}

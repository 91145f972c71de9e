#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

// Morphisms of Un(F) counted from the formula: sum over gamma: c -> c' and
// x in F(c) of |hom(F(gamma) x, x')| over x'.
std::size_t un_morphism_count(const CatValuedFunctor& F) {
  std::size_t n = 0;
  const FinCategory& C = *F.base;
  for (int g = 0; g < C.num_morphisms(); ++g) {
    const FinCategory& a = *F.on_objects[C.src[g]];
    const FinCategory& b = *F.on_objects[C.tgt[g]];
    for (int x = 0; x < a.num_objects(); ++x) {
      int fx = F.on_morphisms[g].on_objects[x];
      for (int f = 0; f < b.num_morphisms(); ++f) n += b.src[f] == fx;
    }
  }
  return n;
}

FinFunctor pick_object(CategoryPtr point, CategoryPtr target, int x) {
  return FinFunctor{point, target, {x}, {target->ident[x]}};
}

// F(0) = point, F(1) = [1], with 0 -> 1 picking object 0.
CatValuedFunctor point_into_arrow() {
  auto base = share(chain(1));
  auto pt = share(chain(0));
  auto c1 = share(chain(1));
  CatValuedFunctor F{base, {pt, c1}, {}};
  for (int g = 0; g < base->num_morphisms(); ++g) {
    if (base->is_identity(g))
      F.on_morphisms.push_back(identity_functor(F.on_objects[base->src[g]]));
    else
      F.on_morphisms.push_back(pick_object(pt, c1, 0));
  }
  return F;
}

}  // namespace

TEST_CASE("unstraightening a point into an arrow") {
  CatValuedFunctor F = point_into_arrow();
  REQUIRE(validate_cat_valued(F).ok());
  Unstraightening un = unstraighten_1(F);
  CHECK(validate_category(*un.projection.source).ok());
  CHECK(un.projection.source->num_objects() == 3);
  CHECK(un_morphism_count(F) == 6);
  CHECK(un.projection.source->num_morphisms() == 6);
  CHECK(is_cocartesian_fibration(un.projection));
  CHECK_FALSE(split_failure(un.projection, un.cleavage).has_value());
}

TEST_CASE("constant functors unstraighten to products") {
  std::mt19937 rng(51);
  for (int t = 0; t < 10; ++t) {
    auto base = share(gen_poset(rng, 1 + t % 4));
    auto k = share(t % 2 ? chain(1) : idempotent());
    CatValuedFunctor F = constant_functor(base, k);
    Unstraightening un = unstraighten_1(F);
    auto prod = share(product(*base, *k));
    FinFunctor pr = projection_first(base, k, prod);
    CHECK(find_isomorphism(*un.projection.source, *prod, &un.projection, &pr).has_value());
    CatValuedFunctor st = straighten_1(pr, cocartesian_cleavage(pr));
    for (int c = 0; c < base->num_objects(); ++c) CHECK(find_isomorphism(*st.on_objects[c], *k).has_value());
    GrothendieckDouble X = copresheaf_of(F);
    CHECK(find_isomorphism(horizontal_category(*X.projection.source), product(*base, discrete({"*"}))).has_value() ==
          (k->num_objects() == 1));
    FinDoubleCategory box = boxtimes(*base, *k);
    CHECK(X.projection.source->num_objects() == box.num_objects());
    CHECK(X.projection.source->num_h() == box.num_h());
    CHECK(X.projection.source->num_v() == box.num_v());
    CHECK(X.projection.source->num_s() == box.num_s());
  }
}

TEST_CASE("straightening inverts unstraightening") {
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    const CatValuedFunctor& F = *e.functor;
    Unstraightening un = unstraighten_1(F);
    CHECK(un.projection.source->num_morphisms() == static_cast<int>(un_morphism_count(F)));
    CHECK(is_cocartesian_fibration(un.projection));
    REQUIRE_FALSE(split_failure(un.projection, un.cleavage).has_value());
    CatValuedFunctor st = straighten_1(un.projection, un.cleavage);
    CHECK(same_functor(st, F));
    Unstraightening again = unstraighten_1(st);
    FinFunctor cmp = unstraighten_comparison(un.projection, un.cleavage, again);
    CHECK(validate_functor(cmp).ok());
    CHECK(is_isomorphism(cmp));
    for (int c = 0; c < F.base->num_objects(); ++c) {
      std::vector<int> objs;
      for (int x = 0; x < F.on_objects[c]->num_objects(); ++x) objs.push_back(un.object(c, x));
      for (int x : objs) CHECK(un.projection.on_objects[x] == c);
    }
  }
}

TEST_CASE("a tampered cleavage is reported") {
  CatValuedFunctor F = point_into_arrow();
  Unstraightening un = unstraighten_1(F);
  const FinCategory& E = *un.projection.source;
  // Replace a chosen identity lift by a non-identity endomorphism if any, or
  // by another morphism out of the same object.
  Cleavage bad = un.cleavage;
  bool changed = false;
  for (auto& [key, lift] : bad.lift) {
    if (!E.is_identity(lift)) continue;
    for (int f : E.out[E.src[lift]])
      if (f != lift && un.projection.on_morphisms[f] == un.projection.on_morphisms[lift]) {
        lift = f;
        changed = true;
        break;
      }
    if (changed) break;
  }
  REQUIRE(changed);
  CHECK(split_failure(un.projection, bad).has_value());
}

TEST_CASE("transport along chosen lifts matches the table") {
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    const CatValuedFunctor& F = *e.functor;
    Unstraightening un = unstraighten_1(F);
    Cleavage cl = cocartesian_cleavage(un.projection);
    CatValuedFunctor st = straighten_1(un.projection, cl);
    CHECK(same_functor(st, F));
  }
}

TEST_CASE("copresheaves certify and mark invertible fiber arrows") {
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    GrothendieckDouble X = copresheaf_of(*e.functor);
    CHECK(is_left_cart_fibration(X.projection).ok);
    MarkedDoubleCategory m = mark_cartesian_verticals(X.projection);
    FinCategory vc = vertical_category(*X.projection.source);
    for (int v = 0; v < vc.num_morphisms(); ++v) CHECK(m.marked[v] == vc.inverse(v).has_value());
  }
}

TEST_CASE("unstraightening agrees with the reflection") {
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    UnReflectReport r = check_un_equals_reflect(*e.functor);
    CHECK_MESSAGE(r.ok, e.name << ": " << r.detail);
    CHECK(r.counts_match);
    CHECK(r.isomorphism);
    CHECK(r.verticals_identities);
    Reflection refl = reflect_perp(copresheaf_of(*e.functor).projection);
    CHECK(refl.total->num_h() == unstraighten_1(*e.functor).projection.source->num_morphisms());
  }
}

TEST_CASE("natural transformations induce maps over the base") {
  std::mt19937 rng(52);
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    const CatValuedFunctor& F = *e.functor;
    Unstraightening uf = unstraighten_1(F);
    std::vector<FinFunctor> id;
    for (auto& c : F.on_objects) id.push_back(identity_functor(c));
    FinFunctor m = unstraighten_map(F, F, id, uf, uf);
    CHECK(validate_functor(m).ok());
    CHECK(m.on_objects == identity_functor(uf.projection.source).on_objects);
    CHECK(m.on_morphisms == identity_functor(uf.projection.source).on_morphisms);
    // To the terminal functor: everything collapses to the base.
    auto pt = share(chain(0));
    CatValuedFunctor T = constant_functor(F.base, pt);
    std::vector<FinFunctor> bang;
    for (auto& c : F.on_objects) bang.push_back(to_terminal(c));
    Unstraightening ut = unstraighten_1(T);
    FinFunctor b = unstraighten_map(F, T, bang, uf, ut);
    CHECK(validate_functor(b).ok());
    CHECK(compose(ut.projection, b).on_morphisms == uf.projection.on_morphisms);
    // Composition F -> F -> T.
    FinFunctor bb = compose(b, m);
    CHECK(bb.on_morphisms == b.on_morphisms);
  }
}

TEST_CASE("contravariant unstraightening is the opposite construction") {
  CatValuedFunctor F = point_into_arrow();
  Unstraightening co = unstraighten_1(F, true);
  CHECK(is_cartesian_fibration(co.projection));
  CHECK(co.projection.target->num_objects() == 2);
}

TEST_CASE("two-sided construction certifies") {
  for (auto& e : small_corpus()) {
    if (e.provenance != "two-sided") continue;
    CHECK(is_left_cart_fibration(e.p).ok);
    CHECK(certify_reflection(reflect_perp(e.p)).ok());
  }
}

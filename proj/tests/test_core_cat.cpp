#include <doctest.h>

#include <map>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

// Arrow category with its target functor, built from scratch.
std::pair<FinCategory, std::vector<std::array<int, 4>>> arrow_category_oracle(const FinCategory& c) {
  std::vector<std::array<int, 4>> cells;
  CategoryBuilder b;
  for (int f = 0; f < c.num_morphisms(); ++f) b.add_object(c.morphisms[f]);
  std::map<std::array<int, 4>, int> index;
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int id = b.identity(f);
    std::array<int, 4> key{f, f, c.ident[c.src[f]], c.ident[c.tgt[f]]};
    index[key] = id;
  }
  cells.resize(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) cells[f] = {f, f, c.ident[c.src[f]], c.ident[c.tgt[f]]};
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int g = 0; g < c.num_morphisms(); ++g)
      for (int a = 0; a < c.num_morphisms(); ++a)
        for (int bb = 0; bb < c.num_morphisms(); ++bb) {
          if (c.src[a] != c.src[f] || c.tgt[a] != c.src[g] || c.src[bb] != c.tgt[f] || c.tgt[bb] != c.tgt[g]) continue;
          if (c.compose(bb, f) != c.compose(g, a)) continue;
          std::array<int, 4> key{f, g, a, bb};
          if (index.count(key)) continue;
          index[key] = b.add_morphism("m" + std::to_string(cells.size()), f, g);
          cells.push_back(key);
        }
  for (auto& [k1, m1] : index)
    for (auto& [k2, m2] : index)
      if (k1[1] == k2[0]) {
        std::array<int, 4> k{k1[0], k2[1], c.compose(k2[2], k1[2]), c.compose(k2[3], k1[3])};
        if (!(c.is_identity(k1[2]) && c.is_identity(k1[3])) && !(c.is_identity(k2[2]) && c.is_identity(k2[3])))
          b.set_comp(m2, m1, index.at(k));
      }
  return {b.finish(), cells};
}

}  // namespace

TEST_CASE("chain categories have the expected shape") {
  FinCategory c2 = chain(2);
  CHECK(c2.num_objects() == 3);
  CHECK(c2.num_morphisms() == 6);
  CHECK(c2.num_morphisms() == order_pairs(2));
  CHECK(validate_category(c2).ok());
  for (int n = 0; n <= 5; ++n) {
    CHECK(chain(n).num_morphisms() == static_cast<int>(binom(n + 2, 2)));
    CHECK(chain(n).num_morphisms() == order_pairs(n));
  }
  CHECK(product(chain(1), chain(1)).num_morphisms() == 9);
  CHECK(validate_category(product(chain(1), chain(2))).ok());
}

TEST_CASE("opposite is an involution") {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    FinCategory c = gen_poset(rng, 1 + t % 5);
    CHECK(opposite(opposite(c)) == c);
  }
  CHECK(opposite(opposite(iso_pair())) == iso_pair());
}

TEST_CASE("validator names the failing law") {
  FinCategory c = chain(2);
  // 1<2 o 0<1 should be 0<2; point it at 1<2 instead.
  int f = c.hom(0, 1)[0], g = c.hom(1, 2)[0];
  c.comp.set(g, f, g);
  Report r = validate_category(c);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (auto& v : r.violations)
    if (v.law == "src(g∘f) ≠ src(f)") {
      found = true;
      CHECK(v.witness == "1<2 o 0<1 = 1<2");
    }
  CHECK(found);
}

TEST_CASE("perturbing one composition entry of a poset is always caught") {
  std::mt19937 rng(12);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    FinCategory c = gen_poset(rng, 2 + t % 5, 0.6);
    REQUIRE(validate_category(c).ok());
    std::vector<std::array<int, 3>> entries;
    c.comp.for_each([&](int g, int f, int gf) { entries.push_back({g, f, gf}); });
    auto [g, f, gf] = entries[rng() % entries.size()];
    if (c.num_morphisms() < 2) continue;
    int other = static_cast<int>(rng() % (c.num_morphisms() - 1));
    if (other >= gf) ++other;
    c.comp.set(g, f, other);
    CHECK_FALSE(validate_category(c).ok());
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("cartesian arrows agree with the horn-filler oracle") {
  std::mt19937 rng(13);
  int cases = 0;
  for (int t = 0; t < 80; ++t) {
    auto a = share(gen_poset(rng, 1 + t % 6, 0.5));
    auto b = share(gen_poset(rng, 1 + (t / 2) % 4, 0.5));
    auto p = gen_thin_functor(rng, a, b);
    if (!p) continue;
    for (int alpha = 0; alpha < a->num_morphisms(); ++alpha) {
      CHECK(is_cartesian_arrow(*p, alpha) == horn_cartesian(*p, alpha));
      ++cases;
    }
    CHECK(is_cartesian_fibration(*p) == horn_cartesian_fibration(*p));
  }
  CHECK(cases > 200);
  // Non-thin sources: products with an iso pair or an idempotent.
  for (FinCategory extra : {iso_pair(), idempotent()}) {
    for (int n = 0; n <= 2; ++n) {
      auto base = share(chain(n));
      auto tot = share(product(*base, extra));
      FinFunctor p = projection_first(base, share(extra), tot);
      for (int alpha = 0; alpha < tot->num_morphisms(); ++alpha)
        CHECK(is_cartesian_arrow(p, alpha) == horn_cartesian(p, alpha));
      CHECK(is_cartesian_fibration(p) == horn_cartesian_fibration(p));
    }
  }
}

TEST_CASE("cartesian arrows contain identities and compose") {
  for (auto& e : small_corpus()) {
    FinFunctor v = vertical_part(e.p);
    auto cart = cartesian_arrows(v);
    const FinCategory& D = *v.source;
    for (int x = 0; x < D.num_objects(); ++x) CHECK(cart[D.ident[x]]);
    for (int f = 0; f < D.num_morphisms(); ++f)
      for (int g : D.out[D.tgt[f]])
        if (cart[f] && cart[g]) CHECK(cart[D.compose(g, f)]);
  }
}

TEST_CASE("over a point, cartesian means invertible") {
  for (FinCategory c : {iso_pair(), idempotent(), chain(2), product(iso_pair(), chain(1))}) {
    auto cp = share(c);
    FinFunctor p = to_terminal(cp);
    for (int a = 0; a < c.num_morphisms(); ++a) CHECK(is_cartesian_arrow(p, a) == c.inverse(a).has_value());
  }
}

TEST_CASE("projections and identities") {
  std::mt19937 rng(14);
  for (int t = 0; t < 15; ++t) {
    auto c = share(gen_poset(rng, 1 + t % 4));
    FinFunctor id = identity_functor(c);
    CHECK(is_cartesian_fibration(id));
    CHECK(is_cocartesian_fibration(id));
    CHECK(is_left_fibration(id));
    CHECK(is_right_fibration(id));
    for (int k = 1; k <= 3; ++k) {
      std::vector<std::string> names;
      for (int i = 0; i < k; ++i) names.push_back("s" + std::to_string(i));
      auto s = share(discrete(names));
      auto cs = share(product(*c, *s));
      FinFunctor p = projection_first(c, s, cs);
      CHECK(is_cartesian_fibration(p));
      CHECK(is_cocartesian_fibration(p));
      // Lifts along a discrete factor are unique whatever the sizes.
      CHECK(is_left_fibration(p) == unique_lifts_by_target(opposite(p)));
      CHECK(is_right_fibration(p) == unique_lifts_by_target(p));
      CHECK(is_left_fibration(p));
      CHECK(is_right_fibration(p));
    }
    auto d = share(chain(1));
    auto cd = share(product(*c, *d));
    FinFunctor p = projection_first(c, d, cd);
    for (int g = 0; g < c->num_morphisms(); ++g) {
      int alpha = g * d->num_morphisms() + d->ident[0];
      CHECK(is_cartesian_arrow(p, alpha));
      CHECK(horn_cartesian(p, alpha));
    }
  }
}

TEST_CASE("evaluation functors of the arrow category") {
  std::mt19937 rng(15);
  for (int t = 0; t < 10; ++t) {
    FinCategory c = t < 6 ? gen_poset(rng, 1 + t % 4, 0.6) : t < 8 ? chain(t - 5) : (t == 8 ? iso_pair() : idempotent());
    auto [ar, cells] = arrow_category_oracle(c);
    REQUIRE(validate_category(ar).ok());
    CHECK(find_isomorphism(ar, arrow_category(c)).has_value());
    auto arp = share(ar);
    auto cp = share(c);
    FinFunctor src{arp, cp, {}, {}}, tgt{arp, cp, {}, {}};
    for (int f = 0; f < ar.num_objects(); ++f) {
      src.on_objects.push_back(c.src[f]);
      tgt.on_objects.push_back(c.tgt[f]);
    }
    for (auto& cell : cells) {
      src.on_morphisms.push_back(cell[2]);
      tgt.on_morphisms.push_back(cell[3]);
    }
    REQUIRE(validate_functor(src).ok());
    REQUIRE(validate_functor(tgt).ok());
    CHECK(is_cartesian_fibration(src));
    CHECK(horn_cartesian_fibration(src));
    CHECK(is_cocartesian_fibration(tgt));
    CHECK(horn_cartesian_fibration(opposite(tgt)));
    // Cartesian lifts for the target functor are pullbacks.
    CHECK(is_cartesian_fibration(tgt) == horn_cartesian_fibration(tgt));
    if (t >= 6 && t < 8) CHECK(is_cartesian_fibration(tgt));
  }
}

TEST_CASE("cartesian and cocartesian predicates are exchanged by opposites") {
  std::mt19937 rng(16);
  for (int t = 0; t < 60; ++t) {
    auto a = share(gen_poset(rng, 1 + t % 5, 0.5));
    auto b = share(gen_poset(rng, 1 + t % 3, 0.5));
    auto p = gen_thin_functor(rng, a, b);
    if (!p) continue;
    FinFunctor q = opposite(*p);
    CHECK(is_cartesian_fibration(*p) == is_cocartesian_fibration(q));
    CHECK(is_cocartesian_fibration(*p) == is_cartesian_fibration(q));
    CHECK(is_left_fibration(*p) == is_right_fibration(q));
    CHECK(is_right_fibration(*p) == is_left_fibration(q));
  }
}

TEST_CASE("isomorphism search over a base") {
  auto c = share(chain(2));
  auto k = share(chain(1));
  auto ck = share(product(*c, *k));
  auto kc = share(product(*k, *c));
  CHECK(find_isomorphism(*ck, *kc).has_value());
  CHECK_FALSE(find_isomorphism(chain(2), discrete({"a", "b", "c"})).has_value());
  FinFunctor p = projection_first(c, k, ck);
  CHECK(find_isomorphism(*ck, *ck, &p, &p).has_value());
}

#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

DoubleFunctor over_point(FinDoubleCategory d) {
  auto dp = share(std::move(d));
  return to_terminal(dp);
}

}  // namespace

TEST_CASE("vertically constant shapes over a point") {
  for (FinCategory a : {chain(0), chain(2), iso_pair(), idempotent(), product(chain(1), chain(1))}) {
    DoubleFunctor p = over_point(boxtimes(chain(0), a));
    FibrationCertificate c = is_left_cart_fibration(p);
    CHECK(c.ok);
    CHECK(replay_certificate(p, c).ok());
    CHECK(is_cocart_right_fibration(over_point(boxtimes(a, chain(0)))).ok);
  }
  FibrationCertificate bad = is_left_cart_fibration(over_point(grid(1, 0)));
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.failure.empty());
}

TEST_CASE("identity double functors") {
  for (FinDoubleCategory d : {grid(1, 1), arrow_double(2), twisted_double(2)}) {
    auto dp = share(d);
    DoubleFunctor id = identity_double_functor(dp);
    CHECK(is_left_cart_fibration(id).ok);
    CHECK(is_cocart_right_fibration(id).ok);
  }
  // A right fibration leg fails for grid(0, 1) over a point: the v-arrow has
  // two lifts with target (0, 1) of the point's identity.
  CHECK_FALSE(is_cocart_right_fibration(over_point(grid(0, 1))).ok);
}

TEST_CASE("corpus certificates replay") {
  for (auto& e : small_corpus()) {
    FibrationCertificate c = is_left_cart_fibration(e.p, true);
    REQUIRE_MESSAGE(c.ok, e.name << ": " << c.failure);
    CHECK(replay_certificate(e.p, c).ok());
    FibrationCertificate tampered = c;
    for (auto& l : tampered.lifts)
      if (l.leg == "h-arrow" && l.solution >= 0 && e.p.source->num_h() > 1) {
        l.solution = (l.solution + 1) % e.p.source->num_h();
        break;
      }
    if (!tampered.lifts.empty()) CHECK_FALSE(replay_certificate(e.p, tampered).ok());
  }
}

TEST_CASE("conjugation exchanges the two fibration kinds") {
  std::vector<DoubleFunctor> cases;
  for (auto& e : small_corpus()) {
    cases.push_back(e.p);
    cases.push_back(reflect_perp(e.p).q);
  }
  cases.push_back(over_point(grid(1, 0)));
  cases.push_back(over_point(grid(0, 1)));
  cases.push_back(over_point(boxtimes(iso_pair(), chain(1))));
  for (auto& p : cases) {
    DoubleFunctor c = conjugate(p);
    CHECK(is_cocart_right_fibration(p).ok == is_left_cart_fibration(c).ok);
    CHECK(is_left_cart_fibration(p).ok == is_cocart_right_fibration(c).ok);
  }
}

TEST_CASE("all eight kinds parse and name themselves") {
  auto all = FibKind::all();
  CHECK(all.size() == 8);
  for (auto& k : all) CHECK(FibKind::parse(k.name()) == k);
  CHECK(kLeftCart.name() == "left-cart");
  CHECK(kCocartRight.name() == "cocart-right");
  CHECK_THROWS_AS(FibKind::parse("sideways"), ContractError);
}

TEST_CASE("cartesian markings") {
  for (auto& e : small_corpus()) {
    MarkedDoubleCategory m = mark_cartesian_verticals(e.p);
    const FinDoubleCategory& D = *m.base;
    CHECK(validate_marked(m).ok());
    for (int x = 0; x < D.num_objects(); ++x) CHECK(m.marked[D.v_id[x]]);
    for (int f = 0; f < D.num_v(); ++f)
      for (int g : D.v_out[D.v_tgt[f]])
        if (m.marked[f] && m.marked[g]) CHECK(m.marked[D.vcomp(g, f)]);
    // Over a base with only identity v-arrows, marked means invertible.
    bool vertical_discrete = true;
    for (int v = 0; v < e.p.target->num_v(); ++v) vertical_discrete = vertical_discrete && e.p.target->v_is_id(v);
    if (vertical_discrete) {
      FinCategory vc = vertical_category(D);
      for (int v = 0; v < D.num_v(); ++v) CHECK(m.marked[v] == vc.inverse(v).has_value());
    }
  }
}

TEST_CASE("strong maps") {
  for (auto& e : small_corpus()) {
    DoubleFunctor id = identity_double_functor(e.p.source);
    DoubleFunctor idb = identity_double_functor(e.p.target);
    StrongMapResult r = is_strong_map(id, idb, e.p, e.p);
    CHECK(r.commutes);
    CHECK(r.strong);
    // Base change along a random element of the base nerve.
    auto elems = nerve_eval(e.p.target, 1, 0);
    Pullback pb = pullback(e.p, elems.back());
    REQUIRE(is_left_cart_fibration(pb.projection).ok);
    StrongMapResult s = is_strong_map(pb.to_source, elems.back(), pb.projection, e.p);
    CHECK(s.commutes);
    CHECK(s.strong);
  }
  // The identity of [0] ⊠ [1] over itself is strong into [0] ⊠ [1] over a
  // point only if the v-arrow stays cartesian, which it does not.
  auto d = share(boxtimes(chain(0), chain(1)));
  DoubleFunctor p = identity_double_functor(d);
  DoubleFunctor q = to_terminal(d);
  DoubleFunctor g = to_terminal(d);
  StrongMapResult r = is_strong_map(identity_double_functor(d), g, p, q);
  CHECK(r.commutes);
  CHECK_FALSE(r.strong);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("fibers") {
  for (auto& e : small_corpus()) {
    if (!e.functor) continue;
    for (int c = 0; c < e.functor->base->num_objects(); ++c) {
      FiberReport f = fiber(e.p, c);
      CHECK(validate_category(f.fiber).ok());
      CHECK(f.horizontally_constant);
      CHECK(find_isomorphism(f.fiber, *e.functor->on_objects[c]).has_value());
    }
  }
  auto g = share(grid(2, 1));
  DoubleFunctor id = identity_double_functor(g);
  for (int c = 0; c < g->num_objects(); ++c) {
    FiberReport f = fiber(id, c);
    CHECK(f.fiber.num_objects() == 1);
    CHECK(f.fiber.num_morphisms() == 1);
  }
  CHECK_THROWS(fiber(id, 99));
}

TEST_CASE("closure under composition and base change") {
  std::mt19937 rng(31);
  for (auto& e : small_corpus()) {
    // Pull back along random cells of the base nerve.
    for (auto [m, n] : {std::pair{1, 0}, {2, 0}, {1, 1}, {0, 1}}) {
      auto elems = nerve_eval(e.p.target, m, n);
      Pullback pb = pullback(e.p, elems[rng() % elems.size()]);
      CHECK(is_left_cart_fibration(pb.projection).ok);
    }
    // Compose with the projection away from a vertically constant factor.
    auto a = share(boxtimes(chain(0), chain(1 + rng() % 2)));
    auto prod = share(product(*e.p.source, *a));
    DoubleFunctor pr = product_projection(e.p.source, a, prod, 0);
    REQUIRE(is_left_cart_fibration(pr).ok);
    CHECK(is_left_cart_fibration(compose(e.p, pr)).ok);
  }
}

#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

TEST_CASE("reflection of a vertically constant shape transposes it") {
  for (FinCategory a : {chain(1), chain(2), idempotent(), product(chain(1), chain(1))}) {
    auto ap = share(a);
    DoubleFunctor p = transposition_fixture(ap);
    REQUIRE(is_left_cart_fibration(p).ok);
    Reflection r = reflect_perp(p);
    CHECK(certify_reflection(r).ok());
    const FinDoubleCategory& R = *r.total;
    // Only identity v-arrows survive and the h-direction carries a.
    for (int v = 0; v < R.num_v(); ++v) CHECK(R.v_is_id(v));
    CHECK(find_isomorphism(horizontal_category(R), a).has_value());
    CHECK(R.num_s() == a.num_morphisms());
    RoundtripResult rt = roundtrip_iso(p, vertical_cleavage(p));
    CHECK(rt.status == RoundtripResult::Status::Isomorphism);
    // Over a point the conjugate reflection transposes back.
    ConjugateReflection top = reflect_top(r.q);
    CHECK(find_isomorphism(vertical_category(*top.result.source), a).has_value());
  }
}

TEST_CASE("reflection of an identity") {
  for (FinDoubleCategory d : {grid(1, 1), grid(2, 0), arrow_double(2)}) {
    auto dp = share(d);
    DoubleFunctor id = identity_double_functor(dp);
    Reflection r = reflect_perp(id);
    CHECK(certify_reflection(r).ok());
    CHECK(r.total->num_objects() == d.num_objects());
    CHECK(r.total->num_h() == d.num_h());
    CHECK(r.total->num_v() == d.num_v());
    CHECK(r.total->num_s() == d.num_s());
    RoundtripResult rt = roundtrip_iso(id, vertical_cleavage(id));
    REQUIRE(rt.status == RoundtripResult::Status::Isomorphism);
    REQUIRE(rt.comparison);
    // Every cell maps to the cell of R built from it.
    for (int x = 0; x < d.num_objects(); ++x) CHECK(rt.comparison->ob[x] == x);
  }
}

TEST_CASE("reflections certify and swap fibers") {
  for (auto& e : small_corpus()) {
    Reflection r = reflect_perp(e.p);
    ReflectionCertificate c = certify_reflection(r);
    CHECK_MESSAGE(c.ok(), e.name << ": " << c.output.failure);
    CHECK(c.cocartesian_marking_matches);
    for (int x = 0; x < e.p.target->num_objects(); ++x) {
      FiberSwapResult s = fiber_swap(r, x);
      CHECK_MESSAGE(s.ok, e.name << " at " << x << ": " << s.detail);
      CHECK(find_isomorphism(horizontal_fiber(r.q, x).fiber, fiber(e.p, x).fiber).has_value());
    }
  }
}

TEST_CASE("provenance of reflected cells") {
  for (auto& e : small_corpus()) {
    Reflection r = reflect_perp(e.p);
    const FinDoubleCategory& D = *e.p.source;
    const FinDoubleCategory& R = *r.total;
    MarkedDoubleCategory cart = mark_cartesian_verticals(e.p);
    for (int k = 0; k < R.num_h(); ++k) {
      int f = r.h_arrow[k], v = r.h_fiber[k];
      CHECK(D.v_src[v] == D.h_tgt[f]);
      CHECK(e.p.target->v_is_id(e.p.v[v]));
      CHECK(r.find_h(f, v) == k);
    }
    for (int k = 0; k < R.num_v(); ++k) {
      CHECK(cart.marked[r.v_arrow[k]]);
      CHECK(r.find_v(r.v_arrow[k]) == k);
    }
    for (int s = 0; s < R.num_s(); ++s) CHECK(cart.marked[r.s_right[s]]);
  }
}

TEST_CASE("conjugate reflections") {
  for (auto& e : small_corpus()) {
    Reflection r = reflect_perp(e.p);
    ConjugateReflection top = reflect_top(r.q);
    CHECK(is_left_cart_fibration(top.result).ok);
    // reflect_top is reflect_perp conjugated on both sides.
    Reflection direct = reflect_perp(conjugate(r.q));
    DoubleFunctor expected = conjugate(direct.q);
    CHECK(*expected.source == *top.result.source);
    CHECK(expected == top.result);
  }
  // Dagger: a (cocart, left)-fibration to a (left, cocart)-fibration.
  FibKind cocart_left = FibKind::parse("cocart-left");
  FibKind left_cocart = FibKind::parse("left-cocart");
  for (FinCategory a : {chain(1), chain(2)}) {
    auto d = share(boxtimes(a, chain(0)));
    DoubleFunctor p = to_terminal(d);
    REQUIRE(check_fibration(p, cocart_left).ok);
    ConjugateReflection dag = reflect_dagger(p);
    CHECK(check_fibration(dag.result, left_cocart).ok);
    // Over a point the result is the transpose of the opposite.
    CHECK(find_isomorphism(vertical_category(*dag.result.source), opposite(a)).has_value());
  }
}

TEST_CASE("vertical factorizations recompose") {
  for (auto& e : small_corpus()) {
    VerticalCleavage cl = vertical_cleavage(e.p);
    const FinDoubleCategory& D = *e.p.source;
    MarkedDoubleCategory cart = mark_cartesian_verticals(e.p);
    for (int v = 0; v < D.num_v(); ++v) {
      Factorization f = vertical_factorization(e.p, v, cl);
      CHECK(D.vcomp(f.cartesian_part, f.fiber_part) == v);
      CHECK(cart.marked[f.cartesian_part]);
      CHECK(e.p.target->v_is_id(e.p.v[f.fiber_part]));
      if (cl.get(e.p.v[v], D.v_tgt[v]) == v) CHECK(D.v_is_id(f.fiber_part));
      if (e.p.target->v_is_id(e.p.v[v])) CHECK(f.fiber_part == v);
    }
  }
}

TEST_CASE("round trip on the corpus") {
  for (auto& e : small_corpus()) {
    RoundtripResult rt = roundtrip_iso(e.p, vertical_cleavage(e.p));
    CHECK_MESSAGE(rt.status == RoundtripResult::Status::Isomorphism, e.name << ": " << rt.detail);
    if (!rt.comparison) continue;
    CHECK(validate_double_functor(*rt.comparison).ok());
    CHECK(compose(rt.target_projection, *rt.comparison) == e.p);
    StrongMapResult s = is_strong_map(*rt.comparison, identity_double_functor(e.p.target), e.p, rt.target_projection);
    CHECK(s.strong);
  }
}

TEST_CASE("strong maps induce maps of reflections") {
  for (auto& e : small_corpus()) {
    Reflection r = reflect_perp(e.p);
    DoubleFunctor id = reflect_map(identity_double_functor(e.p.source), r, r);
    CHECK(id == identity_double_functor(r.total));
    auto elems = nerve_eval(e.p.target, 1, 1);
    const DoubleFunctor& g = elems[elems.size() / 2];
    Pullback pb = pullback(e.p, g);
    Reflection rp = reflect_perp(pb.projection);
    DoubleFunctor m = reflect_map(pb.to_source, rp, r);
    CHECK(validate_double_functor(m).ok());
    CHECK(compose(r.q, m) == compose(g, rp.q));
    // Composition: pull back the pullback again along an identity.
    DoubleFunctor idg = identity_double_functor(pb.projection.target);
    Pullback pb2 = pullback(pb.projection, idg);
    Reflection rp2 = reflect_perp(pb2.projection);
    DoubleFunctor m2 = reflect_map(pb2.to_source, rp2, rp);
    DoubleFunctor whole = reflect_map(compose(pb.to_source, pb2.to_source), rp2, r);
    CHECK(compose(m, m2) == whole);
  }
}

TEST_CASE("reflection refuses non-fibrations") {
  auto g = share(grid(1, 0));
  CHECK_THROWS_AS(reflect_perp(to_terminal(g)), ContractError);
}

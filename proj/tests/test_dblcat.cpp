#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

int nontrivial_h(const FinDoubleCategory& d) {
  int n = 0;
  for (int f = 0; f < d.num_h(); ++f) n += !d.h_is_id(f);
  return n;
}
int nontrivial_v(const FinDoubleCategory& d) {
  int n = 0;
  for (int f = 0; f < d.num_v(); ++f) n += !d.v_is_id(f);
  return n;
}

}  // namespace

TEST_CASE("grids and boxtimes") {
  FinDoubleCategory g00 = grid(0, 0);
  CHECK(g00.num_objects() == 1);
  CHECK(g00.num_h() == 1);
  CHECK(g00.num_v() == 1);
  CHECK(g00.num_s() == 1);
  FinDoubleCategory g10 = grid(1, 0);
  CHECK(g10.num_objects() == 2);
  CHECK(nontrivial_h(g10) == 1);
  CHECK(nontrivial_v(g10) == 0);
  CHECK(g10.num_s() == 3);  // identity squares on each h-arrow
  CHECK(grid(1, 1).num_s() == 9);
  CHECK(validate_double(boxtimes(chain(1), chain(1))).ok());
  CHECK(boxtimes(chain(2), chain(1)) == grid(2, 1));
  CHECK(nontrivial_v(boxtimes(chain(3), discrete({"*"}))) == 0);
  auto g11 = share(grid(1, 1));
  CHECK(nerve_eval(g11, 1, 1).size() == count_monotone(1, 1) * count_monotone(1, 1));
  CHECK(nerve_eval(g11, 1, 1).size() == 9);
  CHECK(nerve_eval(g11, 0, 0).size() == 4);
}

TEST_CASE("nerve of a grid counts pairs of monotone maps") {
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      auto g = share(grid(m, n));
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
          CHECK(nerve_eval(g, a, b).size() == count_monotone(a, m) * count_monotone(b, n));
    }
}

TEST_CASE("arrow and twisted shapes satisfy their mapping properties") {
  for (int n = 0; n <= 3; ++n) {
    auto ar = share(arrow_double(n));
    auto tw = share(twisted_double(n));
    CHECK(validate_double(*ar).ok());
    CHECK(validate_double(*tw).ok());
    CHECK(is_gaunt(*ar));
    CHECK(ar->num_objects() == order_pairs(n));
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q) {
        CHECK(nerve_eval(ar, p, q).size() == join_count(n, p, q));
        CHECK(nerve_eval(ar, p, q).size() == binom(n + p + q + 2, p + q + 2));
        CHECK(nerve_eval(tw, p, q).size() == join_count(n, p, q));
      }
  }
  CHECK(arrow_double(1).num_objects() == 3);
  CHECK(arrow_double(2).num_objects() == 6);
  FinDoubleCategory tw0 = twisted_double(0);
  CHECK(tw0.num_objects() == 1);
  CHECK(tw0.num_h() == 1);
  CHECK(tw0.num_v() == 1);
  CHECK(tw0.num_s() == 1);
  // v-arrows of Tw point from larger to smaller first coordinate.
  FinDoubleCategory ar2 = arrow_double(2), tw2 = twisted_double(2);
  CHECK(validate_double_functor(pi_hor(2)).ok());
  CHECK(validate_double_functor(pi_vert(2)).ok());
  DoubleFunctor pv = pi_vert(2);
  for (int v = 0; v < ar2.num_v(); ++v) {
    if (ar2.v_is_id(v)) continue;
    int a = pv.ob[ar2.v_src[v]], b = pv.ob[ar2.v_tgt[v]];
    CHECK(a < b);
  }
  for (int v = 0; v < tw2.num_v(); ++v) CHECK(tw2.v_src[v] == ar2.v_tgt[v]);
}

TEST_CASE("arrow projections read off the coordinates") {
  for (int n = 0; n <= 3; ++n) {
    FinDoubleCategory ar = arrow_double(n);
    DoubleFunctor h = pi_hor(n), v = pi_vert(n);
    // (i, j) -> j and (i, j) -> i; pairs are listed with i <= j.
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < ar.num_objects(); ++k) pairs.push_back({v.ob[k], h.ob[k]});
    for (auto [i, j] : pairs) CHECK(i <= j);
    std::sort(pairs.begin(), pairs.end());
    CHECK(std::unique(pairs.begin(), pairs.end()) == pairs.end());
  }
}

TEST_CASE("involutions") {
  std::mt19937 rng(21);
  for (int t = 0; t < 10; ++t) {
    FinCategory c = gen_poset(rng, 1 + t % 3), d = gen_poset(rng, 1 + (t + 1) % 3);
    FinDoubleCategory b = boxtimes(c, d);
    CHECK(op(op(b, 1), 1) == b);
    CHECK(op(op(b, 2), 2) == b);
    CHECK(reverse(reverse(b)) == b);
    FinDoubleCategory r = reverse(b), e = boxtimes(d, c);
    CHECK(r.num_objects() == e.num_objects());
    CHECK(r.num_h() == e.num_h());
    CHECK(r.num_v() == e.num_v());
    CHECK(r.num_s() == e.num_s());
    CHECK(find_isomorphism(horizontal_category(r), horizontal_category(e)).has_value());
    CHECK(find_isomorphism(vertical_category(r), vertical_category(e)).has_value());
    for (int a = 0; a <= 1; ++a)
      for (int bb = 0; bb <= 1; ++bb)
        CHECK(nerve_eval(share(r), a, bb).size() == nerve_eval(share(e), a, bb).size());
    CHECK(validate_double(op(b, 1)).ok());
    CHECK(validate_double(op(b, 2)).ok());
  }
  for (auto& e : small_corpus()) {
    CHECK(reverse(reverse(*e.p.source)) == *e.p.source);
    CHECK(op(op(*e.p.source, 2), 2) == *e.p.source);
  }
}

TEST_CASE("gauntness") {
  CHECK(is_gaunt(grid(2, 3)));
  CHECK_FALSE(is_gaunt(boxtimes(iso_pair(), chain(0))));
  CHECK_FALSE(is_gaunt(boxtimes(chain(0), iso_pair())));
  for (int n = 0; n <= 3; ++n) CHECK(is_gaunt(arrow_double(n)));
}

TEST_CASE("validator catches a bad square boundary") {
  FinDoubleCategory d = grid(1, 1);
  int bad = -1;
  for (int s = 0; s < d.num_s(); ++s)
    if (!d.h_is_id(d.s_top[s])) {
      bad = s;
      break;
    }
  REQUIRE(bad >= 0);
  d.s_top[bad] = d.h_id[d.h_src[d.s_top[bad]]];
  Report r = validate_double(d);
  REQUIRE_FALSE(r.ok());
  bool named = false;
  for (auto& v : r.violations) named = named || v.witness.find(d.s_names[bad]) != std::string::npos;
  CHECK(named);
}

TEST_CASE("strict Segal identities") {
  for (auto& e : small_corpus()) {
    for (auto [m, n] : {std::pair{2, 0}, {0, 2}, {2, 1}, {1, 2}}) {
      SegalReport s = segal_check(e.p.source, m, n);
      CHECK_MESSAGE(s.ok, e.name << " " << s.detail);
    }
  }
  for (int n = 0; n <= 2; ++n) CHECK(segal_check(share(arrow_double(n)), 2, 2).ok);
}

TEST_CASE("nerve at (0, 0) lists objects") {
  for (auto& e : small_corpus()) CHECK(nerve_eval(e.p.source, 0, 0).size() == static_cast<std::size_t>(e.p.source->num_objects()));
}

TEST_CASE("enumeration cap is enforced") {
  auto d = share(grid(3, 3));
  CHECK_THROWS_AS(nerve_eval(d, 2, 2, 5), ResourceLimit);
}

TEST_CASE("pullbacks are strict") {
  std::mt19937 rng(22);
  for (auto& e : small_corpus()) {
    auto elems = nerve_eval(e.p.target, 1, 1);
    const DoubleFunctor& g = elems[rng() % elems.size()];
    Pullback pb = pullback(e.p, g);
    CHECK(validate_double(*pb.total).ok());
    CHECK(validate_double_functor(pb.projection).ok());
    CHECK(validate_double_functor(pb.to_source).ok());
    CHECK(compose(e.p, pb.to_source) == compose(g, pb.projection));
  }
}

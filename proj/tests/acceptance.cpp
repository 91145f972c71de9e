// Acceptance binary: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string note;
  std::ostringstream failures;
  int failure_count = 0;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failure_count++ < 5) failures << " [" << what << "]";
  }
};

int failed = 0;

void report(int id, const std::string& title, Outcome& o, Clock::time_point start, double budget = 0) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget > 0 && secs > budget) o.require(false, "took " + std::to_string(secs) + " s, budget " + std::to_string(budget) + " s");
  std::printf("%s %d %s (%.1f s)%s%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.note.empty() ? "" : ": ", o.note.c_str(), o.failures.str().c_str());
  std::fflush(stdout);
  if (!o.ok) ++failed;
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = generate_corpus({1, 200, 6, 3});
  return c;
}

void reflection_soundness() {
  const auto start = Clock::now();
  Outcome o;
  int n = 0;
  for (auto& e : corpus()) {
    o.require(e.p.target->num_objects() <= 6, e.name + ": base too large");
    o.require(is_left_cart_fibration(e.p).ok, e.name + ": input not certified");
    ReflectionCertificate c = certify_reflection(reflect_perp(e.p));
    o.require(c.ok(), e.name + ": " + c.output.failure);
    ++n;
  }
  o.require(n >= 200, "corpus has " + std::to_string(n) + " entries");
  o.note = std::to_string(n) + " reflections certified as (cocart, right)";
  report(1, "reflection soundness", o, start, 60);
}

void fiber_swap_check() {
  const auto start = Clock::now();
  Outcome o;
  int checks = 0;
  for (auto& e : corpus()) {
    Reflection r = reflect_perp(e.p);
    for (int c = 0; c < e.p.target->num_objects(); ++c) {
      FiberSwapResult s = fiber_swap(r, c);
      o.require(s.ok, e.name + " at " + std::to_string(c) + ": " + s.detail);
      // Independent of fiber_swap: search an isomorphism between the two fibers.
      o.require(find_isomorphism(horizontal_fiber(r.q, c).fiber, fiber(e.p, c).fiber).has_value(),
                e.name + " at " + std::to_string(c) + ": fibers not isomorphic");
      ++checks;
    }
  }
  o.note = std::to_string(checks) + " base objects";
  report(2, "fiber swap", o, start);
}

void round_trip() {
  const auto start = Clock::now();
  Outcome o;
  int n = 0;
  for (auto& e : corpus()) {
    if (!e.gaunt) continue;
    RoundtripResult rt = roundtrip_iso(e.p, vertical_cleavage(e.p));
    o.require(rt.status == RoundtripResult::Status::Isomorphism && rt.comparison.has_value(), e.name + ": " + rt.detail);
    if (rt.comparison) {
      o.require(compose(rt.target_projection, *rt.comparison) == e.p, e.name + ": not over the base");
      o.require(is_strong_map(*rt.comparison, identity_double_functor(e.p.target), e.p, rt.target_projection).strong,
                e.name + ": comparison not strong");
    }
    ++n;
  }
  o.note = std::to_string(n) + " gaunt entries";
  report(3, "round trip", o, start, 120);
}

void kernel_agreement_check() {
  const auto start = Clock::now();
  Outcome o;
  int n = 0;
  for (auto& e : corpus()) {
    for (int m = 0; m <= 2; ++m)
      for (int k = 0; k <= 2; ++k) {
        DegreeComparison d = kernel_agreement(e.p, m, k);
        o.require(d.bijective && d.map.size() == d.domain,
                  e.name + " (" + std::to_string(m) + "," + std::to_string(k) + "): " + d.detail);
      }
    ++n;
  }
  o.require(n >= 50, "only " + std::to_string(n) + " entries");
  o.note = std::to_string(n) + " entries, (m, n) <= (2, 2)";
  report(4, "kernel agreement", o, start);
}

void zig_zag() {
  const auto start = Clock::now();
  Outcome o;
  int n = 0;
  for (auto& e : corpus()) {
    if (!e.gaunt) continue;
    const std::size_t objects = e.p.source->num_objects();
    o.require(psi_T_eval(e.p, 0, 0).size() == objects, e.name + ": psi_T(0, 0) is not the objects");
    for (int m = 0; m <= 3; ++m)
      for (int k = 0; k <= 3; ++k)
        for (DegreeComparison d : {zig_zeta(e.p, m, k), zig_eta(e.p, m, k), zig_theta(e.p, m, k)})
          o.require(d.bijective, e.name + " " + d.name + " (" + std::to_string(m) + "," + std::to_string(k) + "): " + d.detail);
    ++n;
  }
  TOracleResult t = t_oracle(0, 0, 0, 0);
  o.require(t.classes == 1 && t.stable, "T[0, 0] is not a point");
  o.note = std::to_string(n) + " gaunt entries, (m, n) <= (3, 3)";
  report(5, "zig-zag", o, start);
}

void one_categorical() {
  const auto start = Clock::now();
  Outcome o;
  int n = 0;
  for (auto& e : corpus()) {
    if (!e.functor) continue;
    const CatValuedFunctor& F = *e.functor;
    Unstraightening un = unstraighten_1(F);
    auto sf = split_failure(un.projection, un.cleavage);
    o.require(!sf, e.name + ": cleavage not split");
    if (sf) continue;
    o.require(same_functor(straighten_1(un.projection, un.cleavage), F), e.name + ": St(Un F) != F");
    // Un(St(p)) for p = Un(F) with its split cleavage.
    Unstraightening again = unstraighten_1(straighten_1(un.projection, un.cleavage));
    FinFunctor cmp = unstraighten_comparison(un.projection, un.cleavage, again);
    o.require(is_isomorphism(cmp) && compose(again.projection, cmp).on_morphisms == un.projection.on_morphisms,
              e.name + ": Un(St p) not isomorphic over the base");
    UnReflectReport r = check_un_equals_reflect(F);
    o.require(r.ok, e.name + ": " + r.detail);
    ++n;
  }
  o.require(n > 0, "no category-valued entries");
  o.note = std::to_string(n) + " functors";
  report(6, "1-categorical (un)straightening", o, start);
}

void lax_example() {
  const auto start = Clock::now();
  Outcome o;
  auto cell = share(two_cell());
  auto lax = share(lax_triangle());
  TwoFunctor p = lax_triangle_projection(lax, cell);
  TwoFibrationCertificate c = is_1cocartesian_fibration(p);
  o.require(c.ok, "lax triangle: " + c.failure);
  TwoUnstraightening un = unstraighten_2(representable(cell, 0));
  o.require(un.certificate.ok, "unstraightening: " + un.certificate.failure);
  o.require(find_two_isomorphism(un.projection.source, lax, &un.projection, &p).has_value(),
            "Un(representable) is not the lax triangle");
  PipelineResult pipe = unstraighten_2_pipeline(representable(cell, 0));
  o.require(pipe.projection && find_two_isomorphism(un.projection.source, pipe.projection->source, &un.projection,
                                                    &*pipe.projection),
            "pipeline disagrees: " + pipe.detail);
  report(7, "lax triangle over the free 2-cell", o, start);
}

void duality_and_closure() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937 rng(8);
  int n = 0;
  for (auto& e : corpus()) {
    // Functor level, on both parts of p, against the horn-filler oracle.
    for (const FinFunctor& f : {horizontal_part(e.p), vertical_part(e.p)}) {
      FinFunctor fo = opposite(f);
      o.require(is_cartesian_fibration(f) == is_cocartesian_fibration(fo), e.name + ": functor duality");
      o.require(is_cocartesian_fibration(f) == is_cartesian_fibration(fo), e.name + ": functor duality");
      o.require(is_left_fibration(f) == is_right_fibration(fo), e.name + ": left/right duality");
      o.require(is_cartesian_fibration(f) == horn_cartesian_fibration(f), e.name + ": horn oracle");
      for (int a = 0; a < f.source->num_morphisms(); ++a)
        o.require(is_cartesian_arrow(f, a) == horn_cartesian(f, a), e.name + ": arrow oracle");
    }
    // Double level, under conjugation.
    DoubleFunctor cj = conjugate(e.p);
    const bool lc = is_left_cart_fibration(e.p).ok;
    o.require(lc, e.name + ": not certified");
    o.require(is_cocart_right_fibration(cj).ok == lc, e.name + ": conjugate not (cocart, right)");
    o.require(is_left_cart_fibration(cj).ok == is_cocart_right_fibration(e.p).ok, e.name + ": conjugation");
    // Base change along random nerve elements.
    for (auto [m, k] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
      auto elems = nerve_eval(e.p.target, m, k);
      if (elems.empty()) continue;
      Pullback pb = pullback(e.p, elems[rng() % elems.size()]);
      o.require(is_left_cart_fibration(pb.projection).ok, e.name + ": base change");
    }
    // Composition with a product projection.
    auto a = share(boxtimes(chain(0), chain(1 + rng() % 2)));
    auto prod = share(product(*e.p.source, *a));
    DoubleFunctor pr = product_projection(e.p.source, a, prod, 0);
    o.require(is_left_cart_fibration(pr).ok && is_left_cart_fibration(compose(e.p, pr)).ok, e.name + ": composite");
    // Base change along an unstraightened discrete family over the base.
    if (e.functor) {
      const CategoryPtr C = e.functor->base;
      Unstraightening ug = unstraighten_1(constant_functor(C, share(discrete({"u", "v"}))));
      auto pt = share(chain(0));
      auto src = share(boxtimes(*ug.projection.source, *pt));
      DoubleFunctor g = boxtimes(ug.projection, identity_functor(pt), src, e.p.target);
      Pullback pb = pullback(e.p, g);
      o.require(is_left_cart_fibration(pb.projection).ok, e.name + ": base change along a discrete family");
      o.require(is_left_cart_fibration(compose(g, pb.projection)).ok == is_left_cart_fibration(compose(e.p, pb.to_source)).ok,
                e.name + ": pullback square");
    }
    ++n;
  }
  o.note = std::to_string(n) + " entries";
  report(8, "duality and closure", o, start);
}

void counts() {
  const auto start = Clock::now();
  Outcome o;
  for (int n = 0; n <= 4; ++n) {
    // Oracle: C(n+2, 2) by formula and by monotone maps [1] -> [n].
    o.require(binom(n + 2, 2) == count_monotone(1, n), "oracles disagree at " + std::to_string(n));
    o.require(static_cast<std::uint64_t>(arrow_double(n).num_objects()) == binom(n + 2, 2),
              "objects of Ar[" + std::to_string(n) + "]");
  }
  for (int n = 0; n <= 3; ++n) {
    auto ar = share(arrow_double(n));
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; q <= 3; ++q)
        o.require(nerve_eval(ar, p, q).size() == join_count(n, p, q),
                  "nerve of Ar[" + std::to_string(n) + "] at (" + std::to_string(p) + "," + std::to_string(q) + ")");
  }
  report(9, "combinatorial counts", o, start);
}

}  // namespace

// With no arguments runs every criterion; otherwise only the listed ones.
int main(int argc, char** argv) {
  const std::vector<void (*)()> criteria{reflection_soundness, fiber_swap_check, round_trip,
                                         kernel_agreement_check, zig_zag, one_categorical,
                                         lax_example, duality_and_closure, counts};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty())
    for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) selected.push_back(id);
  const auto start = Clock::now();
  corpus();
  std::printf("corpus: %zu entries generated in %.1f s\n", corpus().size(),
              std::chrono::duration<double>(Clock::now() - start).count());
  for (int id : selected) criteria[id - 1]();
  std::printf("%d of %zu criteria failed\n", failed, selected.size());
  return failed == 0 ? 0 : 1;
}

#include <doctest.h>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;

namespace {

std::vector<std::vector<int>> monotone_maps(int a, int b) {
  std::vector<std::vector<int>> r;
  std::vector<int> cur;
  std::function<void(int)> walk = [&](int lo) {
    if (static_cast<int>(cur.size()) == a + 1) {
      r.push_back(cur);
      return;
    }
    for (int v = lo; v <= b; ++v) {
      cur.push_back(v);
      walk(v);
      cur.pop_back();
    }
  };
  walk(0);
  return r;
}

// grid(m2, n2) -> grid(m, n) induced by the two monotone maps.
DoubleFunctor grid_map(DoublePtr src, DoublePtr tgt, int m2, int n2, int n, const std::vector<int>& h,
                       const std::vector<int>& v) {
  std::vector<int> ob;
  for (int i = 0; i <= m2; ++i)
    for (int j = 0; j <= n2; ++j) ob.push_back(h[i] * (n + 1) + v[j]);
  auto f = thin_extend(src, tgt, ThinIndex(*tgt), ob);
  REQUIRE(f);
  return *f;
}

std::vector<Kernel> all_kernels() { return {kernel_K(), kernel_Kprime(), kernel_L(), kernel_A(), kernel_B()}; }

}  // namespace

TEST_CASE("kernel shapes at low degrees") {
  for (const Kernel& k : {kernel_K(), kernel_A(), kernel_B()}) {
    const KernelCell& c = k.cell(0, 0);
    CHECK(c.shape->num_objects() == 1);
    CHECK(c.shape->num_s() == 1);
  }
  CHECK(kernel_K().cell(1, 0).shape->num_objects() == static_cast<int>(count_monotone(1, 1)));
  CHECK(kernel_K().cell(1, 0).shape->num_objects() == 3);
  for (const Kernel& k : all_kernels())
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) {
        const KernelCell& c = k.cell(m, n);
        CHECK(validate_double(*c.shape).ok());
        CHECK(validate_double_functor(c.structure).ok());
        MarkedDoubleCategory mk{c.shape, k.direction, c.marked};
        CHECK(validate_marked(mk).ok());
      }
}

TEST_CASE("extra markings contain the base markings") {
  for (const Kernel& k : all_kernels()) {
    const KernelCell& c = k.cell(k.extra_m, k.extra_n);
    auto extra = k.extra_marked();
    REQUIRE(extra.size() == c.marked.size());
    for (std::size_t i = 0; i < extra.size(); ++i)
      if (c.marked[i]) CHECK(extra[i]);
  }
  // K: exactly one further arrow, 01 => 11.
  const KernelCell& k10 = kernel_K().cell(1, 0);
  auto e = kernel_K().extra_marked();
  int added = 0;
  for (std::size_t v = 0; v < e.size(); ++v)
    if (e[v] && !k10.marked[v]) {
      ++added;
      CHECK(k10.coords[k10.shape->v_src[v]] == std::vector<int>{0, 1, 0});
      CHECK(k10.coords[k10.shape->v_tgt[v]] == std::vector<int>{1, 1, 0});
    }
  CHECK(added == 1);
  for (bool b : kernel_A().extra_marked()) CHECK(b);
  for (bool b : kernel_B().extra_marked()) CHECK(b);
}

TEST_CASE("B marking families") {
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      const KernelCell& c = kernel_B().cell(m, n);
      const FinDoubleCategory& S = *c.shape;
      for (int v = 0; v < S.num_v(); ++v) {
        auto& a = c.coords[S.v_src[v]];
        auto& b = c.coords[S.v_tgt[v]];
        // (aa, ik) -> (aa, jk)
        bool first = a[0] == a[1] && b[0] == a[0] && b[1] == a[1] && a[3] == b[3];
        // all verticals in Ar[m] x {ii}
        bool second = a[2] == a[3] && b[2] == a[2] && b[3] == a[3];
        CHECK(c.marked[v] == (first || second || S.v_is_id(v)));
      }
    }
}

TEST_CASE("kernels are natural in both directions") {
  for (const Kernel& k : all_kernels())
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n)
        for (int m2 = 0; m2 <= 2; ++m2)
          for (int n2 = 0; n2 <= 1; ++n2) {
            const KernelCell& big = k.cell(m, n);
            const KernelCell& small = k.cell(m2, n2);
            for (auto& h : monotone_maps(m2, m))
              for (auto& v : monotone_maps(n2, n)) {
                DoubleFunctor a = k.act(m, n, h, v);
                CHECK(validate_double_functor(a).ok());
                DoubleFunctor g = grid_map(small.structure.target, big.structure.target, m2, n2, n, h, v);
                CHECK(compose(big.structure, a) == compose(g, small.structure));
                const auto& arrows = k.direction == MarkDirection::Vertical ? a.v : a.h;
                for (std::size_t i = 0; i < small.marked.size(); ++i)
                  if (small.marked[i]) CHECK(big.marked[arrows[i]]);
              }
          }
}

TEST_CASE("kernel action is functorial") {
  const Kernel k = kernel_K();
  for (auto& h1 : monotone_maps(1, 2))
    for (auto& h2 : monotone_maps(2, 2)) {
      std::vector<int> h;
      for (int x : h1) h.push_back(h2[x]);
      DoubleFunctor a = compose(k.act(2, 1, h2, {0, 1}), k.act(2, 1, h1, {0, 1}));
      CHECK(a == k.act(2, 1, h, {0, 1}));
    }
}

TEST_CASE("low degree evaluations") {
  for (auto& e : small_corpus()) {
    const std::size_t objects = e.p.source->num_objects();
    CHECK(psi_eval(kernel_K(), e.p, 0, 0).size() == objects);
    CHECK(psi_eval(kernel_A(), e.p, 0, 0).size() == objects);
    CHECK(psi_T_eval(e.p, 0, 0).size() == objects);
    DegreeComparison z = zig_zeta(e.p, 0, 0);
    CHECK(z.bijective);
    CHECK(z.domain == objects);
    for (std::size_t i = 0; i < z.map.size(); ++i) CHECK(z.map[i] == static_cast<int>(i));
  }
  TOracleResult t = t_oracle(0, 0, 0, 0);
  CHECK(t.classes == 1);
  CHECK(t.stable);
}

TEST_CASE("comparisons on a few corpus entries") {
  const auto& c = small_corpus();
  for (std::size_t i = 0; i < c.size(); i += 8)
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 1; ++n) {
        for (DegreeComparison d : {kernel_agreement(c[i].p, m, n), zig_zeta(c[i].p, m, n), zig_eta(c[i].p, m, n),
                                   zig_theta(c[i].p, m, n), psi_T_agreement(c[i].p, m, n)})
          CHECK_MESSAGE(d.bijective, c[i].name << " " << d.name << " (" << m << "," << n << "): " << d.detail);
      }
}

TEST_CASE("identity fibrations evaluate to the base nerve") {
  for (FinDoubleCategory d : {grid(1, 1), arrow_double(1)}) {
    auto dp = share(d);
    DoubleFunctor id = identity_double_functor(dp);
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 1; ++n) {
        CHECK(psi_T_eval(id, m, n).size() == nerve_eval(dp, m, n).size());
        CHECK(psi_eval(kernel_K(), id, m, n).size() == nerve_eval(dp, m, n).size());
      }
  }
}

TEST_CASE("evaluation commutes with base change") {
  std::mt19937 rng(41);
  const auto& c = small_corpus();
  for (std::size_t i = 0; i < c.size(); i += 5) {
    const DoubleFunctor& p = c[i].p;
    auto elems = nerve_eval(p.target, 1, 0);
    const DoubleFunctor& g = elems[rng() % elems.size()];
    Pullback pb = pullback(p, g);
    for (int m = 0; m <= 1; ++m)
      for (int n = 0; n <= 1; ++n) {
        const KernelCell& kc = kernel_K().cell(m, n);
        auto here = psi_eval(kernel_K(), p, m, n);
        std::size_t expected = 0;
        for (auto& u : nerve_eval(g.source, m, n)) {
          DoubleFunctor down = compose(compose(g, u), kc.structure);
          for (auto& x : here) expected += compose(p, x) == down;
        }
        CHECK(psi_eval(kernel_K(), pb.projection, m, n).size() == expected);
      }
  }
}

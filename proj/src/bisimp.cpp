#include "dblcat/bisimp.hpp"

#include <algorithm>
#include <numeric>

namespace dblcat {

namespace {

std::vector<std::pair<int, int>> arrow_coords(int n) {
  std::vector<std::pair<int, int>> r;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) r.push_back({i, j});
  return r;
}

int grid_object(int n, int i, int k) { return i * (n + 1) + k; }

// Finishes a cell: coordinate index, thin index, structure map from
// per-object grid coordinates, marking by a predicate on arrow endpoints plus
// identities.
KernelCell finish_cell(int m, int n, FinDoubleCategory shape, std::vector<std::vector<int>> coords,
                       const std::function<std::pair<int, int>(const std::vector<int>&)>& base,
                       MarkDirection dir,
                       const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& mark) {
  KernelCell c;
  c.m = m;
  c.n = n;
  c.shape = std::make_shared<const FinDoubleCategory>(std::move(shape));
  c.coords = std::move(coords);
  for (int x = 0; x < static_cast<int>(c.coords.size()); ++x) c.by_coords[c.coords[x]] = x;
  c.index = std::make_shared<const ThinIndex>(*c.shape);
  auto g = std::make_shared<const FinDoubleCategory>(grid(m, n));
  std::vector<int> ob;
  for (auto& xs : c.coords) {
    auto [i, k] = base(xs);
    ob.push_back(grid_object(n, i, k));
  }
  auto st = thin_extend(c.shape, g, ThinIndex(*g), ob);
  if (!st) throw ContractError("kernel structure map does not extend");
  c.structure = *st;
  const FinDoubleCategory& S = *c.shape;
  if (dir == MarkDirection::Vertical) {
    for (int v = 0; v < S.num_v(); ++v)
      c.marked.push_back(S.v_is_id(v) || mark(c.coords[S.v_src[v]], c.coords[S.v_tgt[v]]));
  } else {
    for (int h = 0; h < S.num_h(); ++h)
      c.marked.push_back(S.h_is_id(h) || mark(c.coords[S.h_src[h]], c.coords[S.h_tgt[h]]));
  }
  return c;
}

// Coordinates of product(a, b) objects from the factors' coordinates.
std::vector<std::vector<int>> product_coords(const std::vector<std::vector<int>>& a,
                                             const std::vector<std::vector<int>>& b) {
  std::vector<std::vector<int>> r;
  for (auto& x : a)
    for (auto& y : b) {
      std::vector<int> z = x;
      z.insert(z.end(), y.begin(), y.end());
      r.push_back(std::move(z));
    }
  return r;
}

std::vector<std::vector<int>> ar_coords(int m) {
  std::vector<std::vector<int>> r;
  for (auto [i, j] : arrow_coords(m)) r.push_back({i, j});
  return r;
}

std::vector<std::vector<int>> line_coords(int n) {
  std::vector<std::vector<int>> r;
  for (int k = 0; k <= n; ++k) r.push_back({k});
  return r;
}

bool same(const std::vector<int>& a, const std::vector<int>& b, std::initializer_list<int> ix) {
  for (int i : ix)
    if (a[i] != b[i]) return false;
  return true;
}

void check_window(const Kernel& k, int m, int n) {
  if (m < 0 || n < 0 || m > k.max_m || n > k.max_n)
    throw ContractError("kernel " + k.name + ": degree (" + std::to_string(m) + "," + std::to_string(n) +
                        ") outside the window");
}

}  // namespace

const KernelCell& Kernel::cell(int m, int n) const {
  check_window(*this, m, n);
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = cache_->find({m, n});
  if (it == cache_->end()) it = cache_->emplace(std::make_pair(m, n), build(m, n)).first;
  return it->second;
}

std::vector<bool> Kernel::extra_marked() const {
  const KernelCell& c = cell(extra_m, extra_n);
  std::vector<bool> e = extra(c);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = e[i] || c.marked[i];
  return e;
}

DoubleFunctor Kernel::act(int m, int n, const std::vector<int>& hmap, const std::vector<int>& vmap) const {
  const int m2 = static_cast<int>(hmap.size()) - 1, n2 = static_cast<int>(vmap.size()) - 1;
  const KernelCell& src = cell(m2, n2);
  const KernelCell& tgt = cell(m, n);
  for (std::size_t i = 0; i + 1 < hmap.size(); ++i)
    if (hmap[i] > hmap[i + 1]) throw ContractError("Kernel::act: horizontal map not monotone");
  for (std::size_t i = 0; i + 1 < vmap.size(); ++i)
    if (vmap[i] > vmap[i + 1]) throw ContractError("Kernel::act: vertical map not monotone");
  std::vector<int> ob;
  for (auto& xs : src.coords) {
    std::vector<int> ys(xs.size());
    for (std::size_t c = 0; c < xs.size(); ++c) ys[c] = coord_horizontal[c] ? hmap.at(xs[c]) : vmap.at(xs[c]);
    auto it = tgt.by_coords.find(ys);
    if (it == tgt.by_coords.end()) throw ContractError("Kernel::act: object has no image");
    ob.push_back(it->second);
  }
  auto f = thin_extend(src.shape, tgt.shape, *tgt.index, ob);
  if (!f) throw ContractError("Kernel::act: object map does not extend");
  return *f;
}

namespace {
Kernel make_kernel_K() {
  Kernel k;
  k.name = "K";
  k.direction = MarkDirection::Vertical;
  k.extra_m = 1;
  k.extra_n = 0;
  k.coord_horizontal = {true, true, false};
  k.build = [](int m, int n) {
    return finish_cell(
        m, n, product(arrow_double(m), grid(0, n)), product_coords(ar_coords(m), line_coords(n)),
        [](const std::vector<int>& x) { return std::make_pair(x[1], x[2]); }, MarkDirection::Vertical,
        [](const std::vector<int>& a, const std::vector<int>& b) { return same(a, b, {0, 1}) && a[0] == a[1]; });
  };
  k.extra = [](const KernelCell& c) {
    const FinDoubleCategory& S = *c.shape;
    std::vector<bool> e(S.num_v(), false);
    for (int v = 0; v < S.num_v(); ++v)
      if (c.coords[S.v_src[v]] == std::vector<int>{0, 1, 0} && c.coords[S.v_tgt[v]] == std::vector<int>{1, 1, 0})
        e[v] = true;
    return e;
  };
  return k;
}
}  // namespace

Kernel kernel_K() {
  static const Kernel k = make_kernel_K();
  return k;
}

namespace {
Kernel make_kernel_A() {
  Kernel k = make_kernel_K();
  k.name = "A";
  k.extra_m = 0;
  k.extra_n = 1;
  k.build = [](int m, int n) {
    return finish_cell(
        m, n, product(arrow_double(m), grid(0, n)), product_coords(ar_coords(m), line_coords(n)),
        [](const std::vector<int>& x) { return std::make_pair(x[1], x[2]); }, MarkDirection::Vertical,
        [](const std::vector<int>& a, const std::vector<int>& b) { return a[2] == b[2]; });
  };
  k.extra = [](const KernelCell& c) { return std::vector<bool>(c.shape->num_v(), true); };
  return k;
}
}  // namespace

Kernel kernel_A() {
  static const Kernel k = make_kernel_A();
  return k;
}

namespace {
Kernel make_kernel_B() {
  Kernel k;
  k.name = "B";
  k.direction = MarkDirection::Vertical;
  k.extra_m = 0;
  k.extra_n = 1;
  k.coord_horizontal = {true, true, false, false};
  k.build = [](int m, int n) {
    FinCategory ch = chain(n);
    std::vector<std::vector<int>> fun;
    for (int f = 0; f < ch.num_morphisms(); ++f) fun.push_back({ch.src[f], ch.tgt[f]});
    return finish_cell(
        m, n, product(arrow_double(m), boxtimes(chain(0), arrow_category(ch))), product_coords(ar_coords(m), fun),
        [](const std::vector<int>& x) { return std::make_pair(x[1], x[2]); }, MarkDirection::Vertical,
        [](const std::vector<int>& a, const std::vector<int>& b) {
          // {aa} x (ik -> jk), and Ar[m] x {ii}.
          return (same(a, b, {0, 1, 3}) && a[0] == a[1]) || (same(a, b, {2, 3}) && a[2] == a[3]);
        });
  };
  k.extra = [](const KernelCell& c) { return std::vector<bool>(c.shape->num_v(), true); };
  return k;
}
}  // namespace

Kernel kernel_B() {
  static const Kernel k = make_kernel_B();
  return k;
}

namespace {
Kernel make_kernel_Kprime() {
  Kernel k;
  k.name = "K'";
  k.direction = MarkDirection::Horizontal;
  k.extra_m = 0;
  k.extra_n = 1;
  k.coord_horizontal = {true, false, false};
  k.build = [](int m, int n) {
    return finish_cell(
        m, n, product(grid(m, 0), arrow_double(n)), product_coords(line_coords(m), ar_coords(n)),
        [](const std::vector<int>& x) { return std::make_pair(x[0], x[1]); }, MarkDirection::Horizontal,
        [](const std::vector<int>& a, const std::vector<int>& b) { return same(a, b, {1, 2}) && a[1] == a[2]; });
  };
  k.extra = [](const KernelCell& c) { return std::vector<bool>(c.shape->num_h(), true); };
  return k;
}
}  // namespace

Kernel kernel_Kprime() {
  static const Kernel k = make_kernel_Kprime();
  return k;
}

namespace {
Kernel make_kernel_L() {
  Kernel k;
  k.name = "L";
  k.direction = MarkDirection::Horizontal;
  k.extra_m = 0;
  k.extra_n = 1;
  k.coord_horizontal = {true, false, false};
  k.build = [](int m, int n) {
    return finish_cell(
        m, n, product(grid(m, 0), op(reverse(arrow_double(n)), 1)), product_coords(line_coords(m), ar_coords(n)),
        [](const std::vector<int>& x) { return std::make_pair(x[0], x[2]); }, MarkDirection::Horizontal,
        [](const std::vector<int>& a, const std::vector<int>& b) { return same(a, b, {1, 2}) && a[1] == a[2]; });
  };
  k.extra = [](const KernelCell& c) { return std::vector<bool>(c.shape->num_h(), true); };
  return k;
}
}  // namespace

Kernel kernel_L() {
  static const Kernel k = make_kernel_L();
  return k;
}

MarkedDoubleCategory natural_marking(const DoubleFunctor& p, MarkDirection direction) {
  if (direction == MarkDirection::Vertical)
    return MarkedDoubleCategory{p.source, MarkDirection::Vertical, cartesian_arrows(vertical_part(p))};
  return mark_cocartesian_horizontals(p);
}

std::vector<DoubleFunctor> psi_eval(const Kernel& S, const DoubleFunctor& p, const MarkedDoubleCategory& marking,
                                    int m, int n, std::size_t cap) {
  if (marking.direction != S.direction)
    throw ContractError("psi_eval: marking direction does not match kernel " + S.name);
  const KernelCell& kc = S.cell(m, n);
  std::vector<DoubleFunctor> out;
  LiftProblem pr;
  pr.shape = kc.shape;
  pr.target = p.source;
  pr.p = &p;
  pr.shape_marked = &kc.marked;
  pr.target_marked = &marking.marked;
  pr.direction = S.direction;
  pr.cap = cap;
  const std::size_t limit = cap ? cap : default_cell_cap();
  for (const DoubleFunctor& alpha : nerve_eval(p.target, m, n, cap)) {
    DoubleFunctor g = compose(alpha, kc.structure);
    pr.base = &g;
    enumerate_lifts(pr, [&](const DoubleFunctor& f) {
      out.push_back(f);
      return true;
    });
    if (out.size() > limit) throw ResourceLimit("psi_eval: more than " + std::to_string(limit) + " elements");
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DoubleFunctor> psi_eval(const Kernel& S, const DoubleFunctor& p, int m, int n, std::size_t cap) {
  return psi_eval(S, p, natural_marking(p, S.direction), m, n, cap);
}

std::vector<bool> psi_marked(const Kernel& S, const MarkedDoubleCategory& marking,
                             const std::vector<DoubleFunctor>& elements) {
  std::vector<bool> extra = S.extra_marked();
  std::vector<bool> r;
  for (const DoubleFunctor& f : elements) {
    const std::vector<int>& img = S.direction == MarkDirection::Vertical ? f.v : f.h;
    if (img.size() != extra.size()) throw ContractError("psi_marked: element is not at the extra degree");
    bool ok = true;
    for (std::size_t a = 0; a < extra.size() && ok; ++a)
      if (extra[a] && !marking.marked[img[a]]) ok = false;
    r.push_back(ok);
  }
  return r;
}

namespace {

// Reads cells of Psi_perp(D) off a map F: X -> D, where X receives K[s, t]
// through ob(u, v, w) (object of X for the Ar coordinates (u, v) and row w).
struct KernelReader {
  const Reflection& e;
  const DoubleFunctor& f;
  const ThinIndex& tix;
  std::function<int(int, int, int)> ob;

  int object(int u, int w) const { return f.ob[ob(u, u, w)]; }
  int h(int u, int v, int w) const {
    int a = tix.h_arrow(ob(u, u, w), ob(u, v, w));
    int b = tix.v_arrow(ob(u, v, w), ob(v, v, w));
    if (a < 0 || b < 0) return -1;
    return e.find_h(f.h[a], f.v[b]);
  }
  int v(int u, int w, int w2) const {
    int a = tix.v_arrow(ob(u, u, w), ob(u, u, w2));
    return a < 0 ? -1 : e.find_v(f.v[a]);
  }
  int s(int u, int v, int w, int w2) const {
    int sq = tix.square(ob(u, u, w), ob(u, v, w), ob(u, u, w2), ob(u, v, w2));
    int bot = tix.v_arrow(ob(u, v, w2), ob(v, v, w2));
    int right = tix.v_arrow(ob(v, v, w), ob(v, v, w2));
    if (sq < 0 || bot < 0 || right < 0) return -1;
    return e.find_s(f.s[sq], f.v[bot], f.v[right]);
  }
};

int find_index(const std::vector<DoubleFunctor>& xs, const DoubleFunctor& f) {
  auto it = std::lower_bound(xs.begin(), xs.end(), f);
  return (it != xs.end() && *it == f) ? static_cast<int>(it - xs.begin()) : -1;
}

bool has_missing(const DoubleFunctor& f) {
  for (const auto* xs : {&f.ob, &f.h, &f.v, &f.s})
    for (int x : *xs)
      if (x < 0) return true;
  return false;
}

DegreeComparison compare_sets(std::string name, int m, int n, const std::vector<DoubleFunctor>& dom,
                              const std::vector<DoubleFunctor>& cod,
                              const std::function<DoubleFunctor(const DoubleFunctor&)>& map) {
  DegreeComparison r;
  r.name = std::move(name);
  r.m = m;
  r.n = n;
  r.domain = dom.size();
  r.codomain = cod.size();
  std::vector<bool> hit(cod.size(), false);
  bool ok = true;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    DoubleFunctor g = map(dom[i]);
    int k = has_missing(g) ? -1 : find_index(cod, g);
    r.map.push_back(k);
    if (k < 0) {
      if (ok) r.detail = "element " + std::to_string(i) + " has no image in the codomain";
      ok = false;
    } else if (hit[k]) {
      if (ok) r.detail = "elements collide at codomain element " + std::to_string(k);
      ok = false;
    } else {
      hit[k] = true;
    }
  }
  if (ok && dom.size() != cod.size()) {
    ok = false;
    r.detail = "injective but codomain is larger (" + std::to_string(dom.size()) + " vs " +
               std::to_string(cod.size()) + ")";
  }
  r.bijective = ok;
  if (ok) r.detail = "bijection on " + std::to_string(dom.size()) + " elements";
  return r;
}

DoubleFunctor conjugate_arrays(const DoubleFunctor& f, DoublePtr src, DoublePtr tgt) {
  return DoubleFunctor{std::move(src), std::move(tgt), f.ob, f.v, f.h, f.s};
}

}  // namespace

DoubleFunctor kernel_witness(const Reflection& e, const DoubleFunctor& f, int m, int n) {
  static const Kernel K = kernel_K();
  const KernelCell& kc = K.cell(m, n);
  KernelReader rd{e, f, *kc.index, [&](int u, int v, int w) { return kc.by_coords.at({u, v, w}); }};
  auto g = std::make_shared<const FinDoubleCategory>(grid(m, n));
  DoubleFunctor r{g, e.total, {}, {}, {}, {}};
  auto xy = [n](int x) { return std::make_pair(x / (n + 1), x % (n + 1)); };
  for (int x = 0; x < g->num_objects(); ++x) {
    auto [i, k] = xy(x);
    r.ob.push_back(rd.object(i, k));
  }
  for (int h = 0; h < g->num_h(); ++h) {
    auto [i, k] = xy(g->h_src[h]);
    r.h.push_back(rd.h(i, xy(g->h_tgt[h]).first, k));
  }
  for (int v = 0; v < g->num_v(); ++v) {
    auto [i, k] = xy(g->v_src[v]);
    r.v.push_back(rd.v(i, k, xy(g->v_tgt[v]).second));
  }
  for (int s = 0; s < g->num_s(); ++s) {
    auto [i, k] = xy(g->h_src[g->s_top[s]]);
    int j = xy(g->h_tgt[g->s_top[s]]).first;
    int l = xy(g->h_src[g->s_bot[s]]).second;
    r.s.push_back(rd.s(i, j, k, l));
  }
  return r;
}

DegreeComparison kernel_agreement(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  Reflection e = reflect_perp(p);
  auto dom = psi_eval(kernel_K(), p, m, n, cap);
  auto cod = nerve_eval(e.total, m, n, cap);
  return compare_sets("kernel K vs reflection", m, n, dom, cod,
                      [&](const DoubleFunctor& f) { return kernel_witness(e, f, m, n); });
}

DegreeComparison zig_zeta(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  const Kernel A = kernel_A();
  const KernelCell& ac = A.cell(m, n);
  auto dom = nerve_eval(p.source, m, n, cap);
  auto cod = psi_eval(A, p, m, n, cap);
  return compare_sets("zeta", m, n, dom, cod, [&](const DoubleFunctor& f) { return compose(f, ac.structure); });
}

DegreeComparison zig_eta(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  const Kernel A = kernel_A(), B = kernel_B();
  const KernelCell& ac = A.cell(m, n);
  const KernelCell& bc = B.cell(m, n);
  std::vector<int> ob;
  for (auto& x : ac.coords) ob.push_back(bc.by_coords.at({x[0], x[1], x[2], x[2]}));
  auto eta = thin_extend(ac.shape, bc.shape, *bc.index, ob);
  if (!eta) throw ContractError("zig_eta: constant-arrow inclusion does not extend");
  auto dom = psi_eval(B, p, m, n, cap);
  auto cod = psi_eval(A, p, m, n, cap);
  return compare_sets("eta", m, n, dom, cod, [&](const DoubleFunctor& f) { return compose(f, *eta); });
}

std::vector<DoubleFunctor> psi_T_eval(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  Reflection e = reflect_perp(p);
  return psi_eval(kernel_Kprime(), e.q, m, n, cap);
}

DegreeComparison zig_theta(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  Reflection e = reflect_perp(p);
  const Kernel B = kernel_B(), Kp = kernel_Kprime();
  const KernelCell& bc = B.cell(m, n);
  const KernelCell& kc = Kp.cell(m, n);
  auto dom = psi_eval(B, p, m, n, cap);
  auto cod = psi_eval(Kp, e.q, m, n, cap);
  const FinDoubleCategory& S = *kc.shape;
  // A cell of K' is given by alpha on [s], l on [s] (Ar codomain) and k on [t]
  // (Ar domain); it reads K[s, t] -> B[m, n], ((u, v), w) -> ((alpha u, alpha v), (k_w <= l_u)).
  auto reader = [&](const DoubleFunctor& f, std::vector<int> alpha, std::vector<int> k, std::vector<int> l) {
    return KernelReader{e, f, *bc.index, [&bc, alpha, k, l](int u, int v, int w) {
                          return bc.by_coords.at({alpha[u], alpha[v], k[w], l[u]});
                        }};
  };
  auto theta = [&](const DoubleFunctor& f) {
    DoubleFunctor g{kc.shape, e.total, {}, {}, {}, {}};
    for (auto& x : kc.coords) g.ob.push_back(reader(f, {x[0]}, {x[1]}, {x[2]}).object(0, 0));
    for (int h = 0; h < S.num_h(); ++h) {
      auto &a = kc.coords[S.h_src[h]], &b = kc.coords[S.h_tgt[h]];
      g.h.push_back(reader(f, {a[0], b[0]}, {a[1]}, {a[2], b[2]}).h(0, 1, 0));
    }
    for (int v = 0; v < S.num_v(); ++v) {
      auto &a = kc.coords[S.v_src[v]], &b = kc.coords[S.v_tgt[v]];
      g.v.push_back(reader(f, {a[0]}, {a[1], b[1]}, {a[2]}).v(0, 0, 1));
    }
    for (int s = 0; s < S.num_s(); ++s) {
      auto& tl = kc.coords[S.h_src[S.s_top[s]]];
      auto& br = kc.coords[S.h_tgt[S.s_bot[s]]];
      g.s.push_back(reader(f, {tl[0], br[0]}, {tl[1], br[1]}, {tl[2], br[2]}).s(0, 1, 0, 1));
    }
    return g;
  };
  return compare_sets("theta", m, n, dom, cod, theta);
}

DegreeComparison psi_T_agreement(const DoubleFunctor& p, int m, int n, std::size_t cap) {
  Reflection e = reflect_perp(p);
  Reflection t = reflect_perp(conjugate(e.q));
  auto R = std::make_shared<const FinDoubleCategory>(conjugate(*t.total));
  const Kernel Kp = kernel_Kprime(), K = kernel_K();
  const KernelCell& kpc = Kp.cell(m, n);
  const KernelCell& kc = K.cell(n, m);
  // K[n, m] ≅ conj K'[m, n]:  ((a, b), w) -> (m - w, (n - b, n - a)).
  auto ckp = std::make_shared<const FinDoubleCategory>(conjugate(*kpc.shape));
  std::vector<int> ob;
  for (auto& x : kc.coords) ob.push_back(kpc.by_coords.at({m - x[2], n - x[1], n - x[0]}));
  auto iota = thin_extend(kc.shape, ckp, ThinIndex(*ckp), ob);
  // grid(m, n) ≅ conj grid(n, m):  (i, k) -> (n - k, m - i).
  auto g = std::make_shared<const FinDoubleCategory>(grid(m, n));
  auto cg = std::make_shared<const FinDoubleCategory>(conjugate(grid(n, m)));
  std::vector<int> gob;
  for (int x = 0; x < g->num_objects(); ++x) {
    int i = x / (n + 1), k = x % (n + 1);
    gob.push_back(grid_object(m, n - k, m - i));
  }
  auto jota = thin_extend(g, cg, ThinIndex(*cg), gob);
  if (!iota || !jota) throw ContractError("psi_T_agreement: conjugation identities do not extend");
  auto dom = psi_eval(Kp, e.q, m, n, cap);
  auto cod = nerve_eval(R, m, n, cap);
  return compare_sets("Psi_T vs nerve of the round trip", m, n, dom, cod, [&](const DoubleFunctor& f) {
    DoubleFunctor cf = conjugate_arrays(f, ckp, t.input.source);
    DoubleFunctor w = kernel_witness(t, compose(cf, *iota), n, m);
    if (has_missing(w)) return w;
    return compose(conjugate_arrays(w, cg, R), *jota);
  });
}

namespace {

void monotone_maps(int p, int q, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p + 1) {
    out.push_back(cur);
    return;
  }
  for (int v = cur.empty() ? 0 : cur.back(); v <= q; ++v) {
    cur.push_back(v);
    monotone_maps(p, q, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monotone(int p, int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (q >= 0) monotone_maps(p, q, cur, out);
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Quadruple (alpha: [a] -> [m], beta: [a] * [b] -> [n], gamma: [s] * [t] -> [a],
// delta: [t] -> [b]) encoded as a, b, alpha, beta, gamma, delta.
std::size_t t_classes(int m, int n, int s, int t, int bound, std::size_t& total) {
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> quads;
  UnionFind uf;
  for (int a = 0; a <= bound; ++a)
    for (int b = 0; b <= bound; ++b)
      for (auto& al : monotone(a, m))
        for (auto& be : monotone(a + b + 1, n))
          for (auto& ga : monotone(s + t + 1, a))
            for (auto& de : monotone(t, b)) {
              std::vector<int> q{a, b};
              q.insert(q.end(), al.begin(), al.end());
              q.insert(q.end(), be.begin(), be.end());
              q.insert(q.end(), ga.begin(), ga.end());
              q.insert(q.end(), de.begin(), de.end());
              id.emplace(q, uf.add());
              quads.push_back(std::move(q));
            }
  total = quads.size();
  auto encode = [](int a, int b, const std::vector<int>& al, const std::vector<int>& be,
                   const std::vector<int>& ga, const std::vector<int>& de) {
    std::vector<int> q{a, b};
    q.insert(q.end(), al.begin(), al.end());
    q.insert(q.end(), be.begin(), be.end());
    q.insert(q.end(), ga.begin(), ga.end());
    q.insert(q.end(), de.begin(), de.end());
    return q;
  };
  const int lg = s + t + 2, ld = t + 1;
  for (auto& q : quads) {
    const int a = q[0], b = q[1];
    std::vector<int> al(q.begin() + 2, q.begin() + 3 + a);
    std::vector<int> be(q.begin() + 3 + a, q.begin() + 5 + 2 * a + b);
    std::vector<int> ga(q.begin() + 5 + 2 * a + b, q.begin() + 5 + 2 * a + b + lg);
    std::vector<int> de(q.begin() + 5 + 2 * a + b + lg, q.begin() + 5 + 2 * a + b + lg + ld);
    const int self = id.at(q);
    // Codegeneracies on [a]: merge i and i + 1.
    for (int i = 0; i < a; ++i) {
      if (al[i] != al[i + 1] || be[i] != be[i + 1]) continue;
      std::vector<int> al2, be2, ga2;
      for (int x = 0; x <= a; ++x)
        if (x != i + 1) al2.push_back(al[x]);
      for (int x = 0; x < static_cast<int>(be.size()); ++x)
        if (x != i + 1) be2.push_back(be[x]);
      for (int g : ga) ga2.push_back(g > i ? g - 1 : g);
      auto it = id.find(encode(a - 1, b, al2, be2, ga2, de));
      if (it != id.end()) uf.unite(self, it->second);
    }
    // Codegeneracies on [b].
    for (int i = 0; i < b; ++i) {
      if (be[a + 1 + i] != be[a + 2 + i]) continue;
      std::vector<int> be2, de2;
      for (int x = 0; x < static_cast<int>(be.size()); ++x)
        if (x != a + 2 + i) be2.push_back(be[x]);
      for (int d : de) de2.push_back(d > i ? d - 1 : d);
      auto it = id.find(encode(a, b - 1, al, be2, ga, de2));
      if (it != id.end()) uf.unite(self, it->second);
    }
    // Cofaces into [a + 1] skipping j: every extension of alpha and beta at j.
    if (a + 1 <= bound)
      for (int j = 0; j <= a + 1; ++j) {
        const int lo_a = j == 0 ? 0 : al[j - 1], hi_a = j == a + 1 ? m : al[j];
        const int lo_b = j == 0 ? 0 : be[j - 1], hi_b = be[j];
        std::vector<int> ga2;
        for (int g : ga) ga2.push_back(g >= j ? g + 1 : g);
        for (int x = lo_a; x <= hi_a; ++x)
          for (int y = lo_b; y <= hi_b; ++y) {
            std::vector<int> al2 = al, be2 = be;
            al2.insert(al2.begin() + j, x);
            be2.insert(be2.begin() + j, y);
            auto it = id.find(encode(a + 1, b, al2, be2, ga2, de));
            if (it != id.end()) uf.unite(self, it->second);
          }
      }
    // Cofaces into [b + 1] skipping j.
    if (b + 1 <= bound)
      for (int j = 0; j <= b + 1; ++j) {
        const int pos = a + 1 + j;
        const int lo = be[pos - 1], hi = pos < static_cast<int>(be.size()) ? be[pos] : n;
        std::vector<int> de2;
        for (int d : de) de2.push_back(d >= j ? d + 1 : d);
        for (int y = lo; y <= hi; ++y) {
          std::vector<int> be2 = be;
          be2.insert(be2.begin() + pos, y);
          auto it = id.find(encode(a, b + 1, al, be2, ga, de2));
          if (it != id.end()) uf.unite(self, it->second);
        }
      }
  }
  std::size_t classes = 0;
  for (int x = 0; x < static_cast<int>(uf.parent.size()); ++x)
    if (uf.find(x) == x) ++classes;
  return classes;
}

}  // namespace

TOracleResult t_oracle(int m, int n, int s, int t, int bound) {
  TOracleResult r;
  r.m = m;
  r.n = n;
  r.s = s;
  r.t = t;
  r.bound = bound < 0 ? m + n + 4 : bound;
  std::size_t ignored = 0;
  r.classes = t_classes(m, n, s, t, r.bound, r.quadruples);
  r.classes_next = t_classes(m, n, s, t, r.bound + 1, ignored);
  r.stable = r.classes == r.classes_next;
  r.note = r.stable ? "stable at bound " + std::to_string(r.bound)
                    : "inconclusive: class count changes between bound " + std::to_string(r.bound) + " and " +
                          std::to_string(r.bound + 1);
  return r;
}

}  // namespace dblcat

#include "dblcat/reflect.hpp"

namespace dblcat {

namespace {

std::uint64_t triple_key(int a, int b, int c, int nb, int nc) {
  return (static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nb) +
          static_cast<std::uint64_t>(b)) *
             static_cast<std::uint64_t>(nc) +
         static_cast<std::uint64_t>(c);
}

}  // namespace

int Reflection::find_h(int f, int v) const {
  auto it = h_index.find(pair_key(f, v));
  return it == h_index.end() ? -1 : it->second;
}

int Reflection::find_s(int sigma, int vbot, int right) const {
  const int nv = input.source->num_v();
  auto it = s_index.find(triple_key(sigma, vbot, right, nv, nv));
  return it == s_index.end() ? -1 : it->second;
}

Reflection reflect_perp(const DoubleFunctor& p) {
  FibrationCertificate cert = is_left_cart_fibration(p);
  if (!cert.ok) throw ContractError("reflect_perp: input is not a (left, cart)-fibration: " + cert.failure);
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C = *p.target;
  const std::vector<bool>& cart = cert.marked;
  const int nv = D.num_v();

  Reflection r;
  r.input = p;
  auto R = std::make_shared<FinDoubleCategory>();
  R->objects = D.objects;

  std::unordered_map<std::uint64_t, int> sq_lift;  // (left edge, base square) -> square
  for (int s = 0; s < D.num_s(); ++s) sq_lift.emplace(pair_key(D.s_left[s], p.s[s]), s);
  auto lift_square = [&](int left, int base) {
    auto it = sq_lift.find(pair_key(left, base));
    if (it == sq_lift.end()) throw ContractError("reflect_perp: missing square lift");
    return it->second;
  };
  auto over_identity = [&](int v) { return p.v[v] == C.v_id[p.ob[D.v_src[v]]]; };

  // h-arrows
  for (int f = 0; f < D.num_h(); ++f)
    for (int v : D.v_out[D.h_tgt[f]]) {
      if (!over_identity(v)) continue;
      int k = static_cast<int>(r.h_arrow.size());
      r.h_index.emplace(pair_key(f, v), k);
      r.h_arrow.push_back(f);
      r.h_fiber.push_back(v);
      R->h_names.push_back("(" + D.h_names[f] + ";" + D.v_names[v] + ")");
      R->h_src.push_back(D.h_src[f]);
      R->h_tgt.push_back(D.v_tgt[v]);
    }
  for (int x = 0; x < D.num_objects(); ++x) R->h_id.push_back(r.find_h(D.h_id[x], D.v_id[x]));

  // v-arrows
  r.v_of_d.assign(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (cart[v]) {
      r.v_of_d[v] = static_cast<int>(r.v_arrow.size());
      r.v_arrow.push_back(v);
      R->v_names.push_back(D.v_names[v]);
      R->v_src.push_back(D.v_src[v]);
      R->v_tgt.push_back(D.v_tgt[v]);
    }
  for (int x = 0; x < D.num_objects(); ++x) R->v_id.push_back(r.v_of_d[D.v_id[x]]);

  // squares
  for (int s = 0; s < D.num_s(); ++s) {
    const int a = D.s_left[s], b = D.s_right[s];
    if (!cart[a]) continue;
    const int f0 = D.s_top[s], f1 = D.s_bot[s];
    for (int v1 : D.v_out[D.h_tgt[f1]]) {
      if (!over_identity(v1)) continue;
      const int w = D.vcomp(v1, b);
      for (int c : D.v_in[D.v_tgt[v1]]) {
        if (!cart[c] || p.v[c] != p.v[b]) continue;
        int v0 = -1;
        for (int u : D.v_out[D.h_tgt[f0]])
          if (D.v_tgt[u] == D.v_src[c] && over_identity(u) && D.vcomp(c, u) == w) {
            if (v0 >= 0) throw ContractError("reflect_perp: cartesian factorization not unique");
            v0 = u;
          }
        if (v0 < 0) throw ContractError("reflect_perp: cartesian factorization missing");
        int k = static_cast<int>(r.s_square.size());
        r.s_index.emplace(triple_key(s, v1, c, nv, nv), k);
        r.s_square.push_back(s);
        r.s_vtop.push_back(v0);
        r.s_vbot.push_back(v1);
        r.s_right.push_back(c);
        R->s_names.push_back("<" + D.s_names[s] + ";" + D.v_names[v1] + ";" + D.v_names[c] + ">");
        R->s_top.push_back(r.find_h(f0, v0));
        R->s_bot.push_back(r.find_h(f1, v1));
        R->s_left.push_back(r.v_of_d[a]);
        R->s_right.push_back(r.v_of_d[c]);
      }
    }
  }
  for (int k = 0; k < R->num_v(); ++k) {
    int a = r.v_arrow[k];
    R->s_hid.push_back(r.find_s(D.s_hid[a], D.v_id[D.v_tgt[a]], a));
  }
  for (int k = 0; k < R->num_h(); ++k) {
    int f = r.h_arrow[k], v = r.h_fiber[k];
    R->s_vid.push_back(r.find_s(D.s_vid[f], v, D.v_id[D.v_tgt[v]]));
  }
  R->reset_tables();
  R->index();

  // Horizontal composition through the unique square lift of the fiber part.
  for (int k1 = 0; k1 < R->num_h(); ++k1)
    for (int k2 : R->h_out[R->h_tgt[k1]]) {
      const int f1 = r.h_arrow[k1], v1 = r.h_fiber[k1];
      const int f2 = r.h_arrow[k2], v2 = r.h_fiber[k2];
      const int lam = lift_square(v1, C.s_vid[p.h[f2]]);
      if (D.s_bot[lam] != f2) throw ContractError("reflect_perp: square lift bottom mismatch");
      R->h_comp.set(k2, k1, r.find_h(D.hcomp(D.s_top[lam], f1), D.vcomp(v2, D.s_right[lam])));
    }
  for (int k1 = 0; k1 < R->num_v(); ++k1)
    for (int k2 : R->v_out[R->v_tgt[k1]])
      R->v_comp.set(k2, k1, r.v_of_d[D.vcomp(r.v_arrow[k2], r.v_arrow[k1])]);
  for (int x1 = 0; x1 < R->num_s(); ++x1) {
    for (int x2 : R->s_by_left[R->s_right[x1]]) {
      const int s1 = r.s_square[x1], s2 = r.s_square[x2];
      const int tau = lift_square(D.s_right[s1], p.s[s2]);
      const int bottom = R->hcomp(R->s_bot[x2], R->s_bot[x1]);
      R->s_hcomp.set(x2, x1, r.find_s(D.shcomp(tau, s1), r.h_fiber[bottom], r.s_right[x2]));
    }
    for (int x2 : R->s_by_top[R->s_bot[x1]]) {
      const int s1 = r.s_square[x1], s2 = r.s_square[x2];
      R->s_vcomp.set(x2, x1, r.find_s(D.svcomp(s2, s1), r.s_vbot[x2],
                                      D.vcomp(r.s_right[x2], r.s_right[x1])));
    }
  }

  r.total = R;
  r.q = DoubleFunctor{r.total, p.target, p.ob, {}, {}, {}};
  for (int k = 0; k < R->num_h(); ++k) r.q.h.push_back(p.h[r.h_arrow[k]]);
  for (int k = 0; k < R->num_v(); ++k) r.q.v.push_back(p.v[r.v_arrow[k]]);
  for (int k = 0; k < R->num_s(); ++k) r.q.s.push_back(p.s[r.s_square[k]]);
  return r;
}

ReflectionCertificate certify_reflection(const Reflection& r) {
  ReflectionCertificate c;
  c.laws = validate_double(*r.total);
  if (!c.laws.ok()) return c;
  c.output = is_cocart_right_fibration(r.q);
  if (!c.output.ok) return c;
  const FinDoubleCategory& D = *r.input.source;
  std::vector<bool> cocart = cartesian_arrows(opposite(horizontal_part(r.q)));
  FinCategory vert = vertical_category(D);
  c.cocartesian_marking_matches = true;
  for (int k = 0; k < r.total->num_h(); ++k)
    if (cocart[k] != vert.inverse(r.h_fiber[k]).has_value()) c.cocartesian_marking_matches = false;
  return c;
}

ConjugateReflection reflect_top(const DoubleFunctor& p) {
  FibrationCertificate cert = is_cocart_right_fibration(p);
  if (!cert.ok) throw ContractError("reflect_top: input is not a (cocart, right)-fibration: " + cert.failure);
  ConjugateReflection out{{}, reflect_perp(conjugate(p))};
  out.result = conjugate(out.inner.q);
  return out;
}

ConjugateReflection reflect_dagger(const DoubleFunctor& p) {
  FibrationCertificate cert = check_fibration(p, FibKind{false, true, false});
  if (!cert.ok) throw ContractError("reflect_dagger: input is not a (cocart, left)-fibration: " + cert.failure);
  ConjugateReflection out{{}, reflect_perp(reverse(op(p, 1)))};
  out.result = op(reverse(out.inner.q), 1);
  return out;
}

int VerticalCleavage::get(int base_v, int target) const {
  auto it = lift.find(pair_key(base_v, target));
  return it == lift.end() ? -1 : it->second;
}

VerticalCleavage vertical_cleavage(const DoubleFunctor& p) {
  FibrationCertificate cert = is_left_cart_fibration(p);
  if (!cert.ok) throw ContractError("vertical_cleavage: not a (left, cart)-fibration: " + cert.failure);
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C = *p.target;
  VerticalCleavage cl;
  for (const LiftEntry& e : cert.lifts) {
    if (e.leg != "fibration") continue;
    int choice = e.solution;
    if (C.v_is_id(e.base)) choice = D.v_id[e.anchor];
    cl.lift[pair_key(e.base, e.anchor)] = choice;
  }
  return cl;
}

Factorization vertical_factorization(const DoubleFunctor& p, int v, const VerticalCleavage& cl) {
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C = *p.target;
  if (v < 0 || v >= D.num_v()) throw ContractError("vertical_factorization: v-arrow out of range");
  Factorization f;
  f.cartesian_part = cl.get(p.v[v], D.v_tgt[v]);
  if (f.cartesian_part < 0)
    throw ContractError("vertical_factorization: cleavage has no lift of " + C.v_names[p.v[v]] +
                        " at " + D.objects[D.v_tgt[v]]);
  for (int u : D.v_out[D.v_src[v]])
    if (p.v[u] == C.v_id[p.ob[D.v_src[v]]] && D.v_tgt[u] == D.v_src[f.cartesian_part] &&
        D.vcomp(f.cartesian_part, u) == v) {
      if (f.fiber_part >= 0) throw ContractError("vertical_factorization: fiber part not unique");
      f.fiber_part = u;
    }
  if (f.fiber_part < 0) throw ContractError("vertical_factorization: no fiber part");
  return f;
}

std::string RoundtripResult::status_name() const {
  switch (status) {
    case Status::Isomorphism: return "isomorphism";
    case Status::Equivalence: return "equivalence";
    case Status::Inconclusive: return "inconclusive";
    default: return "failed";
  }
}

namespace {

bool bijective(const std::vector<int>& m, int n) {
  if (static_cast<int>(m.size()) != n) return false;
  std::vector<bool> hit(n, false);
  for (int x : m) {
    if (x < 0 || x >= n || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

}  // namespace

RoundtripResult roundtrip_iso(const DoubleFunctor& p, const VerticalCleavage& cl) {
  RoundtripResult res;
  const FinDoubleCategory& D = *p.source;
  Reflection E = reflect_perp(p);
  Reflection T = reflect_perp(conjugate(E.q));
  auto R = std::make_shared<const FinDoubleCategory>(conjugate(*T.total));
  {
    DoubleFunctor back = conjugate(T.q);
    res.target_projection = DoubleFunctor{R, p.target, back.ob, back.h, back.v, back.s};
  }
  // Cells of R: h-arrows are T v-arrows (E h-arrows), v-arrows are T h-arrows
  // (E v-arrow, E h-arrow), squares are T squares.
  DoubleFunctor phi{p.source, R, {}, {}, {}, {}};
  for (int x = 0; x < D.num_objects(); ++x) phi.ob.push_back(x);
  for (int f = 0; f < D.num_h(); ++f) {
    int e = E.find_h(f, D.v_id[D.h_tgt[f]]);
    int k = e < 0 ? -1 : T.find_v(e);
    if (k < 0) {
      res.detail = "no image for h-arrow " + D.h_names[f];
      return res;
    }
    phi.h.push_back(k);
  }
  for (int v = 0; v < D.num_v(); ++v) {
    Factorization fac = vertical_factorization(p, v, cl);
    int e_fiber = E.find_h(D.h_id[D.v_src[v]], fac.fiber_part);
    int e_cart = E.find_v(fac.cartesian_part);
    int k = (e_fiber < 0 || e_cart < 0) ? -1 : T.find_h(e_cart, e_fiber);
    if (k < 0) {
      res.detail = "no image for v-arrow " + D.v_names[v];
      return res;
    }
    phi.v.push_back(k);
  }
  std::unordered_map<std::uint64_t, int> r_lift;
  for (int s = 0; s < R->num_s(); ++s) r_lift.emplace(pair_key(R->s_left[s], res.target_projection.s[s]), s);
  for (int s = 0; s < D.num_s(); ++s) {
    auto it = r_lift.find(pair_key(phi.v[D.s_left[s]], p.s[s]));
    if (it == r_lift.end()) {
      res.detail = "no image for square " + D.s_names[s];
      return res;
    }
    phi.s.push_back(it->second);
  }
  res.comparison = phi;
  Report laws = validate_double_functor(phi);
  if (!laws.ok()) {
    res.detail = "comparison is not a double functor: " + laws.violations[0].law + " at " +
                 laws.violations[0].witness;
    return res;
  }
  if (!(compose(res.target_projection, phi) == p)) {
    res.detail = "comparison does not lie over the base";
    return res;
  }
  StrongMapResult strong = is_strong_map(phi, identity_double_functor(p.target), p,
                                         res.target_projection);
  if (!strong.strong) {
    res.detail = "comparison is not strong: " + strong.witness;
    return res;
  }
  const bool iso = bijective(phi.ob, R->num_objects()) && bijective(phi.h, R->num_h()) &&
                   bijective(phi.v, R->num_v()) && bijective(phi.s, R->num_s());
  if (iso) {
    res.status = RoundtripResult::Status::Isomorphism;
    res.detail = "bijective on all cells";
    return res;
  }
  if (is_gaunt(D) && is_gaunt(*p.target)) {
    res.detail = "comparison is not bijective on a gaunt instance";
    return res;
  }
  // Non-gaunt: equivalence on horizontal and vertical 1-categories only.
  if (is_equivalence(horizontal_part(phi)) && is_equivalence(vertical_part(phi))) {
    res.status = RoundtripResult::Status::Equivalence;
    res.detail = "equivalence on horizontal and vertical categories; squares not compared";
  } else {
    res.status = RoundtripResult::Status::Inconclusive;
    res.detail = "non-gaunt input; comparison is not an equivalence on underlying categories";
  }
  return res;
}

FiberSwapResult fiber_swap(const Reflection& r, int c) {
  FiberSwapResult res;
  FiberReport hor = horizontal_fiber(r.q, c);
  FiberReport ver = fiber(r.input, c);
  std::vector<int> ver_local(r.input.source->num_v(), -1);
  for (std::size_t i = 0; i < ver.arrows.size(); ++i) ver_local[ver.arrows[i]] = static_cast<int>(i);
  FinFunctor f{std::make_shared<const FinCategory>(hor.fiber),
               std::make_shared<const FinCategory>(ver.fiber), {}, {}};
  // Both fibers list objects in D order, so objects correspond positionally.
  if (hor.objects != ver.objects) {
    res.detail = "object sets differ";
    return res;
  }
  for (std::size_t i = 0; i < hor.objects.size(); ++i) f.on_objects.push_back(static_cast<int>(i));
  for (int k : hor.arrows) {
    const FinDoubleCategory& D = *r.input.source;
    if (!D.h_is_id(r.h_arrow[k])) {
      res.detail = "h-arrow over an identity with non-identity D part: " + r.total->h_names[k];
      return res;
    }
    f.on_morphisms.push_back(ver_local[r.h_fiber[k]]);
  }
  if (!is_isomorphism(f)) {
    res.detail = "provenance map is not an isomorphism";
    return res;
  }
  res.ok = true;
  return res;
}

DoubleFunctor reflect_map(const DoubleFunctor& f, const Reflection& src, const Reflection& tgt) {
  DoubleFunctor g{src.total, tgt.total, f.ob, {}, {}, {}};
  for (std::size_t k = 0; k < src.h_arrow.size(); ++k)
    g.h.push_back(tgt.find_h(f.h[src.h_arrow[k]], f.v[src.h_fiber[k]]));
  for (std::size_t k = 0; k < src.v_arrow.size(); ++k) g.v.push_back(tgt.find_v(f.v[src.v_arrow[k]]));
  for (std::size_t k = 0; k < src.s_square.size(); ++k)
    g.s.push_back(tgt.find_s(f.s[src.s_square[k]], f.v[src.s_vbot[k]], f.v[src.s_right[k]]));
  for (const auto* xs : {&g.h, &g.v, &g.s})
    for (int x : *xs)
      if (x < 0) throw ContractError("reflect_map: map is not strong");
  return g;
}

}  // namespace dblcat

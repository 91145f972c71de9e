#include "dblcat/fibr.hpp"

#include <unordered_map>

namespace dblcat {

std::string FibKind::name() const {
  std::string disc = discrete_left ? "left" : "right";
  std::string fib = cartesian ? "cart" : "cocart";
  return discrete_horizontal ? disc + "-" + fib : fib + "-" + disc;
}

FibKind FibKind::parse(const std::string& s) {
  for (const FibKind& k : all())
    if (k.name() == s) return k;
  throw ContractError("unknown fibration kind: " + s);
}

std::vector<FibKind> FibKind::all() {
  std::vector<FibKind> r;
  for (bool h : {true, false})
    for (bool l : {true, false})
      for (bool c : {true, false}) r.push_back(FibKind{h, l, c});
  return r;
}

FinDoubleCategory conjugate(const FinDoubleCategory& d) { return op(op(reverse(d), 2), 1); }

DoubleFunctor conjugate(const DoubleFunctor& p) { return op(op(reverse(p), 2), 1); }

namespace {

// Accessors for one discrete leg, abstracting over direction and side.
struct Leg {
  const FinDoubleCategory& D;
  const FinDoubleCategory& C;
  bool horizontal, left;

  int arrows(const FinDoubleCategory& x) const { return horizontal ? x.num_h() : x.num_v(); }
  int near(const FinDoubleCategory& x, int f) const {
    if (horizontal) return left ? x.h_src[f] : x.h_tgt[f];
    return left ? x.v_src[f] : x.v_tgt[f];
  }
  int far(const FinDoubleCategory& x, int f) const {
    if (horizontal) return left ? x.h_tgt[f] : x.h_src[f];
    return left ? x.v_tgt[f] : x.v_src[f];
  }
  // The edge a square lift is anchored at, and the opposite edge.
  int sq_near(const FinDoubleCategory& x, int s) const {
    if (horizontal) return left ? x.s_left[s] : x.s_right[s];
    return left ? x.s_top[s] : x.s_bot[s];
  }
  int sq_far(const FinDoubleCategory& x, int s) const {
    if (horizontal) return left ? x.s_right[s] : x.s_left[s];
    return left ? x.s_bot[s] : x.s_top[s];
  }
  // Composite along the leg: first then second in path order.
  int comp(const FinDoubleCategory& x, int first, int second) const {
    if (horizontal) return left ? x.hcomp(second, first) : x.hcomp(first, second);
    return left ? x.vcomp(second, first) : x.vcomp(first, second);
  }
  int sq_comp(const FinDoubleCategory& x, int first, int second) const {
    if (horizontal) return left ? x.shcomp(second, first) : x.shcomp(first, second);
    return left ? x.svcomp(second, first) : x.svcomp(first, second);
  }
  // Anchoring edges of squares live in the other direction.
  int edge_count(const FinDoubleCategory& x) const { return horizontal ? x.num_v() : x.num_h(); }
  const std::vector<int>& out_arrows(int obj) const {
    if (horizontal) return left ? D.h_out[obj] : D.h_in[obj];
    return left ? D.v_out[obj] : D.v_in[obj];
  }
  const std::vector<int>& sq_at(int edge) const {
    if (horizontal) return left ? D.s_by_left[edge] : D.s_by_right[edge];
    return left ? D.s_by_top[edge] : D.s_by_bot[edge];
  }
};

int p_arrow(const DoubleFunctor& p, bool horizontal, int f) { return horizontal ? p.h[f] : p.v[f]; }
int p_edge(const DoubleFunctor& p, bool horizontal, int e) { return horizontal ? p.v[e] : p.h[e]; }

struct LiftTables {
  std::unordered_map<std::uint64_t, std::pair<int, int>> arrow, square;  // (count, first)
};

LiftTables tabulate(const Leg& leg, const DoubleFunctor& p) {
  LiftTables t;
  for (int f = 0; f < leg.arrows(leg.D); ++f) {
    auto& e = t.arrow[pair_key(leg.near(leg.D, f), p_arrow(p, leg.horizontal, f))];
    if (e.first++ == 0) e.second = f;
  }
  for (int s = 0; s < leg.D.num_s(); ++s) {
    auto& e = t.square[pair_key(leg.sq_near(leg.D, s), p.s[s])];
    if (e.first++ == 0) e.second = s;
  }
  return t;
}

int lookup(const std::unordered_map<std::uint64_t, std::pair<int, int>>& m, int a, int b) {
  auto it = m.find(pair_key(a, b));
  return it == m.end() || it->second.first != 1 ? -1 : it->second.second;
}

bool check_discrete_leg(const DoubleFunctor& p, const Leg& leg, bool paranoid,
                        FibrationCertificate& cert) {
  const FinDoubleCategory& D = leg.D;
  const FinDoubleCategory& C = leg.C;
  const std::string dir = leg.horizontal ? "h-arrow" : "v-arrow";
  LiftTables t = tabulate(leg, p);
  std::vector<std::vector<int>> over_obj(C.num_objects());
  for (int x = 0; x < D.num_objects(); ++x) over_obj[p.ob[x]].push_back(x);
  std::vector<std::vector<int>> over_edge(leg.edge_count(C));
  for (int e = 0; e < leg.edge_count(D); ++e) over_edge[p_edge(p, leg.horizontal, e)].push_back(e);

  for (int g = 0; g < leg.arrows(C); ++g)
    for (int x : over_obj[leg.near(C, g)]) {
      auto it = t.arrow.find(pair_key(x, g));
      LiftEntry e{dir, x, g, -1, 0};
      if (it != t.arrow.end()) {
        e.count = it->second.first;
        e.solution = it->second.second;
      }
      cert.lifts.push_back(e);
      if (e.count != 1) {
        const std::string& gn = leg.horizontal ? C.h_names[g] : C.v_names[g];
        cert.failure = dir + " lift of " + gn + " at " + D.objects[x] + ": " +
                       std::to_string(e.count) + " solutions";
        return false;
      }
    }
  for (int s = 0; s < C.num_s(); ++s)
    for (int a : over_edge[leg.sq_near(C, s)]) {
      auto it = t.square.find(pair_key(a, s));
      LiftEntry e{"square", a, s, -1, 0};
      if (it != t.square.end()) {
        e.count = it->second.first;
        e.solution = it->second.second;
      }
      cert.lifts.push_back(e);
      if (e.count != 1) {
        const std::string& an = leg.horizontal ? D.v_names[a] : D.h_names[a];
        cert.failure = "square lift of " + C.s_names[s] + " at edge " + an + ": " +
                       std::to_string(e.count) + " solutions";
        return false;
      }
    }
  if (!paranoid) return true;
  // Degree 2: lifts of composable pairs compose to the lift of the composite.
  for (int g1 = 0; g1 < leg.arrows(C); ++g1)
    for (int g2 = 0; g2 < leg.arrows(C); ++g2) {
      if (leg.near(C, g2) != leg.far(C, g1)) continue;
      int g12 = leg.comp(C, g1, g2);
      for (int x : over_obj[leg.near(C, g1)]) {
        int f1 = lookup(t.arrow, x, g1);
        int f2 = lookup(t.arrow, leg.far(D, f1), g2);
        if (leg.comp(D, f1, f2) != lookup(t.arrow, x, g12)) {
          cert.failure = "degree-2 " + dir + " lift mismatch at " + D.objects[x];
          return false;
        }
      }
    }
  for (int s1 = 0; s1 < C.num_s(); ++s1)
    for (int s2 = 0; s2 < C.num_s(); ++s2) {
      if (leg.sq_near(C, s2) != leg.sq_far(C, s1)) continue;
      int s12 = leg.sq_comp(C, s1, s2);
      for (int a : over_edge[leg.sq_near(C, s1)]) {
        int t1 = lookup(t.square, a, s1);
        int t2 = lookup(t.square, leg.sq_far(D, t1), s2);
        if (leg.sq_comp(D, t1, t2) != lookup(t.square, a, s12)) {
          cert.failure = "degree-2 square lift mismatch over " + C.s_names[s12];
          return false;
        }
      }
    }
  return true;
}

FinFunctor fibration_part(const DoubleFunctor& p, const FibKind& k) {
  FinFunctor f = k.discrete_horizontal ? vertical_part(p) : horizontal_part(p);
  return k.cartesian ? f : opposite(f);
}

}  // namespace

FibrationCertificate check_fibration(const DoubleFunctor& p, const FibKind& kind, bool paranoid) {
  if (!p.source || !p.target) throw ContractError("fibration check: functor without endpoints");
  Report r = validate_double_functor(p);
  if (!r.ok())
    throw ContractError("fibration check: invalid double functor (" + r.violations[0].law + ": " +
                        r.violations[0].witness + ")");
  FibrationCertificate cert;
  cert.kind = kind;
  cert.marked_direction = kind.discrete_horizontal ? MarkDirection::Vertical : MarkDirection::Horizontal;
  Leg leg{*p.source, *p.target, kind.discrete_horizontal, kind.discrete_left};
  if (!check_discrete_leg(p, leg, paranoid, cert)) return cert;

  FinFunctor f = fibration_part(p, kind);
  FibrationAnalysis a = analyze_cartesian_fibration(f);
  for (const LiftRecord& rec : a.lifts)
    cert.lifts.push_back(LiftEntry{"fibration", rec.endpoint, rec.base,
                                   rec.lifts.empty() ? -1 : rec.lifts.front(),
                                   static_cast<int>(rec.lifts.size())});
  if (!a.ok) {
    cert.failure = std::string(kind.discrete_horizontal ? "vertical" : "horizontal") + " " +
                   (kind.cartesian ? "cartesian" : "cocartesian") + " leg: " + a.failure;
    return cert;
  }
  cert.marked = cartesian_arrows(f);
  cert.ok = true;
  return cert;
}

FibrationCertificate is_left_cart_fibration(const DoubleFunctor& p, bool paranoid) {
  return check_fibration(p, kLeftCart, paranoid);
}

FibrationCertificate is_cocart_right_fibration(const DoubleFunctor& p, bool paranoid) {
  return check_fibration(p, kCocartRight, paranoid);
}

Report replay_certificate(const DoubleFunctor& p, const FibrationCertificate& cert) {
  Report r;
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C = *p.target;
  const FibKind& k = cert.kind;
  Leg leg{D, C, k.discrete_horizontal, k.discrete_left};
  FinFunctor f = fibration_part(p, k);
  std::size_t arrow_problems = 0, square_problems = 0, fib_problems = 0;
  const std::string dir = k.discrete_horizontal ? "h-arrow" : "v-arrow";
  for (const LiftEntry& e : cert.lifts) {
    const std::string where = e.leg + " problem (" + std::to_string(e.anchor) + ", " +
                              std::to_string(e.base) + ")";
    if (e.leg == dir) {
      ++arrow_problems;
      int n = 0;
      for (int g : leg.out_arrows(e.anchor))
        if (p_arrow(p, k.discrete_horizontal, g) == e.base) ++n;
      if (n != e.count) r.add("lift count reproduces", where);
      if (e.count == 1 && (leg.near(D, e.solution) != e.anchor ||
                           p_arrow(p, k.discrete_horizontal, e.solution) != e.base))
        r.add("recorded lift solves its problem", where);
    } else if (e.leg == "square") {
      ++square_problems;
      int n = 0;
      for (int s : leg.sq_at(e.anchor))
        if (p.s[s] == e.base) ++n;
      if (n != e.count) r.add("lift count reproduces", where);
      if (e.count == 1 && (leg.sq_near(D, e.solution) != e.anchor || p.s[e.solution] != e.base))
        r.add("recorded lift solves its problem", where);
    } else if (e.leg == "fibration") {
      ++fib_problems;
      if (e.solution >= 0) {
        if (f.source->tgt[e.solution] != e.anchor || f.on_morphisms[e.solution] != e.base ||
            !is_cartesian_arrow(f, e.solution))
          r.add("recorded (co)cartesian lift is valid", where);
      } else if (cert.ok) {
        r.add("certified fibration has every lift", where);
      }
    } else {
      r.add("known lift kind", e.leg);
    }
  }
  if (cert.ok) {
    std::size_t want_arrows = 0, want_squares = 0, want_fib = 0;
    std::vector<int> fiber_size(C.num_objects(), 0);
    for (int x = 0; x < D.num_objects(); ++x) ++fiber_size[p.ob[x]];
    for (int g = 0; g < leg.arrows(C); ++g) want_arrows += fiber_size[leg.near(C, g)];
    std::vector<int> edge_fiber(leg.edge_count(C), 0);
    for (int e = 0; e < leg.edge_count(D); ++e) ++edge_fiber[p_edge(p, k.discrete_horizontal, e)];
    for (int s = 0; s < C.num_s(); ++s) want_squares += edge_fiber[leg.sq_near(C, s)];
    for (int g = 0; g < f.target->num_morphisms(); ++g) want_fib += fiber_size[f.target->tgt[g]];
    if (arrow_problems != want_arrows) r.add("certificate covers arrow problems", dir);
    if (square_problems != want_squares) r.add("certificate covers square problems", "square");
    if (fib_problems != want_fib) r.add("certificate covers fibration problems", "fibration");
    if (cert.marked != cartesian_arrows(f)) r.add("marking equals (co)cartesian arrows", "marked");
  }
  return r;
}

MarkedDoubleCategory mark_cartesian_verticals(const DoubleFunctor& p) {
  FibrationCertificate c = is_left_cart_fibration(p);
  if (!c.ok) throw ContractError("mark_cartesian_verticals: not a (left, cart)-fibration: " + c.failure);
  return MarkedDoubleCategory{p.source, MarkDirection::Vertical, c.marked};
}

MarkedDoubleCategory mark_cocartesian_horizontals(const DoubleFunctor& p) {
  return MarkedDoubleCategory{p.source, MarkDirection::Horizontal,
                              cartesian_arrows(opposite(horizontal_part(p)))};
}

StrongMapResult is_strong_map(const DoubleFunctor& f, const DoubleFunctor& g, const DoubleFunctor& p,
                              const DoubleFunctor& q) {
  StrongMapResult res;
  DoubleFunctor a = compose(q, f), b = compose(g, p);
  if (!(a == b)) {
    res.witness = "square of functors does not commute";
    throw ContractError("is_strong_map: " + res.witness);
  }
  res.commutes = true;
  std::vector<bool> mp = cartesian_arrows(vertical_part(p));
  std::vector<bool> mq = cartesian_arrows(vertical_part(q));
  for (int v = 0; v < p.source->num_v(); ++v)
    if (mp[v] && !mq[f.v[v]]) {
      res.witness = "cartesian " + p.source->v_names[v] + " maps to non-cartesian " +
                    q.source->v_names[f.v[v]];
      return res;
    }
  res.strong = true;
  return res;
}

namespace {

FiberReport fiber_in(const DoubleFunctor& p, int c, bool vertical) {
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C = *p.target;
  if (c < 0 || c >= C.num_objects()) throw ContractError("fiber: object not in base");
  FiberReport rep;
  std::vector<int> local(D.num_objects(), -1);
  for (int x = 0; x < D.num_objects(); ++x)
    if (p.ob[x] == c) {
      local[x] = static_cast<int>(rep.objects.size());
      rep.objects.push_back(x);
      rep.fiber.objects.push_back(D.objects[x]);
    }
  const int n = vertical ? D.num_v() : D.num_h();
  const int cid = vertical ? C.v_id[c] : C.h_id[c];
  std::vector<int> arrow_local(n, -1);
  for (int f = 0; f < n; ++f)
    if ((vertical ? p.v[f] : p.h[f]) == cid) {
      arrow_local[f] = static_cast<int>(rep.arrows.size());
      rep.arrows.push_back(f);
      rep.fiber.morphisms.push_back(vertical ? D.v_names[f] : D.h_names[f]);
      rep.fiber.src.push_back(local[vertical ? D.v_src[f] : D.h_src[f]]);
      rep.fiber.tgt.push_back(local[vertical ? D.v_tgt[f] : D.h_tgt[f]]);
    }
  for (int x : rep.objects) rep.fiber.ident.push_back(arrow_local[vertical ? D.v_id[x] : D.h_id[x]]);
  rep.fiber.comp.reset(rep.arrows.size());
  const CompTable& t = vertical ? D.v_comp : D.h_comp;
  t.for_each([&](int g, int f, int gf) {
    if (arrow_local[g] >= 0 && arrow_local[f] >= 0)
      rep.fiber.comp.set(arrow_local[g], arrow_local[f], arrow_local[gf]);
  });
  rep.fiber.index();
  rep.horizontally_constant = true;
  const int other = vertical ? D.num_h() : D.num_v();
  const int oid = vertical ? C.h_id[c] : C.v_id[c];
  for (int f = 0; f < other; ++f) {
    bool over = (vertical ? p.h[f] : p.v[f]) == oid;
    bool ident = vertical ? D.h_is_id(f) : D.v_is_id(f);
    if (over && !ident) rep.horizontally_constant = false;
  }
  return rep;
}

}  // namespace

FiberReport fiber(const DoubleFunctor& p, int c) { return fiber_in(p, c, true); }
FiberReport horizontal_fiber(const DoubleFunctor& p, int c) { return fiber_in(p, c, false); }

}  // namespace dblcat

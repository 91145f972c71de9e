#include "dblcat/groth.hpp"

namespace dblcat {

Report validate_cat_valued(const CatValuedFunctor& F) {
  Report r;
  if (!F.base) {
    r.add("base category", "missing");
    return r;
  }
  const FinCategory& C = *F.base;
  for (auto& v : validate_category(C).violations) r.add("base: " + v.law, v.witness);
  if (static_cast<int>(F.on_objects.size()) != C.num_objects() ||
      static_cast<int>(F.on_morphisms.size()) != C.num_morphisms()) {
    r.add("functor shape", "value count differs from base");
    return r;
  }
  if (!r.ok()) return r;
  for (int c = 0; c < C.num_objects(); ++c) {
    if (!F.on_objects[c]) {
      r.add("value category", C.objects[c] + " missing");
      continue;
    }
    for (auto& v : validate_category(*F.on_objects[c]).violations)
      r.add("value at " + C.objects[c] + ": " + v.law, v.witness);
  }
  if (!r.ok()) return r;
  for (int g = 0; g < C.num_morphisms(); ++g) {
    const FinFunctor& t = F.on_morphisms[g];
    if (!t.source || !t.target || !(*t.source == *F.on_objects[C.src[g]]) ||
        !(*t.target == *F.on_objects[C.tgt[g]])) {
      r.add("transport endpoints", C.morphisms[g]);
      continue;
    }
    for (auto& v : validate_functor(t).violations)
      r.add("transport " + C.morphisms[g] + ": " + v.law, v.witness);
  }
  if (!r.ok()) return r;
  for (int c = 0; c < C.num_objects(); ++c) {
    const FinFunctor& t = F.on_morphisms[C.ident[c]];
    for (int x = 0; x < static_cast<int>(t.on_objects.size()); ++x)
      if (t.on_objects[x] != x) r.add("identities to identities", C.objects[c]);
    for (int m = 0; m < static_cast<int>(t.on_morphisms.size()); ++m)
      if (t.on_morphisms[m] != m) r.add("identities to identities", C.objects[c]);
  }
  C.comp.for_each([&](int g, int f, int gf) {
    const FinFunctor &a = F.on_morphisms[f], &b = F.on_morphisms[g], &ab = F.on_morphisms[gf];
    for (std::size_t x = 0; x < a.on_objects.size(); ++x)
      if (b.on_objects[a.on_objects[x]] != ab.on_objects[x]) {
        r.add("composites to composites", C.morphisms[g] + " o " + C.morphisms[f]);
        return;
      }
    for (std::size_t m = 0; m < a.on_morphisms.size(); ++m)
      if (b.on_morphisms[a.on_morphisms[m]] != ab.on_morphisms[m]) {
        r.add("composites to composites", C.morphisms[g] + " o " + C.morphisms[f]);
        return;
      }
  });
  return r;
}

CatValuedFunctor constant_functor(CategoryPtr base, CategoryPtr value) {
  CatValuedFunctor F{base, {}, {}};
  F.on_objects.assign(base->num_objects(), value);
  for (int g = 0; g < base->num_morphisms(); ++g) F.on_morphisms.push_back(identity_functor(value));
  return F;
}

int Cleavage::get(int base_morphism, int object) const {
  auto it = lift.find(pair_key(base_morphism, object));
  return it == lift.end() ? -1 : it->second;
}

std::optional<std::string> split_failure(const FinFunctor& p, const Cleavage& cl) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  std::vector<std::vector<int>> over(C.num_objects());
  for (int x = 0; x < D.num_objects(); ++x) over[p.on_objects[x]].push_back(x);
  for (int c = 0; c < C.num_objects(); ++c)
    for (int x : over[c])
      if (cl.get(C.ident[c], x) != D.ident[x])
        return "chosen lift of " + C.morphisms[C.ident[c]] + " at " + D.objects[x] + " is not an identity";
  std::optional<std::string> fail;
  C.comp.for_each([&](int g, int f, int gf) {
    if (fail) return;
    if (cl.cocartesian) {
      for (int x : over[C.src[f]]) {
        int lf = cl.get(f, x);
        int lg = lf < 0 ? -1 : cl.get(g, D.tgt[lf]);
        if (lf < 0 || lg < 0 || D.compose(lg, lf) != cl.get(gf, x)) {
          fail = "lift of " + C.morphisms[g] + " o " + C.morphisms[f] + " at " + D.objects[x] +
                 " is not the composite of lifts";
          return;
        }
      }
    } else {
      for (int z : over[C.tgt[g]]) {
        int lg = cl.get(g, z);
        int lf = lg < 0 ? -1 : cl.get(f, D.src[lg]);
        if (lf < 0 || lg < 0 || D.compose(lg, lf) != cl.get(gf, z)) {
          fail = "lift of " + C.morphisms[g] + " o " + C.morphisms[f] + " at " + D.objects[z] +
                 " is not the composite of lifts";
          return;
        }
      }
    }
  });
  return fail;
}

Cleavage cocartesian_cleavage(const FinFunctor& p) {
  FibrationAnalysis a = analyze_cartesian_fibration(opposite(p));
  if (!a.ok) throw ContractError("cocartesian_cleavage: not a cocartesian fibration: " + a.failure);
  Cleavage cl;
  cl.cocartesian = true;
  for (const LiftRecord& rec : a.lifts) {
    int choice = rec.lifts.front();
    if (p.target->is_identity(rec.base)) choice = p.source->ident[rec.endpoint];
    cl.lift[pair_key(rec.base, rec.endpoint)] = choice;
  }
  return cl;
}

int Unstraightening::morphism(int gamma, int x, int phi) const {
  auto it = morphism_lookup.find({gamma, x, phi});
  return it == morphism_lookup.end() ? -1 : it->second;
}

namespace {

Unstraightening unstraighten_covariant(const CatValuedFunctor& F) {
  const FinCategory& C = *F.base;
  Unstraightening u;
  FinCategory E;
  for (int c = 0; c < C.num_objects(); ++c) {
    u.object_offset.push_back(E.num_objects());
    const FinCategory& Fc = *F.on_objects[c];
    for (int x = 0; x < Fc.num_objects(); ++x) {
      E.objects.push_back("(" + C.objects[c] + "," + Fc.objects[x] + ")");
      u.object_cells.push_back({c, x});
    }
  }
  std::vector<std::array<int, 3>> cells;  // (gamma, x, phi)
  for (int g = 0; g < C.num_morphisms(); ++g) {
    const int c = C.src[g], c2 = C.tgt[g];
    const FinCategory& Fc = *F.on_objects[c];
    const FinCategory& Fc2 = *F.on_objects[c2];
    const FinFunctor& t = F.on_morphisms[g];
    std::vector<std::vector<int>> preimage(Fc2.num_objects());
    for (int x = 0; x < Fc.num_objects(); ++x) preimage[t.on_objects[x]].push_back(x);
    for (int phi = 0; phi < Fc2.num_morphisms(); ++phi)
      for (int x : preimage[Fc2.src[phi]]) {
        int k = E.num_morphisms();
        u.morphism_lookup[{g, x, phi}] = k;
        cells.push_back({g, x, phi});
        u.morphism_cells.push_back({g, phi});
        E.morphisms.push_back("(" + C.morphisms[g] + "," + Fc2.morphisms[phi] + ")");
        E.src.push_back(u.object_offset[c] + x);
        E.tgt.push_back(u.object_offset[c2] + Fc2.tgt[phi]);
      }
  }
  for (auto [c, x] : u.object_cells)
    E.ident.push_back(u.morphism(C.ident[c], x, F.on_objects[c]->ident[x]));
  E.comp.reset(E.morphisms.size());
  E.index();
  for (int k1 = 0; k1 < E.num_morphisms(); ++k1) {
    auto [g1, x1, phi1] = cells[k1];
    for (int k2 : E.out[E.tgt[k1]]) {
      auto [g2, x2, phi2] = cells[k2];
      const int c3 = C.tgt[g2];
      int phi = F.on_objects[c3]->compose(phi2, F.on_morphisms[g2].on_morphisms[phi1]);
      E.comp.set(k2, k1, u.morphism(C.compose(g2, g1), x1, phi));
    }
  }
  auto Ep = std::make_shared<const FinCategory>(std::move(E));
  u.projection = FinFunctor{Ep, F.base, {}, {}};
  for (auto [c, x] : u.object_cells) u.projection.on_objects.push_back(c);
  for (auto [g, phi] : u.morphism_cells) u.projection.on_morphisms.push_back(g);
  u.cleavage.cocartesian = true;
  for (int g = 0; g < C.num_morphisms(); ++g) {
    const int c = C.src[g];
    const FinFunctor& t = F.on_morphisms[g];
    const FinCategory& Fc2 = *F.on_objects[C.tgt[g]];
    for (int x = 0; x < F.on_objects[c]->num_objects(); ++x)
      u.cleavage.lift[pair_key(g, u.object(c, x))] = u.morphism(g, x, Fc2.ident[t.on_objects[x]]);
  }
  return u;
}

}  // namespace

Unstraightening unstraighten_1(const CatValuedFunctor& F, bool contravariant) {
  Report r = validate_cat_valued(F);
  if (!r.ok())
    throw ContractError("unstraighten_1: invalid functor (" + r.violations[0].law + ": " +
                        r.violations[0].witness + ")");
  if (!contravariant) return unstraighten_covariant(F);
  CatValuedFunctor G{F.base, {}, {}};
  for (auto& c : F.on_objects) G.on_objects.push_back(std::make_shared<const FinCategory>(opposite(*c)));
  for (int g = 0; g < F.base->num_morphisms(); ++g) {
    FinFunctor t = F.on_morphisms[g];
    G.on_morphisms.push_back(FinFunctor{G.on_objects[F.base->src[g]], G.on_objects[F.base->tgt[g]],
                                        t.on_objects, t.on_morphisms});
  }
  Unstraightening u = unstraighten_covariant(G);
  u.projection = opposite(u.projection);
  u.cleavage.cocartesian = false;
  return u;
}

CatValuedFunctor straighten_1(const FinFunctor& p, const Cleavage& cl) {
  if (!cl.cocartesian) throw ContractError("straighten_1: cleavage must be cocartesian");
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  FinFunctor popp = opposite(p);
  for (auto& [key, m] : cl.lift)
    if (m < 0 || !is_cartesian_arrow(popp, m))
      throw ContractError("straighten_1: chosen lift " + (m < 0 ? std::string("missing") : D.morphisms[m]) +
                          " is not cocartesian");
  if (auto fail = split_failure(p, cl)) throw ContractError("straighten_1: cleavage not split: " + *fail);

  CatValuedFunctor F{p.target, {}, {}};
  std::vector<int> local_obj(D.num_objects(), -1), local_mor(D.num_morphisms(), -1);
  std::vector<std::vector<int>> fib_objs(C.num_objects()), fib_mors(C.num_objects());
  for (int c = 0; c < C.num_objects(); ++c) {
    FinCategory Fc;
    for (int x = 0; x < D.num_objects(); ++x)
      if (p.on_objects[x] == c) {
        local_obj[x] = Fc.num_objects();
        fib_objs[c].push_back(x);
        Fc.objects.push_back(D.objects[x]);
      }
    for (int m = 0; m < D.num_morphisms(); ++m)
      if (p.on_morphisms[m] == C.ident[c]) {
        local_mor[m] = Fc.num_morphisms();
        fib_mors[c].push_back(m);
        Fc.morphisms.push_back(D.morphisms[m]);
        Fc.src.push_back(local_obj[D.src[m]]);
        Fc.tgt.push_back(local_obj[D.tgt[m]]);
      }
    for (int x : fib_objs[c]) Fc.ident.push_back(local_mor[D.ident[x]]);
    Fc.comp.reset(Fc.morphisms.size());
    for (int m1 : fib_mors[c])
      for (int m2 : D.out[D.tgt[m1]])
        if (local_mor[m2] >= 0) Fc.comp.set(local_mor[m2], local_mor[m1], local_mor[D.compose(m2, m1)]);
    Fc.index();
    F.on_objects.push_back(std::make_shared<const FinCategory>(std::move(Fc)));
  }
  for (int g = 0; g < C.num_morphisms(); ++g) {
    const int c = C.src[g], c2 = C.tgt[g];
    FinFunctor t{F.on_objects[c], F.on_objects[c2], {}, {}};
    for (int x : fib_objs[c]) t.on_objects.push_back(local_obj[D.tgt[cl.get(g, x)]]);
    for (int m : fib_mors[c]) {
      const int lx = cl.get(g, D.src[m]), ly = cl.get(g, D.tgt[m]);
      const int target = D.compose(ly, m);
      int found = -1;
      for (int m2 : D.out[D.tgt[lx]])
        if (local_mor[m2] >= 0 && D.tgt[m2] == D.tgt[ly] && D.compose(m2, lx) == target) {
          if (found >= 0) throw ContractError("straighten_1: transport not unique");
          found = m2;
        }
      if (found < 0) throw ContractError("straighten_1: transport missing");
      t.on_morphisms.push_back(local_mor[found]);
    }
    F.on_morphisms.push_back(std::move(t));
  }
  return F;
}

bool same_structure(const FinCategory& a, const FinCategory& b) {
  return a.num_objects() == b.num_objects() && a.num_morphisms() == b.num_morphisms() &&
         a.src == b.src && a.tgt == b.tgt && a.ident == b.ident && a.comp == b.comp;
}

bool same_functor(const CatValuedFunctor& a, const CatValuedFunctor& b) {
  if (!same_structure(*a.base, *b.base) || a.on_objects.size() != b.on_objects.size()) return false;
  for (std::size_t c = 0; c < a.on_objects.size(); ++c)
    if (!same_structure(*a.on_objects[c], *b.on_objects[c])) return false;
  for (std::size_t g = 0; g < a.on_morphisms.size(); ++g)
    if (a.on_morphisms[g].on_objects != b.on_morphisms[g].on_objects ||
        a.on_morphisms[g].on_morphisms != b.on_morphisms[g].on_morphisms)
      return false;
  return true;
}

FinFunctor unstraighten_comparison(const FinFunctor& p, const Cleavage& cl, const Unstraightening& un) {
  const FinCategory& D = *p.source;
  const FinCategory& C = *p.target;
  std::vector<std::vector<int>> fib_objs(C.num_objects()), fib_mors(C.num_objects());
  for (int x = 0; x < D.num_objects(); ++x) fib_objs[p.on_objects[x]].push_back(x);
  for (int m = 0; m < D.num_morphisms(); ++m)
    if (C.is_identity(p.on_morphisms[m])) fib_mors[C.src[p.on_morphisms[m]]].push_back(m);
  FinFunctor f{un.projection.source, p.source, {}, {}};
  for (auto [c, x] : un.object_cells) f.on_objects.push_back(fib_objs[c][x]);
  const FinCategory& U = *un.projection.source;
  for (int k = 0; k < U.num_morphisms(); ++k) {
    auto [g, phi] = un.morphism_cells[k];
    int xd = f.on_objects[U.src[k]];
    f.on_morphisms.push_back(D.compose(fib_mors[C.tgt[g]][phi], cl.get(g, xd)));
  }
  return f;
}

GrothendieckDouble grothendieck_double(const CatValuedFunctor& F, CategoryPtr A, CategoryPtr B) {
  Report rep = validate_cat_valued(F);
  if (!rep.ok())
    throw ContractError("grothendieck_double: invalid functor (" + rep.violations[0].law + ": " +
                        rep.violations[0].witness + ")");
  const int nA = A->num_objects(), mA = A->num_morphisms();
  const int nB = B->num_objects(), mB = B->num_morphisms();
  if (F.base->num_objects() != nA * nB || F.base->num_morphisms() != mA * mB)
    throw ContractError("grothendieck_double: base is not A x B^op");
  auto Fob = [&](int a, int b) -> const FinCategory& { return *F.on_objects[a * nB + b]; };
  auto Fm = [&](int f, int g) -> const FinFunctor& { return F.on_morphisms[f * mB + g]; };
  const bool point = nB == 1;

  GrothendieckDouble G;
  auto X = std::make_shared<FinDoubleCategory>();
  std::vector<int> off(nA * nB);
  for (int a = 0; a < nA; ++a)
    for (int b = 0; b < nB; ++b) {
      off[a * nB + b] = X->num_objects();
      for (int x = 0; x < Fob(a, b).num_objects(); ++x) {
        G.object_cells.push_back({a, b, x});
        X->objects.push_back(point ? "(" + A->objects[a] + "," + Fob(a, b).objects[x] + ")"
                                   : "(" + A->objects[a] + "," + B->objects[b] + "," +
                                         Fob(a, b).objects[x] + ")");
      }
    }
  auto obj = [&](int a, int b, int x) { return off[a * nB + b] + x; };

  std::map<std::array<int, 3>, int> h_ix;
  for (int f = 0; f < mA; ++f)
    for (int b = 0; b < nB; ++b) {
      const int a = A->src[f], a2 = A->tgt[f];
      const FinFunctor& t = Fm(f, B->ident[b]);
      for (int x = 0; x < Fob(a, b).num_objects(); ++x) {
        h_ix[{f, b, x}] = X->num_h();
        G.h_cells.push_back({f, b, x});
        X->h_names.push_back(point ? "(" + A->morphisms[f] + "," + Fob(a, b).objects[x] + ")"
                                   : "(" + A->morphisms[f] + "," + B->objects[b] + "," +
                                         Fob(a, b).objects[x] + ")");
        X->h_src.push_back(obj(a, b, x));
        X->h_tgt.push_back(obj(a2, b, t.on_objects[x]));
      }
    }
  std::map<std::array<int, 4>, int> v_ix;
  for (int a = 0; a < nA; ++a)
    for (int g = 0; g < mB; ++g) {
      const int b = B->src[g], b2 = B->tgt[g];
      const FinFunctor& t = Fm(A->ident[a], g);  // F(a, b2) -> F(a, b)
      const FinCategory& Fab = Fob(a, b);
      for (int y = 0; y < Fob(a, b2).num_objects(); ++y)
        for (int phi : Fab.in[t.on_objects[y]]) {
          v_ix[{a, g, phi, y}] = X->num_v();
          G.v_cells.push_back({a, g, phi, y});
          X->v_names.push_back(point ? "(" + A->objects[a] + "," + Fab.morphisms[phi] + ")"
                                     : "(" + A->objects[a] + "," + B->morphisms[g] + "," +
                                           Fab.morphisms[phi] + ")");
          X->v_src.push_back(obj(a, b, Fab.src[phi]));
          X->v_tgt.push_back(obj(a, b2, y));
        }
    }
  for (auto [a, b, x] : G.object_cells) {
    X->h_id.push_back(h_ix.at({A->ident[a], b, x}));
    X->v_id.push_back(v_ix.at({a, B->ident[b], Fob(a, b).ident[x], x}));
  }
  std::map<std::array<int, 2>, int> s_ix;
  for (int f = 0; f < mA; ++f) {
    const int a = A->src[f], a2 = A->tgt[f];
    for (int k = 0; k < X->num_v(); ++k) {
      auto [ka, g, phi, y] = G.v_cells[k];
      if (ka != a) continue;
      const int b = B->src[g], b2 = B->tgt[g];
      const FinFunctor& tb = Fm(f, B->ident[b]);
      const FinFunctor& tb2 = Fm(f, B->ident[b2]);
      const int x = Fob(a, b).src[phi];
      s_ix[{f, k}] = X->num_s();
      G.s_cells.push_back({f, k});
      X->s_names.push_back("(" + A->morphisms[f] + "," + X->v_names[k] + ")");
      X->s_top.push_back(h_ix.at({f, b, x}));
      X->s_bot.push_back(h_ix.at({f, b2, y}));
      X->s_left.push_back(k);
      X->s_right.push_back(v_ix.at({a2, g, tb.on_morphisms[phi], tb2.on_objects[y]}));
    }
  }
  for (int k = 0; k < X->num_v(); ++k) X->s_hid.push_back(s_ix.at({A->ident[G.v_cells[k][0]], k}));
  for (int h = 0; h < X->num_h(); ++h) {
    auto [f, b, x] = G.h_cells[h];
    X->s_vid.push_back(s_ix.at({f, X->v_id[X->h_src[h]]}));
  }
  X->reset_tables();
  X->index();
  for (int h1 = 0; h1 < X->num_h(); ++h1)
    for (int h2 : X->h_out[X->h_tgt[h1]]) {
      auto [f1, b, x] = G.h_cells[h1];
      X->h_comp.set(h2, h1, h_ix.at({A->compose(G.h_cells[h2][0], f1), b, x}));
    }
  for (int k1 = 0; k1 < X->num_v(); ++k1)
    for (int k2 : X->v_out[X->v_tgt[k1]]) {
      auto [a, g1, phi1, y1] = G.v_cells[k1];
      auto [a2, g2, phi2, z] = G.v_cells[k2];
      const int b = B->src[g1];
      int phi = Fob(a, b).compose(Fm(A->ident[a], g1).on_morphisms[phi2], phi1);
      X->v_comp.set(k2, k1, v_ix.at({a, B->compose(g2, g1), phi, z}));
    }
  for (int s1 = 0; s1 < X->num_s(); ++s1) {
    auto [f1, k1] = G.s_cells[s1];
    for (int s2 : X->s_by_left[X->s_right[s1]])
      X->s_hcomp.set(s2, s1, s_ix.at({A->compose(G.s_cells[s2][0], f1), k1}));
    for (int s2 : X->s_by_top[X->s_bot[s1]])
      X->s_vcomp.set(s2, s1, s_ix.at({f1, X->vcomp(G.s_cells[s2][1], k1)}));
  }

  auto base = std::make_shared<const FinDoubleCategory>(boxtimes(*A, *B));
  G.projection = DoubleFunctor{X, base, {}, {}, {}, {}};
  for (auto [a, b, x] : G.object_cells) G.projection.ob.push_back(a * nB + b);
  for (auto [f, b, x] : G.h_cells) G.projection.h.push_back(f * nB + b);
  for (auto& [a, g, phi, y] : G.v_cells) G.projection.v.push_back(a * mB + g);
  for (auto [f, k] : G.s_cells) G.projection.s.push_back(f * mB + G.v_cells[k][1]);
  return G;
}

GrothendieckDouble copresheaf_of(const CatValuedFunctor& F) {
  static const CategoryPtr point = std::make_shared<const FinCategory>(chain(0));
  return grothendieck_double(F, F.base, point);
}

UnReflectReport check_un_equals_reflect(const CatValuedFunctor& F) {
  UnReflectReport rep;
  Unstraightening un = unstraighten_1(F);
  GrothendieckDouble X = copresheaf_of(F);
  Reflection R = reflect_perp(X.projection);
  FinCategory H = horizontal_category(*R.total);
  const FinCategory& U = *un.projection.source;
  rep.counts_match = H.num_objects() == U.num_objects() && H.num_morphisms() == U.num_morphisms();
  if (!rep.counts_match) {
    rep.detail = "cell counts differ: " + std::to_string(H.num_morphisms()) + " reflected h-arrows vs " +
                 std::to_string(U.num_morphisms()) + " morphisms";
    return rep;
  }
  FinFunctor phi{std::make_shared<const FinCategory>(H), un.projection.source, {}, {}};
  for (auto [a, b, x] : X.object_cells) phi.on_objects.push_back(un.object(a, x));
  for (int k = 0; k < H.num_morphisms(); ++k) {
    auto [g, b, x] = X.h_cells[R.h_arrow[k]];
    const int phi_ix = X.v_cells[R.h_fiber[k]][2];
    int m = un.morphism(g, x, phi_ix);
    if (m < 0) {
      rep.detail = "no morphism for reflected h-arrow " + H.morphisms[k];
      return rep;
    }
    phi.on_morphisms.push_back(m);
  }
  rep.isomorphism = is_isomorphism(phi);
  for (int k = 0; k < H.num_morphisms(); ++k)
    if (un.projection.on_morphisms[phi.on_morphisms[k]] != R.q.h[k]) rep.isomorphism = false;
  FinCategory V = vertical_category(*X.projection.source);
  rep.verticals_invertible = true;
  rep.verticals_identities = true;
  for (int v : R.v_arrow) {
    if (!V.inverse(v)) rep.verticals_invertible = false;
    if (!V.is_identity(v)) rep.verticals_identities = false;
  }
  bool gaunt = true;
  for (auto& c : F.on_objects) {
    for (int m = 0; m < c->num_morphisms(); ++m)
      if (!c->is_identity(m) && c->inverse(m)) gaunt = false;
  }
  rep.ok = rep.isomorphism && rep.verticals_invertible && (!gaunt || rep.verticals_identities);
  if (!rep.ok && rep.detail.empty()) rep.detail = "comparison is not an isomorphism over the base";
  return rep;
}

FinFunctor unstraighten_map(const CatValuedFunctor& F, const CatValuedFunctor& G,
                            const std::vector<FinFunctor>& alpha, const Unstraightening& uf,
                            const Unstraightening& ug) {
  const FinCategory& C = *F.base;
  (void)G;
  FinFunctor m{uf.projection.source, ug.projection.source, {}, {}};
  for (auto [c, x] : uf.object_cells) m.on_objects.push_back(ug.object(c, alpha[c].on_objects[x]));
  const FinCategory& U = *uf.projection.source;
  for (int k = 0; k < U.num_morphisms(); ++k) {
    auto [g, phi] = uf.morphism_cells[k];
    int x = uf.object_cells[U.src[k]].second;
    m.on_morphisms.push_back(
        ug.morphism(g, alpha[C.src[g]].on_objects[x], alpha[C.tgt[g]].on_morphisms[phi]));
  }
  return m;
}

}  // namespace dblcat

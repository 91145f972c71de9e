#include "dblcat/double.hpp"

#include <algorithm>
#include <functional>

namespace dblcat {

void FinDoubleCategory::reset_tables() {
  h_comp.reset(h_names.size());
  v_comp.reset(v_names.size());
  s_hcomp.reset(s_names.size());
  s_vcomp.reset(s_names.size());
}

void FinDoubleCategory::index() {
  const std::size_t no = objects.size();
  h_out.assign(no, {});
  h_in.assign(no, {});
  v_out.assign(no, {});
  v_in.assign(no, {});
  for (int f = 0; f < num_h(); ++f) {
    h_out[h_src[f]].push_back(f);
    h_in[h_tgt[f]].push_back(f);
  }
  for (int f = 0; f < num_v(); ++f) {
    v_out[v_src[f]].push_back(f);
    v_in[v_tgt[f]].push_back(f);
  }
  s_by_left.assign(v_names.size(), {});
  s_by_right.assign(v_names.size(), {});
  s_by_top.assign(h_names.size(), {});
  s_by_bot.assign(h_names.size(), {});
  for (int s = 0; s < num_s(); ++s) {
    s_by_left[s_left[s]].push_back(s);
    s_by_right[s_right[s]].push_back(s);
    s_by_top[s_top[s]].push_back(s);
    s_by_bot[s_bot[s]].push_back(s);
  }
}

bool FinDoubleCategory::operator==(const FinDoubleCategory& o) const {
  return objects == o.objects && h_names == o.h_names && v_names == o.v_names &&
         s_names == o.s_names && h_src == o.h_src && h_tgt == o.h_tgt && h_id == o.h_id &&
         v_src == o.v_src && v_tgt == o.v_tgt && v_id == o.v_id && s_top == o.s_top &&
         s_bot == o.s_bot && s_left == o.s_left && s_right == o.s_right && s_hid == o.s_hid &&
         s_vid == o.s_vid && h_comp == o.h_comp && v_comp == o.v_comp &&
         s_hcomp == o.s_hcomp && s_vcomp == o.s_vcomp;
}

Report validate_marked(const MarkedDoubleCategory& m) {
  Report r;
  if (!m.base) {
    r.add("marked base", "missing");
    return r;
  }
  const FinDoubleCategory& d = *m.base;
  const bool vert = m.direction == MarkDirection::Vertical;
  const int n = vert ? d.num_v() : d.num_h();
  if (static_cast<int>(m.marked.size()) != n) {
    r.add("marking shape", "marking size differs from arrow count");
    return r;
  }
  for (int x = 0; x < d.num_objects(); ++x) {
    int id = vert ? d.v_id[x] : d.h_id[x];
    if (!m.marked[id]) r.add("identities marked", d.objects[x]);
  }
  return r;
}

std::string describe_square(const FinDoubleCategory& d, int s) {
  return d.s_names[s] + " [top " + d.h_names[d.s_top[s]] + ", bot " + d.h_names[d.s_bot[s]] +
         ", left " + d.v_names[d.s_left[s]] + ", right " + d.v_names[d.s_right[s]] + "]";
}

FinCategory horizontal_category(const FinDoubleCategory& d) {
  FinCategory c;
  c.objects = d.objects;
  c.morphisms = d.h_names;
  c.src = d.h_src;
  c.tgt = d.h_tgt;
  c.ident = d.h_id;
  c.comp = d.h_comp;
  c.index();
  return c;
}

FinCategory vertical_category(const FinDoubleCategory& d) {
  FinCategory c;
  c.objects = d.objects;
  c.morphisms = d.v_names;
  c.src = d.v_src;
  c.tgt = d.v_tgt;
  c.ident = d.v_id;
  c.comp = d.v_comp;
  c.index();
  return c;
}

FinFunctor horizontal_part(const DoubleFunctor& f) {
  return FinFunctor{std::make_shared<const FinCategory>(horizontal_category(*f.source)),
                    std::make_shared<const FinCategory>(horizontal_category(*f.target)), f.ob,
                    f.h};
}

FinFunctor vertical_part(const DoubleFunctor& f) {
  return FinFunctor{std::make_shared<const FinCategory>(vertical_category(*f.source)),
                    std::make_shared<const FinCategory>(vertical_category(*f.target)), f.ob,
                    f.v};
}

namespace {

bool in_range(const std::vector<int>& v, int n) {
  return std::all_of(v.begin(), v.end(), [n](int x) { return x >= 0 && x < n; });
}

}  // namespace

Report validate_double(const FinDoubleCategory& d) {
  Report r;
  const int no = d.num_objects(), nh = d.num_h(), nv = d.num_v(), ns = d.num_s();
  auto sz = [](const std::vector<int>& v) { return static_cast<int>(v.size()); };
  if (sz(d.h_src) != nh || sz(d.h_tgt) != nh || sz(d.h_id) != no || sz(d.v_src) != nv ||
      sz(d.v_tgt) != nv || sz(d.v_id) != no || sz(d.s_top) != ns || sz(d.s_bot) != ns ||
      sz(d.s_left) != ns || sz(d.s_right) != ns || sz(d.s_hid) != nv || sz(d.s_vid) != nh) {
    r.add("table shape", "cell arrays have inconsistent lengths");
    return r;
  }
  if (!in_range(d.h_src, no) || !in_range(d.h_tgt, no) || !in_range(d.v_src, no) ||
      !in_range(d.v_tgt, no) || !in_range(d.h_id, nh) || !in_range(d.v_id, nv) ||
      !in_range(d.s_top, nh) || !in_range(d.s_bot, nh) || !in_range(d.s_left, nv) ||
      !in_range(d.s_right, nv) || !in_range(d.s_hid, ns) || !in_range(d.s_vid, ns)) {
    r.add("table shape", "cell reference out of range");
    return r;
  }
  if (d.h_comp.range() != static_cast<std::size_t>(nh) ||
      d.v_comp.range() != static_cast<std::size_t>(nv) ||
      d.s_hcomp.range() != static_cast<std::size_t>(ns) ||
      d.s_vcomp.range() != static_cast<std::size_t>(ns)) {
    r.add("table shape", "composition table range differs from cell count");
    return r;
  }
  for (auto& v : validate_category(horizontal_category(d)).violations)
    r.add("horizontal: " + v.law, v.witness);
  for (auto& v : validate_category(vertical_category(d)).violations)
    r.add("vertical: " + v.law, v.witness);
  if (!r.ok()) return r;

  for (int s = 0; s < ns; ++s) {
    const int t = d.s_top[s], b = d.s_bot[s], l = d.s_left[s], rt = d.s_right[s];
    if (d.h_src[t] != d.v_src[l] || d.h_tgt[t] != d.v_src[rt] || d.h_src[b] != d.v_tgt[l] ||
        d.h_tgt[b] != d.v_tgt[rt])
      r.add("square boundary", describe_square(d, s));
  }
  for (int v = 0; v < nv; ++v) {
    int s = d.s_hid[v];
    if (d.s_left[s] != v || d.s_right[s] != v || d.s_top[s] != d.h_id[d.v_src[v]] ||
        d.s_bot[s] != d.h_id[d.v_tgt[v]])
      r.add("horizontal unit square boundary", d.v_names[v]);
  }
  for (int h = 0; h < nh; ++h) {
    int s = d.s_vid[h];
    if (d.s_top[s] != h || d.s_bot[s] != h || d.s_left[s] != d.v_id[d.h_src[h]] ||
        d.s_right[s] != d.v_id[d.h_tgt[h]])
      r.add("vertical unit square boundary", d.h_names[h]);
  }
  for (int x = 0; x < no; ++x)
    if (d.s_hid[d.v_id[x]] != d.s_vid[d.h_id[x]]) r.add("unit squares agree on objects", d.objects[x]);
  if (!r.ok()) return r;

  std::vector<std::vector<int>> by_left(nv), by_top(nh);
  for (int s = 0; s < ns; ++s) {
    by_left[d.s_left[s]].push_back(s);
    by_top[d.s_top[s]].push_back(s);
  }
  d.s_hcomp.for_each([&](int t, int s, int) {
    if (d.s_right[s] != d.s_left[t])
      r.add("horizontal pasting only on adjacent squares", d.s_names[s] + " | " + d.s_names[t]);
  });
  d.s_vcomp.for_each([&](int t, int s, int) {
    if (d.s_bot[s] != d.s_top[t])
      r.add("vertical pasting only on adjacent squares", d.s_names[s] + " / " + d.s_names[t]);
  });
  if (!r.ok()) return r;
  for (int s = 0; s < ns; ++s) {
    for (int t : by_left[d.s_right[s]]) {
      int u = d.shcomp(t, s);
      if (u < 0) {
        r.add("horizontal pasting total", d.s_names[s] + " | " + d.s_names[t]);
        continue;
      }
      if (d.s_left[u] != d.s_left[s] || d.s_right[u] != d.s_right[t] ||
          d.s_top[u] != d.hcomp(d.s_top[t], d.s_top[s]) ||
          d.s_bot[u] != d.hcomp(d.s_bot[t], d.s_bot[s]))
        r.add("horizontal pasting boundary", d.s_names[s] + " | " + d.s_names[t]);
    }
    for (int t : by_top[d.s_bot[s]]) {
      int u = d.svcomp(t, s);
      if (u < 0) {
        r.add("vertical pasting total", d.s_names[s] + " / " + d.s_names[t]);
        continue;
      }
      if (d.s_top[u] != d.s_top[s] || d.s_bot[u] != d.s_bot[t] ||
          d.s_left[u] != d.vcomp(d.s_left[t], d.s_left[s]) ||
          d.s_right[u] != d.vcomp(d.s_right[t], d.s_right[s]))
        r.add("vertical pasting boundary", d.s_names[s] + " / " + d.s_names[t]);
    }
    if (d.shcomp(s, d.s_hid[d.s_left[s]]) != s || d.shcomp(d.s_hid[d.s_right[s]], s) != s)
      r.add("horizontal pasting unit", d.s_names[s]);
    if (d.svcomp(s, d.s_vid[d.s_top[s]]) != s || d.svcomp(d.s_vid[d.s_bot[s]], s) != s)
      r.add("vertical pasting unit", d.s_names[s]);
  }
  if (!r.ok()) return r;
  d.v_comp.for_each([&](int g, int f, int gf) {
    if (d.svcomp(d.s_hid[g], d.s_hid[f]) != d.s_hid[gf])
      r.add("unit squares compose vertically", d.v_names[g] + " o " + d.v_names[f]);
  });
  d.h_comp.for_each([&](int g, int f, int gf) {
    if (d.shcomp(d.s_vid[g], d.s_vid[f]) != d.s_vid[gf])
      r.add("unit squares compose horizontally", d.h_names[g] + " o " + d.h_names[f]);
  });
  for (int s = 0; s < ns; ++s) {
    for (int t : by_left[d.s_right[s]]) {
      int st = d.shcomp(t, s);
      for (int u : by_left[d.s_right[t]])
        if (d.shcomp(u, st) != d.shcomp(d.shcomp(u, t), s))
          r.add("horizontal pasting associativity",
                d.s_names[s] + " | " + d.s_names[t] + " | " + d.s_names[u]);
    }
    for (int t : by_top[d.s_bot[s]]) {
      int st = d.svcomp(t, s);
      for (int u : by_top[d.s_bot[t]])
        if (d.svcomp(u, st) != d.svcomp(d.svcomp(u, t), s))
          r.add("vertical pasting associativity",
                d.s_names[s] + " / " + d.s_names[t] + " / " + d.s_names[u]);
    }
  }
  if (!r.ok()) return r;
  // Interchange on every 2x2 grid  a b / c e.
  for (int a = 0; a < ns; ++a)
    for (int b : by_left[d.s_right[a]])
      for (int c : by_top[d.s_bot[a]])
        for (int e : by_left[d.s_right[c]]) {
          if (d.s_top[e] != d.s_bot[b]) continue;
          int rows = d.svcomp(d.shcomp(e, c), d.shcomp(b, a));
          int cols = d.shcomp(d.svcomp(e, b), d.svcomp(c, a));
          if (rows != cols)
            r.add("interchange", d.s_names[a] + " " + d.s_names[b] + " / " + d.s_names[c] + " " +
                                     d.s_names[e]);
        }
  return r;
}

Report validate_double_functor(const DoubleFunctor& f) {
  Report r;
  if (!f.source || !f.target) {
    r.add("functor endpoints", "missing source or target");
    return r;
  }
  const FinDoubleCategory& a = *f.source;
  const FinDoubleCategory& b = *f.target;
  if (static_cast<int>(f.ob.size()) != a.num_objects() ||
      static_cast<int>(f.h.size()) != a.num_h() || static_cast<int>(f.v.size()) != a.num_v() ||
      static_cast<int>(f.s.size()) != a.num_s()) {
    r.add("functor shape", "map sizes differ from source");
    return r;
  }
  if (!in_range(f.ob, b.num_objects()) || !in_range(f.h, b.num_h()) ||
      !in_range(f.v, b.num_v()) || !in_range(f.s, b.num_s())) {
    r.add("functor shape", "image out of range");
    return r;
  }
  for (int x = 0; x < a.num_objects(); ++x) {
    if (f.h[a.h_id[x]] != b.h_id[f.ob[x]]) r.add("preserves horizontal identities", a.objects[x]);
    if (f.v[a.v_id[x]] != b.v_id[f.ob[x]]) r.add("preserves vertical identities", a.objects[x]);
  }
  for (int h = 0; h < a.num_h(); ++h) {
    if (b.h_src[f.h[h]] != f.ob[a.h_src[h]] || b.h_tgt[f.h[h]] != f.ob[a.h_tgt[h]])
      r.add("preserves horizontal endpoints", a.h_names[h]);
    if (f.s[a.s_vid[h]] != b.s_vid[f.h[h]]) r.add("preserves unit squares", a.h_names[h]);
  }
  for (int v = 0; v < a.num_v(); ++v) {
    if (b.v_src[f.v[v]] != f.ob[a.v_src[v]] || b.v_tgt[f.v[v]] != f.ob[a.v_tgt[v]])
      r.add("preserves vertical endpoints", a.v_names[v]);
    if (f.s[a.s_hid[v]] != b.s_hid[f.v[v]]) r.add("preserves unit squares", a.v_names[v]);
  }
  for (int s = 0; s < a.num_s(); ++s) {
    int t = f.s[s];
    if (b.s_top[t] != f.h[a.s_top[s]] || b.s_bot[t] != f.h[a.s_bot[s]] ||
        b.s_left[t] != f.v[a.s_left[s]] || b.s_right[t] != f.v[a.s_right[s]])
      r.add("preserves square boundaries", a.s_names[s]);
  }
  a.h_comp.for_each([&](int g, int h, int gh) {
    if (f.h[gh] != b.hcomp(f.h[g], f.h[h]))
      r.add("preserves horizontal composition", a.h_names[g] + " o " + a.h_names[h]);
  });
  a.v_comp.for_each([&](int g, int h, int gh) {
    if (f.v[gh] != b.vcomp(f.v[g], f.v[h]))
      r.add("preserves vertical composition", a.v_names[g] + " o " + a.v_names[h]);
  });
  a.s_hcomp.for_each([&](int t, int s, int ts) {
    if (f.s[ts] != b.shcomp(f.s[t], f.s[s]))
      r.add("preserves horizontal pasting", a.s_names[s] + " | " + a.s_names[t]);
  });
  a.s_vcomp.for_each([&](int t, int s, int ts) {
    if (f.s[ts] != b.svcomp(f.s[t], f.s[s]))
      r.add("preserves vertical pasting", a.s_names[s] + " / " + a.s_names[t]);
  });
  return r;
}

FinDoubleCategory boxtimes(const FinCategory& c, const FinCategory& d) {
  FinDoubleCategory r;
  const int nd = d.num_objects(), md = d.num_morphisms();
  const int nc = c.num_objects(), mc = c.num_morphisms();
  for (int x = 0; x < nc; ++x)
    for (int y = 0; y < nd; ++y) r.objects.push_back("(" + c.objects[x] + "," + d.objects[y] + ")");
  for (int f = 0; f < mc; ++f)
    for (int y = 0; y < nd; ++y) {
      r.h_names.push_back("(" + c.morphisms[f] + "," + d.objects[y] + ")");
      r.h_src.push_back(c.src[f] * nd + y);
      r.h_tgt.push_back(c.tgt[f] * nd + y);
      r.s_vid.push_back(f * md + d.ident[y]);
    }
  for (int x = 0; x < nc; ++x)
    for (int g = 0; g < md; ++g) {
      r.v_names.push_back("(" + c.objects[x] + "," + d.morphisms[g] + ")");
      r.v_src.push_back(x * nd + d.src[g]);
      r.v_tgt.push_back(x * nd + d.tgt[g]);
      r.s_hid.push_back(c.ident[x] * md + g);
    }
  for (int x = 0; x < nc; ++x)
    for (int y = 0; y < nd; ++y) {
      r.h_id.push_back(c.ident[x] * nd + y);
      r.v_id.push_back(x * md + d.ident[y]);
    }
  for (int f = 0; f < mc; ++f)
    for (int g = 0; g < md; ++g) {
      r.s_names.push_back("(" + c.morphisms[f] + "," + d.morphisms[g] + ")");
      r.s_top.push_back(f * nd + d.src[g]);
      r.s_bot.push_back(f * nd + d.tgt[g]);
      r.s_left.push_back(c.src[f] * md + g);
      r.s_right.push_back(c.tgt[f] * md + g);
    }
  r.reset_tables();
  c.comp.for_each([&](int g, int f, int gf) {
    for (int y = 0; y < nd; ++y) r.h_comp.set(g * nd + y, f * nd + y, gf * nd + y);
    for (int k = 0; k < md; ++k) r.s_hcomp.set(g * md + k, f * md + k, gf * md + k);
  });
  d.comp.for_each([&](int g, int f, int gf) {
    for (int x = 0; x < nc; ++x) r.v_comp.set(x * md + g, x * md + f, x * md + gf);
    for (int k = 0; k < mc; ++k) r.s_vcomp.set(k * md + g, k * md + f, k * md + gf);
  });
  r.index();
  return r;
}

FinDoubleCategory product(const FinDoubleCategory& a, const FinDoubleCategory& b) {
  FinDoubleCategory r;
  const int no = b.num_objects(), nh = b.num_h(), nv = b.num_v(), ns = b.num_s();
  auto nm = [](const std::string& x, const std::string& y) { return "(" + x + "," + y + ")"; };
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y = 0; y < no; ++y) {
      r.objects.push_back(nm(a.objects[x], b.objects[y]));
      r.h_id.push_back(a.h_id[x] * nh + b.h_id[y]);
      r.v_id.push_back(a.v_id[x] * nv + b.v_id[y]);
    }
  for (int f = 0; f < a.num_h(); ++f)
    for (int g = 0; g < nh; ++g) {
      r.h_names.push_back(nm(a.h_names[f], b.h_names[g]));
      r.h_src.push_back(a.h_src[f] * no + b.h_src[g]);
      r.h_tgt.push_back(a.h_tgt[f] * no + b.h_tgt[g]);
      r.s_vid.push_back(a.s_vid[f] * ns + b.s_vid[g]);
    }
  for (int f = 0; f < a.num_v(); ++f)
    for (int g = 0; g < nv; ++g) {
      r.v_names.push_back(nm(a.v_names[f], b.v_names[g]));
      r.v_src.push_back(a.v_src[f] * no + b.v_src[g]);
      r.v_tgt.push_back(a.v_tgt[f] * no + b.v_tgt[g]);
      r.s_hid.push_back(a.s_hid[f] * ns + b.s_hid[g]);
    }
  for (int s = 0; s < a.num_s(); ++s)
    for (int t = 0; t < ns; ++t) {
      r.s_names.push_back(nm(a.s_names[s], b.s_names[t]));
      r.s_top.push_back(a.s_top[s] * nh + b.s_top[t]);
      r.s_bot.push_back(a.s_bot[s] * nh + b.s_bot[t]);
      r.s_left.push_back(a.s_left[s] * nv + b.s_left[t]);
      r.s_right.push_back(a.s_right[s] * nv + b.s_right[t]);
    }
  r.reset_tables();
  auto lift_table = [](const CompTable& ta, const CompTable& tb, int n2, CompTable& out) {
    std::vector<std::array<int, 3>> eb;
    tb.for_each([&](int g, int f, int gf) { eb.push_back({g, f, gf}); });
    ta.for_each([&](int g, int f, int gf) {
      for (auto& e : eb) out.set(g * n2 + e[0], f * n2 + e[1], gf * n2 + e[2]);
    });
  };
  lift_table(a.h_comp, b.h_comp, nh, r.h_comp);
  lift_table(a.v_comp, b.v_comp, nv, r.v_comp);
  lift_table(a.s_hcomp, b.s_hcomp, ns, r.s_hcomp);
  lift_table(a.s_vcomp, b.s_vcomp, ns, r.s_vcomp);
  r.index();
  return r;
}

FinDoubleCategory grid(int m, int n) {
  if (m < 0 || n < 0) throw ContractError("grid: negative dimension");
  return boxtimes(chain(m), chain(n));
}

FinDoubleCategory terminal_double() { return grid(0, 0); }

namespace {

// Double category on a finite set of objects with at most one cell per
// boundary: h-arrows where hle holds, v-arrows where vle holds, squares where
// all four edges exist and sq holds. Compositions are forced.
FinDoubleCategory thin_double(const std::vector<std::string>& names,
                              const std::function<bool(int, int)>& hle,
                              const std::function<bool(int, int)>& vle,
                              const std::function<bool(int, int, int, int)>& sq) {
  FinDoubleCategory r;
  const int n = static_cast<int>(names.size());
  r.objects = names;
  std::vector<int> hix(n * n, -1), vix(n * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (hle(a, b)) {
        hix[a * n + b] = r.num_h();
        r.h_names.push_back(names[a] + "->" + names[b]);
        r.h_src.push_back(a);
        r.h_tgt.push_back(b);
      }
      if (vle(a, b)) {
        vix[a * n + b] = r.num_v();
        r.v_names.push_back(names[a] + "=>" + names[b]);
        r.v_src.push_back(a);
        r.v_tgt.push_back(b);
      }
    }
  for (int a = 0; a < n; ++a) {
    r.h_id.push_back(hix[a * n + a]);
    r.v_id.push_back(vix[a * n + a]);
  }
  std::unordered_map<std::uint64_t, int> six;
  auto skey = [n](int a, int b, int c, int d) {
    return ((static_cast<std::uint64_t>(a) * n + b) * n + c) * n + d;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (hix[a * n + b] < 0) continue;
      for (int c = 0; c < n; ++c) {
        if (vix[a * n + c] < 0) continue;
        for (int d = 0; d < n; ++d) {
          if (hix[c * n + d] < 0 || vix[b * n + d] < 0 || !sq(a, b, c, d)) continue;
          six[skey(a, b, c, d)] = r.num_s();
          r.s_names.push_back("[" + names[a] + "," + names[b] + ";" + names[c] + "," +
                              names[d] + "]");
          r.s_top.push_back(hix[a * n + b]);
          r.s_bot.push_back(hix[c * n + d]);
          r.s_left.push_back(vix[a * n + c]);
          r.s_right.push_back(vix[b * n + d]);
        }
      }
    }
  auto find_sq = [&](int a, int b, int c, int d) {
    auto it = six.find(skey(a, b, c, d));
    if (it == six.end()) throw ContractError("thin double category not closed under units");
    return it->second;
  };
  for (int v = 0; v < r.num_v(); ++v)
    r.s_hid.push_back(find_sq(r.v_src[v], r.v_src[v], r.v_tgt[v], r.v_tgt[v]));
  for (int h = 0; h < r.num_h(); ++h)
    r.s_vid.push_back(find_sq(r.h_src[h], r.h_tgt[h], r.h_src[h], r.h_tgt[h]));
  r.reset_tables();
  for (int f = 0; f < r.num_h(); ++f)
    for (int a = 0; a < n; ++a) {
      int g = hix[r.h_tgt[f] * n + a];
      if (g < 0) continue;
      int gf = hix[r.h_src[f] * n + a];
      if (gf < 0) throw ContractError("thin double category: horizontal order not transitive");
      r.h_comp.set(g, f, gf);
    }
  for (int f = 0; f < r.num_v(); ++f)
    for (int a = 0; a < n; ++a) {
      int g = vix[r.v_tgt[f] * n + a];
      if (g < 0) continue;
      int gf = vix[r.v_src[f] * n + a];
      if (gf < 0) throw ContractError("thin double category: vertical order not transitive");
      r.v_comp.set(g, f, gf);
    }
  r.index();
  for (int s = 0; s < r.num_s(); ++s) {
    const int a = r.h_src[r.s_top[s]], b = r.h_tgt[r.s_top[s]];
    const int c = r.h_src[r.s_bot[s]];
    for (int t : r.s_by_left[r.s_right[s]]) {
      const int e = r.h_tgt[r.s_top[t]], f = r.h_tgt[r.s_bot[t]];
      r.s_hcomp.set(t, s, find_sq(a, e, c, f));
    }
    for (int t : r.s_by_top[r.s_bot[s]]) {
      const int e = r.h_src[r.s_bot[t]], f = r.h_tgt[r.s_bot[t]];
      r.s_vcomp.set(t, s, find_sq(a, b, e, f));
    }
  }
  return r;
}

}  // namespace

FinDoubleCategory arrow_double(int n) {
  if (n < 0) throw ContractError("arrow_double: negative n");
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> ij;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      names.push_back(std::to_string(i) + std::to_string(j));
      ij.push_back({i, j});
    }
  auto hle = [&](int a, int b) { return ij[a].first == ij[b].first && ij[a].second <= ij[b].second; };
  auto vle = [&](int a, int b) { return ij[a].second == ij[b].second && ij[a].first <= ij[b].first; };
  auto sq = [](int, int, int, int) { return true; };
  return thin_double(names, hle, vle, sq);
}

FinDoubleCategory twisted_double(int n) { return op(arrow_double(n), 2); }

namespace {

std::pair<int, int> arrow_object(int n, int idx) {
  int k = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j, ++k)
      if (k == idx) return {i, j};
  throw ContractError("arrow_object: index out of range");
}

DoubleFunctor arrow_projection(int n, bool hor) {
  auto ar = std::make_shared<const FinDoubleCategory>(arrow_double(n));
  auto g = std::make_shared<const FinDoubleCategory>(hor ? grid(n, 0) : grid(0, n));
  std::vector<int> ob;
  for (int x = 0; x < ar->num_objects(); ++x) {
    auto [i, j] = arrow_object(n, x);
    ob.push_back(hor ? j : i);
  }
  ThinIndex tix(*g);
  auto f = thin_extend(ar, g, tix, ob);
  if (!f) throw ContractError("arrow projection failed to extend");
  return *f;
}

}  // namespace

DoubleFunctor pi_hor(int n) { return arrow_projection(n, true); }
DoubleFunctor pi_vert(int n) { return arrow_projection(n, false); }

FinCategory arrow_category(const FinCategory& c) {
  // Objects: morphisms of c. Morphisms f -> g: pairs (a, b) with b∘f = g∘a.
  FinCategory r;
  const int nm = c.num_morphisms();
  for (int f = 0; f < nm; ++f) r.objects.push_back(c.morphisms[f]);
  std::vector<std::array<int, 4>> cells;  // (f, g, a, b)
  std::unordered_map<std::uint64_t, std::vector<int>> by_pair;
  for (int f = 0; f < nm; ++f)
    for (int g = 0; g < nm; ++g)
      for (int a : c.hom(c.src[f], c.src[g]))
        for (int b : c.hom(c.tgt[f], c.tgt[g]))
          if (c.compose(b, f) == c.compose(g, a)) {
            int id = r.num_morphisms();
            cells.push_back({f, g, a, b});
            r.morphisms.push_back("(" + c.morphisms[a] + "," + c.morphisms[b] + "):" +
                                  c.morphisms[f] + "->" + c.morphisms[g]);
            r.src.push_back(f);
            r.tgt.push_back(g);
            by_pair[pair_key(a, b)].push_back(id);
          }
  r.ident.assign(nm, -1);
  for (int k = 0; k < r.num_morphisms(); ++k) {
    auto [f, g, a, b] = cells[k];
    if (f == g && a == c.ident[c.src[f]] && b == c.ident[c.tgt[f]]) r.ident[f] = k;
  }
  r.comp.reset(r.morphisms.size());
  r.index();
  for (int k = 0; k < r.num_morphisms(); ++k)
    for (int l : r.out[r.tgt[k]]) {
      int a = c.compose(cells[l][2], cells[k][2]);
      int b = c.compose(cells[l][3], cells[k][3]);
      for (int m : by_pair[pair_key(a, b)])
        if (r.src[m] == r.src[k] && r.tgt[m] == r.tgt[l]) r.comp.set(l, k, m);
    }
  return r;
}

FinDoubleCategory op(const FinDoubleCategory& d, int k) {
  if (k != 1 && k != 2) throw ContractError("op: direction must be 1 or 2");
  FinDoubleCategory r = d;
  if (k == 1) {
    std::swap(r.h_src, r.h_tgt);
    std::swap(r.s_left, r.s_right);
    r.h_comp.reset(d.h_names.size());
    d.h_comp.for_each([&](int g, int f, int gf) { r.h_comp.set(f, g, gf); });
    r.s_hcomp.reset(d.s_names.size());
    d.s_hcomp.for_each([&](int t, int s, int ts) { r.s_hcomp.set(s, t, ts); });
  } else {
    std::swap(r.v_src, r.v_tgt);
    std::swap(r.s_top, r.s_bot);
    r.v_comp.reset(d.v_names.size());
    d.v_comp.for_each([&](int g, int f, int gf) { r.v_comp.set(f, g, gf); });
    r.s_vcomp.reset(d.s_names.size());
    d.s_vcomp.for_each([&](int t, int s, int ts) { r.s_vcomp.set(s, t, ts); });
  }
  r.index();
  return r;
}

FinDoubleCategory reverse(const FinDoubleCategory& d) {
  FinDoubleCategory r;
  r.objects = d.objects;
  r.h_names = d.v_names;
  r.v_names = d.h_names;
  r.s_names = d.s_names;
  r.h_src = d.v_src;
  r.h_tgt = d.v_tgt;
  r.h_id = d.v_id;
  r.v_src = d.h_src;
  r.v_tgt = d.h_tgt;
  r.v_id = d.h_id;
  r.s_top = d.s_left;
  r.s_bot = d.s_right;
  r.s_left = d.s_top;
  r.s_right = d.s_bot;
  r.s_hid = d.s_vid;
  r.s_vid = d.s_hid;
  r.h_comp = d.v_comp;
  r.v_comp = d.h_comp;
  r.s_hcomp = d.s_vcomp;
  r.s_vcomp = d.s_hcomp;
  r.index();
  return r;
}

DoubleFunctor op(const DoubleFunctor& f, int k) {
  return DoubleFunctor{std::make_shared<const FinDoubleCategory>(op(*f.source, k)),
                       std::make_shared<const FinDoubleCategory>(op(*f.target, k)), f.ob, f.h, f.v,
                       f.s};
}

DoubleFunctor reverse(const DoubleFunctor& f) {
  return DoubleFunctor{std::make_shared<const FinDoubleCategory>(reverse(*f.source)),
                       std::make_shared<const FinDoubleCategory>(reverse(*f.target)), f.ob, f.v,
                       f.h, f.s};
}

bool is_gaunt(const FinDoubleCategory& d) {
  for (int f = 0; f < d.num_h(); ++f) {
    if (d.h_is_id(f)) continue;
    for (int g : d.h_out[d.h_tgt[f]])
      if (d.h_tgt[g] == d.h_src[f] && d.hcomp(g, f) == d.h_id[d.h_src[f]] &&
          d.hcomp(f, g) == d.h_id[d.h_tgt[f]])
        return false;
  }
  for (int f = 0; f < d.num_v(); ++f) {
    if (d.v_is_id(f)) continue;
    for (int g : d.v_out[d.v_tgt[f]])
      if (d.v_tgt[g] == d.v_src[f] && d.vcomp(g, f) == d.v_id[d.v_src[f]] &&
          d.vcomp(f, g) == d.v_id[d.v_tgt[f]])
        return false;
  }
  return true;
}

DoubleFunctor identity_double_functor(DoublePtr d) {
  DoubleFunctor f{d, d, {}, {}, {}, {}};
  for (int i = 0; i < d->num_objects(); ++i) f.ob.push_back(i);
  for (int i = 0; i < d->num_h(); ++i) f.h.push_back(i);
  for (int i = 0; i < d->num_v(); ++i) f.v.push_back(i);
  for (int i = 0; i < d->num_s(); ++i) f.s.push_back(i);
  return f;
}

DoubleFunctor compose(const DoubleFunctor& g, const DoubleFunctor& f) {
  DoubleFunctor r{f.source, g.target, {}, {}, {}, {}};
  for (int x : f.ob) r.ob.push_back(g.ob[x]);
  for (int x : f.h) r.h.push_back(g.h[x]);
  for (int x : f.v) r.v.push_back(g.v[x]);
  for (int x : f.s) r.s.push_back(g.s[x]);
  return r;
}

DoubleFunctor to_terminal(DoublePtr d) {
  auto t = std::make_shared<const FinDoubleCategory>(terminal_double());
  return DoubleFunctor{d,
                       t,
                       std::vector<int>(d->num_objects(), 0),
                       std::vector<int>(d->num_h(), 0),
                       std::vector<int>(d->num_v(), 0),
                       std::vector<int>(d->num_s(), 0)};
}

DoubleFunctor boxtimes(const FinFunctor& f, const FinFunctor& g, DoublePtr source,
                       DoublePtr target) {
  const int nd = g.source->num_objects(), md = g.source->num_morphisms();
  const int nd2 = g.target->num_objects(), md2 = g.target->num_morphisms();
  DoubleFunctor r{source, target, {}, {}, {}, {}};
  for (int x = 0; x < f.source->num_objects(); ++x)
    for (int y = 0; y < nd; ++y) r.ob.push_back(f.on_objects[x] * nd2 + g.on_objects[y]);
  for (int a = 0; a < f.source->num_morphisms(); ++a)
    for (int y = 0; y < nd; ++y) r.h.push_back(f.on_morphisms[a] * nd2 + g.on_objects[y]);
  for (int x = 0; x < f.source->num_objects(); ++x)
    for (int b = 0; b < md; ++b) r.v.push_back(f.on_objects[x] * md2 + g.on_morphisms[b]);
  for (int a = 0; a < f.source->num_morphisms(); ++a)
    for (int b = 0; b < md; ++b) r.s.push_back(f.on_morphisms[a] * md2 + g.on_morphisms[b]);
  return r;
}

DoubleFunctor product_projection(DoublePtr a, DoublePtr b, DoublePtr ab, int factor) {
  DoubleFunctor r{ab, factor == 0 ? a : b, {}, {}, {}, {}};
  auto pick = [&](int idx, int nb) { return factor == 0 ? idx / nb : idx % nb; };
  for (int x = 0; x < ab->num_objects(); ++x) r.ob.push_back(pick(x, b->num_objects()));
  for (int x = 0; x < ab->num_h(); ++x) r.h.push_back(pick(x, b->num_h()));
  for (int x = 0; x < ab->num_v(); ++x) r.v.push_back(pick(x, b->num_v()));
  for (int x = 0; x < ab->num_s(); ++x) r.s.push_back(pick(x, b->num_s()));
  return r;
}

Pullback pullback(const DoubleFunctor& p, const DoubleFunctor& g) {
  const FinDoubleCategory& D = *p.source;
  const FinDoubleCategory& C2 = *g.source;
  auto r = std::make_shared<FinDoubleCategory>();
  std::vector<int> po, ph, pv, ps, qo, qh, qv, qs;  // components (C', D)
  std::unordered_map<std::uint64_t, int> io, ih, iv, is;
  auto nm = [](const std::string& x, const std::string& y) { return "(" + x + "," + y + ")"; };
  {
    std::vector<std::vector<int>> byo(p.target->num_objects());
    for (int d = 0; d < D.num_objects(); ++d) byo[p.ob[d]].push_back(d);
    for (int c = 0; c < C2.num_objects(); ++c)
      for (int d : byo[g.ob[c]]) {
        io[pair_key(c, d)] = static_cast<int>(po.size());
        po.push_back(c);
        qo.push_back(d);
        r->objects.push_back(nm(C2.objects[c], D.objects[d]));
      }
  }
  {
    std::vector<std::vector<int>> by(p.target->num_h());
    for (int d = 0; d < D.num_h(); ++d) by[p.h[d]].push_back(d);
    for (int c = 0; c < C2.num_h(); ++c)
      for (int d : by[g.h[c]]) {
        ih[pair_key(c, d)] = static_cast<int>(ph.size());
        ph.push_back(c);
        qh.push_back(d);
        r->h_names.push_back(nm(C2.h_names[c], D.h_names[d]));
      }
  }
  {
    std::vector<std::vector<int>> by(p.target->num_v());
    for (int d = 0; d < D.num_v(); ++d) by[p.v[d]].push_back(d);
    for (int c = 0; c < C2.num_v(); ++c)
      for (int d : by[g.v[c]]) {
        iv[pair_key(c, d)] = static_cast<int>(pv.size());
        pv.push_back(c);
        qv.push_back(d);
        r->v_names.push_back(nm(C2.v_names[c], D.v_names[d]));
      }
  }
  {
    std::vector<std::vector<int>> by(p.target->num_s());
    for (int d = 0; d < D.num_s(); ++d) by[p.s[d]].push_back(d);
    for (int c = 0; c < C2.num_s(); ++c)
      for (int d : by[g.s[c]]) {
        is[pair_key(c, d)] = static_cast<int>(ps.size());
        ps.push_back(c);
        qs.push_back(d);
        r->s_names.push_back(nm(C2.s_names[c], D.s_names[d]));
      }
  }
  auto at = [](const std::unordered_map<std::uint64_t, int>& m, int a, int b) {
    auto it = m.find(pair_key(a, b));
    if (it == m.end()) throw ContractError("pullback: inconsistent input functors");
    return it->second;
  };
  for (std::size_t i = 0; i < po.size(); ++i) {
    r->h_id.push_back(at(ih, C2.h_id[po[i]], D.h_id[qo[i]]));
    r->v_id.push_back(at(iv, C2.v_id[po[i]], D.v_id[qo[i]]));
  }
  for (std::size_t i = 0; i < ph.size(); ++i) {
    r->h_src.push_back(at(io, C2.h_src[ph[i]], D.h_src[qh[i]]));
    r->h_tgt.push_back(at(io, C2.h_tgt[ph[i]], D.h_tgt[qh[i]]));
    r->s_vid.push_back(at(is, C2.s_vid[ph[i]], D.s_vid[qh[i]]));
  }
  for (std::size_t i = 0; i < pv.size(); ++i) {
    r->v_src.push_back(at(io, C2.v_src[pv[i]], D.v_src[qv[i]]));
    r->v_tgt.push_back(at(io, C2.v_tgt[pv[i]], D.v_tgt[qv[i]]));
    r->s_hid.push_back(at(is, C2.s_hid[pv[i]], D.s_hid[qv[i]]));
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    r->s_top.push_back(at(ih, C2.s_top[ps[i]], D.s_top[qs[i]]));
    r->s_bot.push_back(at(ih, C2.s_bot[ps[i]], D.s_bot[qs[i]]));
    r->s_left.push_back(at(iv, C2.s_left[ps[i]], D.s_left[qs[i]]));
    r->s_right.push_back(at(iv, C2.s_right[ps[i]], D.s_right[qs[i]]));
  }
  r->reset_tables();
  r->index();
  for (int f = 0; f < r->num_h(); ++f)
    for (int h : r->h_out[r->h_tgt[f]])
      r->h_comp.set(h, f, at(ih, C2.hcomp(ph[h], ph[f]), D.hcomp(qh[h], qh[f])));
  for (int f = 0; f < r->num_v(); ++f)
    for (int h : r->v_out[r->v_tgt[f]])
      r->v_comp.set(h, f, at(iv, C2.vcomp(pv[h], pv[f]), D.vcomp(qv[h], qv[f])));
  for (int s = 0; s < r->num_s(); ++s) {
    for (int t : r->s_by_left[r->s_right[s]])
      r->s_hcomp.set(t, s, at(is, C2.shcomp(ps[t], ps[s]), D.shcomp(qs[t], qs[s])));
    for (int t : r->s_by_top[r->s_bot[s]])
      r->s_vcomp.set(t, s, at(is, C2.svcomp(ps[t], ps[s]), D.svcomp(qs[t], qs[s])));
  }
  DoublePtr total = r;
  Pullback out{total, DoubleFunctor{total, g.source, po, ph, pv, ps},
               DoubleFunctor{total, p.source, qo, qh, qv, qs}};
  return out;
}

ThinIndex::ThinIndex(const FinDoubleCategory& d) : nobj(d.num_objects()) {
  for (int f = 0; f < d.num_h(); ++f)
    if (!h.emplace(pair_key(d.h_src[f], d.h_tgt[f]), f).second) thin = false;
  for (int f = 0; f < d.num_v(); ++f)
    if (!v.emplace(pair_key(d.v_src[f], d.v_tgt[f]), f).second) thin = false;
  const std::uint64_t n = static_cast<std::uint64_t>(nobj);
  for (int x = 0; x < d.num_s(); ++x) {
    std::uint64_t k = ((static_cast<std::uint64_t>(d.h_src[d.s_top[x]]) * n +
                        static_cast<std::uint64_t>(d.h_tgt[d.s_top[x]])) *
                           n +
                       static_cast<std::uint64_t>(d.h_src[d.s_bot[x]])) *
                          n +
                      static_cast<std::uint64_t>(d.h_tgt[d.s_bot[x]]);
    if (!s.emplace(k, x).second) thin = false;
  }
}

int ThinIndex::h_arrow(int a, int b) const {
  auto it = h.find(pair_key(a, b));
  return it == h.end() ? -1 : it->second;
}

int ThinIndex::v_arrow(int a, int b) const {
  auto it = v.find(pair_key(a, b));
  return it == v.end() ? -1 : it->second;
}

int ThinIndex::square(int a, int b, int c, int d) const {
  const std::uint64_t n = static_cast<std::uint64_t>(nobj);
  std::uint64_t k = ((static_cast<std::uint64_t>(a) * n + b) * n + c) * n + d;
  auto it = s.find(k);
  return it == s.end() ? -1 : it->second;
}

std::optional<DoubleFunctor> thin_extend(DoublePtr src, DoublePtr tgt, const ThinIndex& tix,
                                         const std::vector<int>& on_objects) {
  const FinDoubleCategory& a = *src;
  DoubleFunctor f{src, tgt, on_objects, {}, {}, {}};
  for (int h = 0; h < a.num_h(); ++h) {
    int x = tix.h_arrow(on_objects[a.h_src[h]], on_objects[a.h_tgt[h]]);
    if (x < 0) return std::nullopt;
    f.h.push_back(x);
  }
  for (int v = 0; v < a.num_v(); ++v) {
    int x = tix.v_arrow(on_objects[a.v_src[v]], on_objects[a.v_tgt[v]]);
    if (x < 0) return std::nullopt;
    f.v.push_back(x);
  }
  for (int s = 0; s < a.num_s(); ++s) {
    int x = tix.square(on_objects[a.h_src[a.s_top[s]]], on_objects[a.h_tgt[a.s_top[s]]],
                       on_objects[a.h_src[a.s_bot[s]]], on_objects[a.h_tgt[a.s_bot[s]]]);
    if (x < 0) return std::nullopt;
    f.s.push_back(x);
  }
  return f;
}

}  // namespace dblcat

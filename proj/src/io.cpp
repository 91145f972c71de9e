#include "dblcat/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dblcat {

namespace {

template <class Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const ContractError& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

const json& array_field(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) throw SchemaError(std::string("field '") + key + "' is not an array");
  return a;
}

int ref(const json& v, int n, const std::string& what) {
  if (!v.is_number_integer()) throw SchemaError(what + ": identifier is not an integer");
  int x = v.get<int>();
  if (x < 0 || x >= n) throw SchemaError(what + ": unknown identifier " + std::to_string(x));
  return x;
}

// Entries of an identifier array, reordered by id; ids must be 0..n-1.
std::vector<json> by_id(const json& arr, const std::string& what) {
  const int n = static_cast<int>(arr.size());
  std::vector<json> r(n);
  std::vector<char> seen(n, 0);
  for (const json& e : arr) {
    int id = ref(field(e, "id"), n, what);
    if (seen[id]) throw SchemaError(what + ": duplicate identifier " + std::to_string(id));
    seen[id] = 1;
    r[id] = e;
  }
  return r;
}

std::string name_of(const json& e) {
  const json& v = field(e, "name");
  if (!v.is_string()) throw SchemaError("name is not a string");
  return v.get<std::string>();
}

// [[x, image], ...] with every source id exactly once.
std::vector<int> decode_map(const json& arr, int n, int m, const std::string& what) {
  if (!arr.is_array()) throw SchemaError(what + ": map is not an array");
  std::vector<int> r(n, -1);
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2) throw SchemaError(what + ": map entry is not a pair");
    int x = ref(e[0], n, what);
    if (r[x] >= 0) throw SchemaError(what + ": duplicate entry for " + std::to_string(x));
    r[x] = ref(e[1], m, what);
  }
  for (int x = 0; x < n; ++x)
    if (r[x] < 0) throw SchemaError(what + ": no image for " + std::to_string(x));
  return r;
}

json encode_map(const std::vector<int>& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) a.push_back({static_cast<int>(i), m[i]});
  return a;
}

json encode_table(const CompTable& t) {
  json a = json::array();
  t.for_each([&](int g, int f, int gf) { a.push_back({g, f, gf}); });
  return a;
}

void decode_table(const json& arr, CompTable& t, int n, const std::string& what) {
  if (!arr.is_array()) throw SchemaError(what + " is not an array");
  t.reset(n);
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 3) throw SchemaError(what + ": entry is not a triple");
    int g = ref(e[0], n, what), f = ref(e[1], n, what), gf = ref(e[2], n, what);
    if (t.get(g, f) >= 0) throw SchemaError(what + ": duplicate entry for (" + std::to_string(g) + "," + std::to_string(f) + ")");
    t.set(g, f, gf);
  }
}

CategoryPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

}  // namespace

json encode(const FinCategory& c) {
  json j;
  j["objects"] = json::array();
  for (int x = 0; x < c.num_objects(); ++x)
    j["objects"].push_back({{"id", x}, {"name", c.objects[x]}, {"identity", c.ident[x]}});
  j["morphisms"] = json::array();
  for (int f = 0; f < c.num_morphisms(); ++f)
    j["morphisms"].push_back({{"id", f}, {"name", c.morphisms[f]}, {"source", c.src[f]}, {"target", c.tgt[f]}});
  j["composition"] = encode_table(c.comp);
  return j;
}

FinCategory decode_category(const json& j) {
  return guarded("category", [&] {
    FinCategory c;
    auto obs = by_id(array_field(j, "objects"), "category objects");
    auto mors = by_id(array_field(j, "morphisms"), "category morphisms");
    const int no = static_cast<int>(obs.size()), nm = static_cast<int>(mors.size());
    for (auto& o : obs) {
      c.objects.push_back(name_of(o));
      c.ident.push_back(ref(field(o, "identity"), nm, "identity of " + c.objects.back()));
    }
    for (auto& m : mors) {
      c.morphisms.push_back(name_of(m));
      c.src.push_back(ref(field(m, "source"), no, "source of " + c.morphisms.back()));
      c.tgt.push_back(ref(field(m, "target"), no, "target of " + c.morphisms.back()));
    }
    decode_table(array_field(j, "composition"), c.comp, nm, "category composition");
    c.index();
    return c;
  });
}

json encode(const FinFunctor& f) {
  return {{"source", encode(*f.source)},
          {"target", encode(*f.target)},
          {"objects", encode_map(f.on_objects)},
          {"morphisms", encode_map(f.on_morphisms)}};
}

namespace {
FinFunctor decode_functor_between(const json& j, CategoryPtr s, CategoryPtr t) {
  FinFunctor f{s, t, {}, {}};
  f.on_objects = decode_map(field(j, "objects"), s->num_objects(), t->num_objects(), "functor objects");
  f.on_morphisms = decode_map(field(j, "morphisms"), s->num_morphisms(), t->num_morphisms(), "functor morphisms");
  return f;
}
}  // namespace

FinFunctor decode_functor(const json& j) {
  return guarded("functor", [&] {
    return decode_functor_between(j, share(decode_category(field(j, "source"))),
                                  share(decode_category(field(j, "target"))));
  });
}

json encode(const FinDoubleCategory& d) {
  json j;
  j["objects"] = json::array();
  for (int x = 0; x < d.num_objects(); ++x)
    j["objects"].push_back({{"id", x}, {"name", d.objects[x]}, {"h_identity", d.h_id[x]}, {"v_identity", d.v_id[x]}});
  j["h_arrows"] = json::array();
  for (int f = 0; f < d.num_h(); ++f)
    j["h_arrows"].push_back({{"id", f}, {"name", d.h_names[f]}, {"source", d.h_src[f]}, {"target", d.h_tgt[f]},
                             {"square_identity", d.s_vid[f]}});
  j["v_arrows"] = json::array();
  for (int v = 0; v < d.num_v(); ++v)
    j["v_arrows"].push_back({{"id", v}, {"name", d.v_names[v]}, {"source", d.v_src[v]}, {"target", d.v_tgt[v]},
                             {"square_identity", d.s_hid[v]}});
  j["squares"] = json::array();
  for (int s = 0; s < d.num_s(); ++s)
    j["squares"].push_back({{"id", s}, {"name", d.s_names[s]}, {"top", d.s_top[s]}, {"bottom", d.s_bot[s]},
                            {"left", d.s_left[s]}, {"right", d.s_right[s]}});
  j["h_composition"] = encode_table(d.h_comp);
  j["v_composition"] = encode_table(d.v_comp);
  j["square_h_composition"] = encode_table(d.s_hcomp);
  j["square_v_composition"] = encode_table(d.s_vcomp);
  return j;
}

FinDoubleCategory decode_double(const json& j) {
  return guarded("double category", [&] {
    FinDoubleCategory d;
    auto obs = by_id(array_field(j, "objects"), "objects");
    auto hs = by_id(array_field(j, "h_arrows"), "h-arrows");
    auto vs = by_id(array_field(j, "v_arrows"), "v-arrows");
    auto ss = by_id(array_field(j, "squares"), "squares");
    const int no = static_cast<int>(obs.size()), nh = static_cast<int>(hs.size()), nv = static_cast<int>(vs.size()),
              ns = static_cast<int>(ss.size());
    for (auto& o : obs) {
      d.objects.push_back(name_of(o));
      d.h_id.push_back(ref(field(o, "h_identity"), nh, "h-identity"));
      d.v_id.push_back(ref(field(o, "v_identity"), nv, "v-identity"));
    }
    for (auto& h : hs) {
      d.h_names.push_back(name_of(h));
      d.h_src.push_back(ref(field(h, "source"), no, "h-arrow source"));
      d.h_tgt.push_back(ref(field(h, "target"), no, "h-arrow target"));
      d.s_vid.push_back(ref(field(h, "square_identity"), ns, "square identity"));
    }
    for (auto& v : vs) {
      d.v_names.push_back(name_of(v));
      d.v_src.push_back(ref(field(v, "source"), no, "v-arrow source"));
      d.v_tgt.push_back(ref(field(v, "target"), no, "v-arrow target"));
      d.s_hid.push_back(ref(field(v, "square_identity"), ns, "square identity"));
    }
    for (auto& s : ss) {
      d.s_names.push_back(name_of(s));
      d.s_top.push_back(ref(field(s, "top"), nh, "square top"));
      d.s_bot.push_back(ref(field(s, "bottom"), nh, "square bottom"));
      d.s_left.push_back(ref(field(s, "left"), nv, "square left"));
      d.s_right.push_back(ref(field(s, "right"), nv, "square right"));
    }
    decode_table(array_field(j, "h_composition"), d.h_comp, nh, "h-composition");
    decode_table(array_field(j, "v_composition"), d.v_comp, nv, "v-composition");
    decode_table(array_field(j, "square_h_composition"), d.s_hcomp, ns, "square h-composition");
    decode_table(array_field(j, "square_v_composition"), d.s_vcomp, ns, "square v-composition");
    d.index();
    return d;
  });
}

json encode(const MarkedDoubleCategory& m) {
  json marked = json::array();
  for (std::size_t i = 0; i < m.marked.size(); ++i)
    if (m.marked[i]) marked.push_back(static_cast<int>(i));
  return {{"double", encode(*m.base)},
          {"direction", m.direction == MarkDirection::Vertical ? "vertical" : "horizontal"},
          {"marked", marked}};
}

MarkedDoubleCategory decode_marked(const json& j) {
  return guarded("marked double category", [&] {
    MarkedDoubleCategory m;
    m.base = std::make_shared<const FinDoubleCategory>(decode_double(field(j, "double")));
    const std::string dir = field(j, "direction").get<std::string>();
    if (dir != "vertical" && dir != "horizontal") throw SchemaError("direction must be vertical or horizontal");
    m.direction = dir == "vertical" ? MarkDirection::Vertical : MarkDirection::Horizontal;
    const int n = m.direction == MarkDirection::Vertical ? m.base->num_v() : m.base->num_h();
    m.marked.assign(n, false);
    for (const json& v : array_field(j, "marked")) m.marked[ref(v, n, "marked arrow")] = true;
    return m;
  });
}

json encode(const DoubleFunctor& f) {
  return {{"source", encode(*f.source)}, {"target", encode(*f.target)}, {"objects", encode_map(f.ob)},
          {"h_arrows", encode_map(f.h)},  {"v_arrows", encode_map(f.v)},  {"squares", encode_map(f.s)}};
}

DoubleFunctor decode_double_functor(const json& j) {
  return guarded("double functor", [&] {
    DoubleFunctor f;
    f.source = std::make_shared<const FinDoubleCategory>(decode_double(field(j, "source")));
    f.target = std::make_shared<const FinDoubleCategory>(decode_double(field(j, "target")));
    const auto &S = *f.source, &T = *f.target;
    f.ob = decode_map(field(j, "objects"), S.num_objects(), T.num_objects(), "object map");
    f.h = decode_map(field(j, "h_arrows"), S.num_h(), T.num_h(), "h-arrow map");
    f.v = decode_map(field(j, "v_arrows"), S.num_v(), T.num_v(), "v-arrow map");
    f.s = decode_map(field(j, "squares"), S.num_s(), T.num_s(), "square map");
    return f;
  });
}

json encode(const FinTwoCategory& t) {
  const int n = t.num_objects();
  json j;
  j["objects"] = json::array();
  for (int x = 0; x < n; ++x) j["objects"].push_back({{"id", x}, {"name", t.objects[x]}, {"unit", t.unit[x]}});
  j["homs"] = json::array();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) j["homs"].push_back({{"source", x}, {"target", y}, {"category", encode(t.hom(x, y))}});
  json c1 = json::array(), c2 = json::array();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int a = t.hom(x, y).num_objects(), b = t.hom(y, z).num_objects();
        for (int g = 0; g < b; ++g)
          for (int f = 0; f < a; ++f) c1.push_back({x, y, z, g, f, t.compose1(x, y, z, g, f)});
        const int ma = t.hom(x, y).num_morphisms(), mb = t.hom(y, z).num_morphisms();
        for (int g = 0; g < mb; ++g)
          for (int f = 0; f < ma; ++f) c2.push_back({x, y, z, g, f, t.compose2(x, y, z, g, f)});
      }
  j["composition_1"] = c1;
  j["composition_2"] = c2;
  return j;
}

FinTwoCategory decode_two_category(const json& j) {
  return guarded("2-category", [&] {
    FinTwoCategory t;
    auto obs = by_id(array_field(j, "objects"), "2-category objects");
    const int n = static_cast<int>(obs.size());
    for (auto& o : obs) t.objects.push_back(name_of(o));
    t.homs.assign(n * n, nullptr);
    for (const json& h : array_field(j, "homs")) {
      int x = ref(field(h, "source"), n, "hom source"), y = ref(field(h, "target"), n, "hom target");
      if (t.homs[x * n + y]) throw SchemaError("duplicate hom block");
      t.homs[x * n + y] = share(decode_category(field(h, "category")));
    }
    for (int i = 0; i < n * n; ++i)
      if (!t.homs[i]) throw SchemaError("missing hom block " + t.objects[i / n] + "," + t.objects[i % n]);
    for (int x = 0; x < n; ++x) t.unit.push_back(ref(field(obs[x], "unit"), t.hom(x, x).num_objects(), "unit"));
    auto fill = [&](const char* key, std::vector<std::vector<int>>& tab, bool cells) {
      tab.assign(n * n * n, {});
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            int a = cells ? t.hom(x, y).num_objects() : t.hom(x, y).num_morphisms();
            int b = cells ? t.hom(y, z).num_objects() : t.hom(y, z).num_morphisms();
            tab[(x * n + y) * n + z].assign(a * b, -1);
          }
      for (const json& e : array_field(j, key)) {
        if (!e.is_array() || e.size() != 6) throw SchemaError(std::string(key) + ": entry is not a 6-tuple");
        int x = ref(e[0], n, key), y = ref(e[1], n, key), z = ref(e[2], n, key);
        const FinCategory &A = t.hom(x, y), &B = t.hom(y, z), &AB = t.hom(x, z);
        int a = cells ? A.num_objects() : A.num_morphisms(), b = cells ? B.num_objects() : B.num_morphisms();
        int ab = cells ? AB.num_objects() : AB.num_morphisms();
        int g = ref(e[3], b, key), f = ref(e[4], a, key), gf = ref(e[5], ab, key);
        tab[(x * n + y) * n + z][g * a + f] = gf;
      }
      for (auto& row : tab)
        for (int v : row)
          if (v < 0) throw SchemaError(std::string(key) + ": incomplete table");
    };
    fill("composition_1", t.comp1, true);
    fill("composition_2", t.comp2, false);
    return t;
  });
}

json encode(const TwoFunctor& f) {
  const int n = f.source->num_objects();
  json homs = json::array();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      homs.push_back({{"source", x},
                      {"target", y},
                      {"objects", encode_map(f.hom(x, y).on_objects)},
                      {"morphisms", encode_map(f.hom(x, y).on_morphisms)}});
  return {{"source", encode(*f.source)}, {"target", encode(*f.target)}, {"objects", encode_map(f.ob)}, {"homs", homs}};
}

TwoFunctor decode_two_functor(const json& j) {
  return guarded("2-functor", [&] {
    TwoFunctor f;
    f.source = std::make_shared<const FinTwoCategory>(decode_two_category(field(j, "source")));
    f.target = std::make_shared<const FinTwoCategory>(decode_two_category(field(j, "target")));
    const int n = f.source->num_objects(), m = f.target->num_objects();
    f.ob = decode_map(field(j, "objects"), n, m, "2-functor objects");
    f.homs.assign(n * n, FinFunctor{});
    std::vector<char> seen(n * n, 0);
    for (const json& h : array_field(j, "homs")) {
      int x = ref(field(h, "source"), n, "hom source"), y = ref(field(h, "target"), n, "hom target");
      if (seen[x * n + y]) throw SchemaError("duplicate hom functor");
      seen[x * n + y] = 1;
      f.homs[x * n + y] = decode_functor_between(h, f.source->homs[x * n + y], f.target->homs[f.ob[x] * m + f.ob[y]]);
    }
    for (char s : seen)
      if (!s) throw SchemaError("missing hom functor");
    return f;
  });
}

json encode(const CatValuedFunctor& F) {
  const FinCategory& C = *F.base;
  json values = json::array(), transports = json::array();
  for (int c = 0; c < C.num_objects(); ++c) values.push_back({{"object", c}, {"category", encode(*F.on_objects[c])}});
  for (int g = 0; g < C.num_morphisms(); ++g)
    transports.push_back({{"morphism", g},
                          {"objects", encode_map(F.on_morphisms[g].on_objects)},
                          {"morphisms", encode_map(F.on_morphisms[g].on_morphisms)}});
  return {{"base_kind", "category"}, {"base", encode(C)}, {"values", values}, {"transports", transports}};
}

json encode(const TwoCatValuedFunctor& F) {
  const FinTwoCategory& t = *F.base;
  const int n = t.num_objects();
  json values = json::array(), ones = json::array(), twos = json::array();
  for (int c = 0; c < n; ++c) values.push_back({{"object", c}, {"category", encode(*F.on_objects[c])}});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      for (int g = 0; g < t.hom(x, y).num_objects(); ++g) {
        const FinFunctor& f = F.on_1cells[x * n + y][g];
        ones.push_back({{"source", x}, {"target", y}, {"cell", g}, {"objects", encode_map(f.on_objects)},
                        {"morphisms", encode_map(f.on_morphisms)}});
      }
      for (int a = 0; a < t.hom(x, y).num_morphisms(); ++a)
        twos.push_back({{"source", x}, {"target", y}, {"cell", a}, {"components", encode_map(F.on_2cells[x * n + y][a])}});
    }
  return {{"base_kind", "two-category"}, {"base", encode(t)}, {"values", values}, {"one_cells", ones}, {"two_cells", twos}};
}

bool is_two_level(const json& j) {
  return guarded("cat-valued functor", [&] {
    const std::string k = field(j, "base_kind").get<std::string>();
    if (k != "category" && k != "two-category") throw SchemaError("base_kind must be category or two-category");
    return k == "two-category";
  });
}

namespace {
std::vector<CategoryPtr> decode_values(const json& j, int n) {
  std::vector<CategoryPtr> r(n);
  for (const json& v : array_field(j, "values")) {
    int c = ref(field(v, "object"), n, "value object");
    if (r[c]) throw SchemaError("duplicate value block");
    r[c] = share(decode_category(field(v, "category")));
  }
  for (auto& p : r)
    if (!p) throw SchemaError("missing value block");
  return r;
}
}  // namespace

CatValuedFunctor decode_cat_valued(const json& j) {
  return guarded("cat-valued functor", [&] {
    if (is_two_level(j)) throw SchemaError("expected base_kind category");
    CatValuedFunctor F;
    F.base = share(decode_category(field(j, "base")));
    const FinCategory& C = *F.base;
    F.on_objects = decode_values(j, C.num_objects());
    F.on_morphisms.assign(C.num_morphisms(), FinFunctor{});
    std::vector<char> seen(C.num_morphisms(), 0);
    for (const json& t : array_field(j, "transports")) {
      int g = ref(field(t, "morphism"), C.num_morphisms(), "transport morphism");
      if (seen[g]) throw SchemaError("duplicate transport block");
      seen[g] = 1;
      F.on_morphisms[g] = decode_functor_between(t, F.on_objects[C.src[g]], F.on_objects[C.tgt[g]]);
    }
    for (char s : seen)
      if (!s) throw SchemaError("missing transport block");
    return F;
  });
}

TwoCatValuedFunctor decode_two_cat_valued(const json& j) {
  return guarded("cat-valued functor", [&] {
    if (!is_two_level(j)) throw SchemaError("expected base_kind two-category");
    TwoCatValuedFunctor F;
    F.base = std::make_shared<const FinTwoCategory>(decode_two_category(field(j, "base")));
    const FinTwoCategory& t = *F.base;
    const int n = t.num_objects();
    F.on_objects = decode_values(j, n);
    F.on_1cells.assign(n * n, {});
    F.on_2cells.assign(n * n, {});
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        F.on_1cells[x * n + y].assign(t.hom(x, y).num_objects(), FinFunctor{});
        F.on_2cells[x * n + y].assign(t.hom(x, y).num_morphisms(), {});
      }
    for (const json& e : array_field(j, "one_cells")) {
      int x = ref(field(e, "source"), n, "1-cell source"), y = ref(field(e, "target"), n, "1-cell target");
      int g = ref(field(e, "cell"), t.hom(x, y).num_objects(), "1-cell");
      F.on_1cells[x * n + y][g] = decode_functor_between(e, F.on_objects[x], F.on_objects[y]);
    }
    for (const json& e : array_field(j, "two_cells")) {
      int x = ref(field(e, "source"), n, "2-cell source"), y = ref(field(e, "target"), n, "2-cell target");
      int a = ref(field(e, "cell"), t.hom(x, y).num_morphisms(), "2-cell");
      F.on_2cells[x * n + y][a] = decode_map(field(e, "components"), F.on_objects[x]->num_objects(),
                                             F.on_objects[y]->num_morphisms(), "2-cell components");
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        for (auto& f : F.on_1cells[x * n + y])
          if (!f.source) throw SchemaError("missing 1-cell block");
        for (auto& c : F.on_2cells[x * n + y])
          if (static_cast<int>(c.size()) != F.on_objects[x]->num_objects()) throw SchemaError("missing 2-cell block");
      }
    return F;
  });
}

Instance make_instance(const std::string& kind, const std::string& name, json payload, const std::string& provenance,
                       std::optional<std::uint64_t> seed) {
  Instance i;
  i.kind = kind;
  i.name = name;
  i.payload = std::move(payload);
  i.provenance = provenance;
  i.seed = seed;
  return i;
}

json instance_to_json(const Instance& inst) {
  json meta = {{"name", inst.name}, {"provenance", inst.provenance}};
  meta["seed"] = inst.seed ? json(*inst.seed) : json(nullptr);
  json j = {{"version", kFormatVersion}, {"kind", inst.kind}, {"metadata", meta}, {"payload", inst.payload}};
  if (!inst.certificate.is_null()) j["certificate"] = inst.certificate;
  return j;
}

namespace {
const std::vector<std::string> kKinds = {"category",     "double",     "marked-double",     "functor",
                                         "double-functor", "two-category", "two-functor", "cat-valued-functor"};
}

Instance instance_from_json(const json& j) {
  return guarded("instance", [&] {
    Instance inst;
    if (field(j, "version") != kFormatVersion) throw SchemaError("unsupported version");
    inst.kind = field(j, "kind").get<std::string>();
    if (std::find(kKinds.begin(), kKinds.end(), inst.kind) == kKinds.end())
      throw SchemaError("unknown kind '" + inst.kind + "'");
    const json& meta = field(j, "metadata");
    inst.name = field(meta, "name").get<std::string>();
    if (meta.contains("provenance")) inst.provenance = meta.at("provenance").get<std::string>();
    if (meta.contains("seed") && !meta.at("seed").is_null()) inst.seed = meta.at("seed").get<std::uint64_t>();
    inst.payload = field(j, "payload");
    if (j.contains("certificate")) inst.certificate = j.at("certificate");
    return inst;
  });
}

std::string print_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << print_instance(inst);
  if (!out) throw SchemaError("write failed for " + path);
}

json report_json(const Report& r) {
  json v = json::array();
  for (auto& x : r.violations) v.push_back({{"law", x.law}, {"witness", x.witness}});
  return {{"ok", r.ok()}, {"violations", v}};
}

json certificate_json(const FibrationCertificate& c) {
  json lifts = json::array();
  for (auto& l : c.lifts)
    lifts.push_back({{"leg", l.leg}, {"anchor", l.anchor}, {"base", l.base}, {"solution", l.solution}, {"count", l.count}});
  json marked = json::array();
  for (std::size_t i = 0; i < c.marked.size(); ++i)
    if (c.marked[i]) marked.push_back(static_cast<int>(i));
  return {{"kind", c.kind.name()},
          {"ok", c.ok},
          {"failure", c.failure},
          {"lifts", lifts},
          {"marked_direction", c.marked_direction == MarkDirection::Vertical ? "vertical" : "horizontal"},
          {"marked", marked}};
}

json certificate_json(const ReflectionCertificate& c) {
  return {{"ok", c.ok()},
          {"output", certificate_json(c.output)},
          {"cocartesian_marking_matches", c.cocartesian_marking_matches},
          {"laws", report_json(c.laws)}};
}

json certificate_json(const TwoFibrationCertificate& c) {
  json lifts = json::array();
  for (auto& l : c.lifts)
    lifts.push_back({{"base_source", l.base_source}, {"base_target", l.base_target}, {"base_cell", l.base_cell},
                     {"source", l.source}, {"target", l.target}, {"cell", l.cell}, {"candidates", l.candidates}});
  return {{"ok", c.ok},
          {"mode", c.mode == CompareMode::Iso ? "iso" : "equiv"},
          {"local", c.local_ok},
          {"composition", c.composition_ok},
          {"lifts_exist", c.lifts_ok},
          {"gaunt_homs", c.gaunt_homs},
          {"unique_lifts", c.unique_lifts},
          {"comparisons", c.comparisons},
          {"failure", c.failure},
          {"lifts", lifts}};
}

json comparison_json(const DegreeComparison& c) {
  return {{"name", c.name}, {"m", c.m},           {"n", c.n},   {"domain", c.domain},
          {"codomain", c.codomain}, {"bijective", c.bijective}, {"map", c.map}, {"detail", c.detail}};
}

json provenance_json(const Reflection& r) {
  return {{"h_arrows", {{"arrow", r.h_arrow}, {"fiber", r.h_fiber}}},
          {"v_arrows", r.v_arrow},
          {"squares", {{"square", r.s_square}, {"top_fiber", r.s_vtop}, {"bottom_fiber", r.s_vbot}, {"right", r.s_right}}}};
}

namespace {
std::string quoted(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}
}  // namespace

std::string export_dot(const FinDoubleCategory& d, const std::string& name) {
  std::ostringstream o;
  o << "digraph " << quoted(name) << " {\n";
  for (int x = 0; x < d.num_objects(); ++x) o << "  o" << x << " [label=" << quoted(d.objects[x]) << "];\n";
  for (int f = 0; f < d.num_h(); ++f)
    if (!d.h_is_id(f)) o << "  o" << d.h_src[f] << " -> o" << d.h_tgt[f] << " [label=" << quoted(d.h_names[f]) << "];\n";
  for (int v = 0; v < d.num_v(); ++v)
    if (!d.v_is_id(v))
      o << "  o" << d.v_src[v] << " -> o" << d.v_tgt[v] << " [style=dashed, label=" << quoted(d.v_names[v]) << "];\n";
  for (int s = 0; s < d.num_s(); ++s) {
    o << "  subgraph cluster_s" << s << " {\n    label=" << quoted(d.s_names[s]) << ";\n";
    o << "    s" << s << " [shape=note, label="
      << quoted(d.h_names[d.s_top[s]] + " / " + d.h_names[d.s_bot[s]] + " | " + d.v_names[d.s_left[s]] + " / " +
                d.v_names[d.s_right[s]])
      << "];\n  }\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace dblcat

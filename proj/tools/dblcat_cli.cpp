// Command-line front end. Exit codes: 0 certified, 1 mathematical failure,
// 2 I/O or schema error, 3 resource cap.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dblcat/corpus.hpp"

using namespace dblcat;

namespace {

struct Options {
  std::string path;
  std::string out;
  std::string mode = "iso";
  std::string kind = "left-cart";
  std::string variant = "perp";
  std::string kernels = "K,zeta,eta,theta,T";
  std::vector<int> window = {2, 2};
  int level = 1;
  std::uint64_t seed = 1;
  int count = 200;
  int max_base = 6;
  int max_fiber = 3;
  bool paranoid = false;
  std::size_t max_cells = 0;
};

CompareMode compare_mode(const Options& o) {
  if (o.mode == "iso") return CompareMode::Iso;
  if (o.mode == "equiv") return CompareMode::Equiv;
  throw SchemaError("--mode must be iso or equiv");
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

FibKind parse_kind(const std::string& s) {
  try {
    return FibKind::parse(s);
  } catch (const ContractError& e) {
    throw SchemaError(e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

int finish(const Options& o, json report, bool ok) {
  report["ok"] = ok;
  emit(report);
  return ok ? 0 : 1;
}

int cmd_validate(const Options& o) {
  Instance inst = read_instance(o.path);
  Report r;
  const json& pl = inst.payload;
  if (inst.kind == "category") r = validate_category(decode_category(pl));
  else if (inst.kind == "double") r = validate_double(decode_double(pl));
  else if (inst.kind == "marked-double") r = validate_marked(decode_marked(pl));
  else if (inst.kind == "functor") r = validate_functor(decode_functor(pl));
  else if (inst.kind == "double-functor") r = validate_double_functor(decode_double_functor(pl));
  else if (inst.kind == "two-category") r = validate_two_category(decode_two_category(pl));
  else if (inst.kind == "two-functor") r = validate_two_functor(decode_two_functor(pl));
  else if (inst.kind == "cat-valued-functor")
    r = is_two_level(pl) ? validate_two_cat_valued(decode_two_cat_valued(pl)) : validate_cat_valued(decode_cat_valued(pl));
  json rep = {{"command", "validate"}, {"instance", inst.name}, {"kind", inst.kind}, {"report", report_json(r)}};
  if (!r.ok()) rep["witness"] = r.violations[0].law + ": " + r.violations[0].witness;
  return finish(o, rep, r.ok());
}

// Structural validity first: a malformed input is a mathematical failure with
// its violated law as witness.
std::optional<int> reject_invalid(const Options& o, const std::string& cmd, const Report& r) {
  if (r.ok()) return std::nullopt;
  return finish(o, {{"command", cmd}, {"report", report_json(r)}, {"witness", r.violations[0].law + ": " + r.violations[0].witness}}, false);
}

int cmd_fibcheck(const Options& o) {
  Instance inst = read_instance(o.path);
  json rep = {{"command", "fibcheck"}, {"instance", inst.name}};
  if (inst.kind == "double-functor") {
    DoubleFunctor p = decode_double_functor(inst.payload);
    if (auto e = reject_invalid(o, "fibcheck", validate_double_functor(p))) return *e;
    FibrationCertificate c = check_fibration(p, parse_kind(o.kind), o.paranoid);
    if (c.ok) {
      Report replay = replay_certificate(p, c);
      rep["replay"] = report_json(replay);
      if (!replay.ok()) c.ok = false;
    }
    rep["certificate"] = certificate_json(c);
    if (!c.ok) rep["witness"] = c.failure;
    return finish(o, rep, c.ok);
  }
  if (inst.kind == "two-functor") {
    TwoFunctor p = decode_two_functor(inst.payload);
    if (auto e = reject_invalid(o, "fibcheck", validate_two_functor(p))) return *e;
    TwoFibrationCertificate c = is_1cocartesian_fibration(p, compare_mode(o));
    rep["certificate"] = certificate_json(c);
    if (!c.ok) rep["witness"] = c.failure;
    return finish(o, rep, c.ok);
  }
  if (inst.kind == "functor") {
    FinFunctor p = decode_functor(inst.payload);
    if (auto e = reject_invalid(o, "fibcheck", validate_functor(p))) return *e;
    bool ok;
    if (o.kind == "cocartesian") ok = is_cocartesian_fibration(p);
    else if (o.kind == "cartesian") ok = is_cartesian_fibration(p);
    else if (o.kind == "left") ok = is_left_fibration(p);
    else if (o.kind == "right") ok = is_right_fibration(p);
    else throw SchemaError("for functors --kind is cocartesian, cartesian, left or right");
    rep["kind"] = o.kind;
    if (!ok && (o.kind == "cartesian" || o.kind == "cocartesian")) {
      FinFunctor q = o.kind == "cartesian" ? p : opposite(p);
      rep["witness"] = analyze_cartesian_fibration(q).failure;
    }
    return finish(o, rep, ok);
  }
  throw SchemaError("fibcheck expects a functor, double-functor or two-functor instance");
}

int cmd_reflect(const Options& o) {
  Instance inst = read_instance(o.path);
  if (inst.kind != "double-functor") throw SchemaError("reflect expects a double-functor instance");
  DoubleFunctor p = decode_double_functor(inst.payload);
  if (auto e = reject_invalid(o, "reflect", validate_double_functor(p))) return *e;
  json rep = {{"command", "reflect"}, {"instance", inst.name}, {"variant", o.variant}};
  if (o.variant != "perp" && o.variant != "top" && o.variant != "dagger")
    throw SchemaError("--variant must be perp, top or dagger");
  FibKind need = o.variant == "perp" ? kLeftCart : o.variant == "top" ? kCocartRight : parse_kind("cocart-left");
  FibrationCertificate in = check_fibration(p, need, o.paranoid);
  if (!in.ok) {
    rep["witness"] = "input is not a " + need.name() + " fibration: " + in.failure;
    return finish(o, rep, false);
  }
  DoubleFunctor q;
  json prov;
  FibrationCertificate outc;
  bool ok = true;
  if (o.variant == "perp") {
    Reflection r = reflect_perp(p);
    ReflectionCertificate c = certify_reflection(r);
    rep["certificate"] = certificate_json(c);
    ok = c.ok();
    q = r.q;
    prov = provenance_json(r);
  } else {
    ConjugateReflection r = o.variant == "top" ? reflect_top(p) : reflect_dagger(p);
    FibKind out = o.variant == "top" ? kLeftCart : parse_kind("left-cocart");
    outc = check_fibration(r.result, out, o.paranoid);
    rep["certificate"] = certificate_json(outc);
    ok = outc.ok;
    q = r.result;
    prov = provenance_json(r.inner);
  }
  if (!o.out.empty()) {
    Instance res = make_instance("double-functor", inst.name + "-reflect-" + o.variant, encode(q), "reflect-" + o.variant);
    res.certificate = rep["certificate"];
    res.certificate["provenance"] = prov;
    write_instance(res, o.out);
    rep["out"] = o.out;
  }
  return finish(o, rep, ok);
}

int cmd_roundtrip(const Options& o) {
  Instance inst = read_instance(o.path);
  if (inst.kind != "double-functor") throw SchemaError("roundtrip expects a double-functor instance");
  DoubleFunctor p = decode_double_functor(inst.payload);
  if (auto e = reject_invalid(o, "roundtrip", validate_double_functor(p))) return *e;
  json rep = {{"command", "roundtrip"}, {"instance", inst.name}};
  FibrationCertificate in = is_left_cart_fibration(p, o.paranoid);
  if (!in.ok) {
    rep["witness"] = "input is not a left-cart fibration: " + in.failure;
    return finish(o, rep, false);
  }
  RoundtripResult r = roundtrip_iso(p, vertical_cleavage(p));
  rep["status"] = r.status_name();
  rep["detail"] = r.detail;
  if (r.comparison) rep["comparison"] = encode(*r.comparison);
  bool ok = r.status == RoundtripResult::Status::Isomorphism ||
            (compare_mode(o) == CompareMode::Equiv && r.status == RoundtripResult::Status::Equivalence);
  if (!ok) rep["witness"] = r.detail;
  return finish(o, rep, ok);
}

int cmd_unstraighten(const Options& o) {
  Instance inst = read_instance(o.path);
  if (inst.kind != "cat-valued-functor") throw SchemaError("unstraighten expects a cat-valued-functor instance");
  json rep = {{"command", "unstraighten"}, {"instance", inst.name}, {"level", o.level}};
  if (o.level == 1) {
    if (is_two_level(inst.payload)) throw SchemaError("level 1 needs base_kind category");
    CatValuedFunctor F = decode_cat_valued(inst.payload);
    if (auto e = reject_invalid(o, "unstraighten", validate_cat_valued(F))) return *e;
    Unstraightening un = unstraighten_1(F);
    bool ok = is_cocartesian_fibration(un.projection);
    auto split = split_failure(un.projection, un.cleavage);
    rep["cocartesian"] = ok;
    rep["split"] = !split.has_value();
    if (split) rep["witness"] = *split;
    ok = ok && !split;
    if (!o.out.empty()) {
      Instance res = make_instance("functor", inst.name + "-un", encode(un.projection), "unstraighten-1");
      res.certificate = {{"cocartesian", ok}};
      write_instance(res, o.out);
      rep["out"] = o.out;
    }
    return finish(o, rep, ok);
  }
  if (o.level != 2) throw SchemaError("--level must be 1 or 2");
  if (!is_two_level(inst.payload)) throw SchemaError("level 2 needs base_kind two-category");
  TwoCatValuedFunctor F = decode_two_cat_valued(inst.payload);
  if (auto e = reject_invalid(o, "unstraighten", validate_two_cat_valued(F))) return *e;
  TwoUnstraightening un = unstraighten_2(F, compare_mode(o));
  rep["certificate"] = certificate_json(un.certificate);
  rep["note"] = un.note;
  bool ok = un.certificate.ok;
  if (o.paranoid) {
    PipelineResult pipe = unstraighten_2_pipeline(F);
    bool agree = pipe.projection &&
                 find_two_isomorphism(un.projection.source, pipe.projection->source, &un.projection, &*pipe.projection);
    rep["pipeline_agrees"] = agree;
    if (!agree) rep["witness"] = pipe.detail.empty() ? "pipeline result is not isomorphic over the base" : pipe.detail;
    ok = ok && agree;
  }
  if (!un.certificate.ok) rep["witness"] = un.certificate.failure;
  if (!o.out.empty()) {
    Instance res = make_instance("two-functor", inst.name + "-un", encode(un.projection), "unstraighten-2");
    res.certificate = rep["certificate"];
    write_instance(res, o.out);
    rep["out"] = o.out;
  }
  return finish(o, rep, ok);
}

int cmd_straighten(const Options& o) {
  Instance inst = read_instance(o.path);
  if (inst.kind != "functor") throw SchemaError("straighten expects a functor instance");
  FinFunctor p = decode_functor(inst.payload);
  if (auto e = reject_invalid(o, "straighten", validate_functor(p))) return *e;
  json rep = {{"command", "straighten"}, {"instance", inst.name}};
  if (!is_cocartesian_fibration(p)) {
    rep["witness"] = analyze_cartesian_fibration(opposite(p)).failure;
    return finish(o, rep, false);
  }
  Cleavage cl = cocartesian_cleavage(p);
  if (auto f = split_failure(p, cl)) {
    rep["witness"] = "cleavage is not split: " + *f;
    return finish(o, rep, false);
  }
  CatValuedFunctor F = straighten_1(p, cl);
  rep["report"] = report_json(validate_cat_valued(F));
  if (!o.out.empty()) {
    Instance res = make_instance("cat-valued-functor", inst.name + "-st", encode(F), "straighten-1");
    res.certificate = rep["report"];
    write_instance(res, o.out);
    rep["out"] = o.out;
  }
  return finish(o, rep, validate_cat_valued(F).ok());
}

int cmd_compare_psi(const Options& o) {
  Instance inst = read_instance(o.path);
  if (inst.kind != "double-functor") throw SchemaError("compare-psi expects a double-functor instance");
  if (o.window.size() != 2 || o.window[0] < 0 || o.window[1] < 0) throw SchemaError("--window takes M N");
  DoubleFunctor p = decode_double_functor(inst.payload);
  if (auto e = reject_invalid(o, "compare-psi", validate_double_functor(p))) return *e;
  json rep = {{"command", "compare-psi"}, {"instance", inst.name}};
  FibrationCertificate in = is_left_cart_fibration(p, o.paranoid);
  if (!in.ok) {
    rep["witness"] = "input is not a left-cart fibration: " + in.failure;
    return finish(o, rep, false);
  }
  std::vector<std::string> ks;
  std::stringstream ss(o.kernels);
  for (std::string k; std::getline(ss, k, ',');) ks.push_back(k);
  json rows = json::array();
  bool ok = true;
  for (int m = 0; m <= o.window[0]; ++m)
    for (int n = 0; n <= o.window[1]; ++n)
      for (auto& k : ks) {
        DegreeComparison d;
        if (k == "K") d = kernel_agreement(p, m, n);
        else if (k == "zeta") d = zig_zeta(p, m, n);
        else if (k == "eta") d = zig_eta(p, m, n);
        else if (k == "theta") d = zig_theta(p, m, n);
        else if (k == "T") d = psi_T_agreement(p, m, n);
        else throw SchemaError("unknown comparison '" + k + "'");
        json row = comparison_json(d);
        row.erase("map");
        rows.push_back(row);
        if (!d.bijective) {
          ok = false;
          if (!rep.contains("witness")) rep["witness"] = d.name + " at (" + std::to_string(m) + "," + std::to_string(n) + "): " + d.detail;
        }
      }
  rep["degrees"] = rows;
  return finish(o, rep, ok);
}

int cmd_export_dot(const Options& o) {
  Instance inst = read_instance(o.path);
  std::string dot;
  if (inst.kind == "double") dot = export_dot(decode_double(inst.payload), inst.name);
  else if (inst.kind == "marked-double") dot = export_dot(*decode_marked(inst.payload).base, inst.name);
  else if (inst.kind == "double-functor") dot = export_dot(*decode_double_functor(inst.payload).source, inst.name);
  else if (inst.kind == "two-category") dot = export_dot(double_nerve(decode_two_category(inst.payload)), inst.name);
  else if (inst.kind == "two-functor") dot = export_dot(double_nerve(*decode_two_functor(inst.payload).source), inst.name);
  else throw SchemaError("export-dot expects a double category, double functor, or 2-category");
  if (o.out.empty()) {
    std::cout << dot;
    return 0;
  }
  write_text(o.out, dot);
  emit({{"command", "export-dot"}, {"instance", inst.name}, {"out", o.out}, {"ok", true}});
  return 0;
}

int cmd_gen(const Options& o) {
  if (o.out.empty()) throw SchemaError("gen needs --out DIR");
  CorpusOptions c;
  c.seed = o.seed;
  c.count = o.count;
  c.max_base_objects = o.max_base;
  c.max_fiber_objects = o.max_fiber;
  std::filesystem::create_directories(o.out);
  json names = json::array();
  for (auto& inst : corpus_instances(c)) {
    write_instance(inst, (std::filesystem::path(o.out) / (inst.name + ".json")).string());
    names.push_back(inst.name);
  }
  json manifest = {{"version", kFormatVersion}, {"seed", o.seed}, {"count", o.count}, {"max_base_objects", o.max_base},
                   {"max_fiber_objects", o.max_fiber}, {"instances", names}};
  write_text((std::filesystem::path(o.out) / "manifest.json").string(), manifest.dump(2) + "\n");
  emit({{"command", "gen"}, {"out", o.out}, {"instances", names.size()}, {"ok", true}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certification tools for finite double categories and fibrations"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--mode", o.mode, "iso or equiv")->check(CLI::IsMember({"iso", "equiv"}));
  app.add_flag("--paranoid", o.paranoid, "re-check lifts in degree 2");
  app.add_option("--max-cells", o.max_cells, "enumeration cap, overrides DBLCAT_MAX_CELLS");

  auto with_path = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("path", o.path, "instance file")->required();
    return c;
  };
  auto* validate = with_path("validate", "check the laws of an instance");
  auto* fibcheck = with_path("fibcheck", "certify a fibration");
  fibcheck->add_option("--kind", o.kind, "left-cart, cocart-right, ... or for functors cocartesian/cartesian/left/right");
  auto* reflect = with_path("reflect", "apply a reflection");
  reflect->add_option("--variant", o.variant, "perp, top or dagger")->check(CLI::IsMember({"perp", "top", "dagger"}));
  reflect->add_option("--out", o.out, "output instance");
  auto* roundtrip = with_path("roundtrip", "compare D with the double reflection");
  auto* unstraighten = with_path("unstraighten", "unstraighten a category-valued functor");
  unstraighten->add_option("--level", o.level, "1 or 2")->check(CLI::IsMember({1, 2}));
  unstraighten->add_option("--out", o.out, "output instance");
  auto* straighten = with_path("straighten", "straighten a cocartesian fibration");
  straighten->add_option("--out", o.out, "output instance");
  auto* compare = with_path("compare-psi", "degreewise kernel comparisons");
  compare->add_option("--kernels", o.kernels, "comma list of K, zeta, eta, theta, T");
  compare->add_option("--window", o.window, "M N")->expected(2);
  auto* dot = with_path("export-dot", "write a DOT diagram");
  dot->add_option("--out", o.out, "output file");
  auto* gen = app.add_subcommand("gen", "generate a certified corpus");
  gen->add_option("--seed", o.seed, "seed");
  gen->add_option("--out", o.out, "output directory")->required();
  gen->add_option("--count", o.count, "generated fibrations");
  gen->add_option("--max-base", o.max_base, "base objects cap");
  gen->add_option("--max-fiber", o.max_fiber, "fiber objects cap");
  for (auto* c : {validate, fibcheck, reflect, roundtrip, unstraighten, straighten, compare, dot, gen}) {
    c->add_option("--mode", o.mode, "iso or equiv")->check(CLI::IsMember({"iso", "equiv"}));
    c->add_flag("--paranoid", o.paranoid, "re-check lifts in degree 2");
    c->add_option("--max-cells", o.max_cells, "enumeration cap, overrides DBLCAT_MAX_CELLS");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (o.max_cells) setenv("DBLCAT_MAX_CELLS", std::to_string(o.max_cells).c_str(), 1);
  try {
    if (*validate) return cmd_validate(o);
    if (*fibcheck) return cmd_fibcheck(o);
    if (*reflect) return cmd_reflect(o);
    if (*roundtrip) return cmd_roundtrip(o);
    if (*unstraighten) return cmd_unstraighten(o);
    if (*straighten) return cmd_straighten(o);
    if (*compare) return cmd_compare_psi(o);
    if (*dot) return cmd_export_dot(o);
    if (*gen) return cmd_gen(o);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

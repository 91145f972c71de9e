#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace dblcat;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "dblcat_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string fixture(const std::string& name) { return std::string(DBLCAT_FIXTURES) + "/" + name + ".json"; }

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  std::string cmd = std::string(DBLCAT_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string write(const Instance& inst, const std::string& name) {
  fs::path p = scratch() / (name + ".json");
  write_instance(inst, p.string());
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fixtures validate") {
  int seen = 0;
  for (auto& e : fs::directory_iterator(DBLCAT_FIXTURES)) {
    if (e.path().filename() == "manifest.json") continue;
    Run r = run("validate " + e.path().string());
    CHECK_MESSAGE(r.code == 0, e.path().filename().string() << ": " << r.out);
    ++seen;
  }
  CHECK(seen >= 10);
}

TEST_CASE("successful commands exit 0") {
  Run f = run("fibcheck " + fixture("fixture-copresheaf") + " --kind left-cart");
  CHECK(f.code == 0);
  CHECK(json::parse(f.out)["ok"] == true);
  CHECK(run("roundtrip " + fixture("fixture-transposition-chain2")).code == 0);
  const std::string out = (scratch() / "reflected.json").string();
  CHECK(run("reflect " + fixture("fixture-copresheaf") + " --variant perp --out " + out).code == 0);
  Instance r = read_instance(out);
  CHECK(r.kind == "double-functor");
  CHECK(r.certificate.contains("provenance"));
  CHECK(run("fibcheck " + out + " --kind cocart-right").code == 0);
  CHECK(run("unstraighten " + fixture("fixture-representable") + " --level 2 --paranoid").code == 0);
  CHECK(run("compare-psi " + fixture("fixture-copresheaf") + " --kernels K,T --window 1 1").code == 0);
}

TEST_CASE("mathematical failures exit 1") {
  json c = encode(chain(2));
  FinCategory ch = chain(2);
  int g = -1, f = -1;
  for (int m = 0; m < ch.num_morphisms(); ++m) {
    if (ch.morphisms[m] == "1<2") g = m;
    if (ch.morphisms[m] == "0<1") f = m;
  }
  REQUIRE(g >= 0);
  REQUIRE(f >= 0);
  bool mutated = false;
  for (auto& e : c["composition"])
    if (e[0] == g && e[1] == f) {
      e[2] = f;
      mutated = true;
    }
  REQUIRE(mutated);
  Run v = run("validate " + write(make_instance("category", "broken", c), "broken"));
  CHECK(v.code == 1);
  json rep = json::parse(v.out);
  CHECK(rep["ok"] == false);
  CHECK(rep["witness"].get<std::string>().find("1<2 o 0<1") != std::string::npos);

  auto gp = share(grid(1, 0));
  Run fc = run("fibcheck " + write(make_instance("double-functor", "grid-over-point", encode(to_terminal(gp))), "gp") +
               " --kind left-cart");
  CHECK(fc.code == 1);
  CHECK_FALSE(json::parse(fc.out)["witness"].get<std::string>().empty());
}

TEST_CASE("input errors exit 2") {
  CHECK(run("validate " + (scratch() / "absent.json").string()).code == 2);
  fs::path junk = scratch() / "junk.json";
  std::ofstream(junk) << "{ this is not json";
  CHECK(run("validate " + junk.string()).code == 2);
  CHECK(run("fibcheck " + fixture("fixture-copresheaf") + " --kind sideways").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("enumeration caps exit 3") {
  CHECK(run("compare-psi " + fixture("fixture-copresheaf") + " --kernels K --window 2 2 --max-cells 1").code == 3);
}

TEST_CASE("generation is deterministic") {
  const fs::path a = scratch() / "gen-a", b = scratch() / "gen-b";
  REQUIRE(run("gen --seed 5 --count 3 --out " + a.string()).code == 0);
  REQUIRE(run("gen --seed 5 --count 3 --out " + b.string()).code == 0);
  int files = 0;
  for (auto& e : fs::directory_iterator(a)) {
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++files;
  }
  CHECK(files > 3);
  for (auto& e : fs::directory_iterator(a))
    if (e.path().filename() != "manifest.json") CHECK(run("validate " + e.path().string()).code == 0);
}

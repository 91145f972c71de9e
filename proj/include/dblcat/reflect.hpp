#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dblcat/fibr.hpp"

namespace dblcat {

// Reflection of a (left, cart)-fibration p: D -> C into a (cocart, right)-fibration
// q: R -> C. Cells of R name the D-cells they were built from:
//   h-arrow k  = (h_arrow[k]: x -> y, h_fiber[k]: y => z over an identity)
//   v-arrow k  = cartesian D v-arrow v_arrow[k]
//   square  k  = D square s_square[k] with top (top s, s_vtop[k]),
//                bottom (bot s, s_vbot[k]), right edge s_right[k] (cartesian)
struct Reflection {
  DoublePtr total;
  DoubleFunctor q;
  DoubleFunctor input;
  std::vector<int> h_arrow, h_fiber;
  std::vector<int> v_arrow;
  std::vector<int> s_square, s_vtop, s_vbot, s_right;
  std::vector<int> v_of_d;  // D v-arrow -> R v-arrow, -1 if not cartesian

  int find_h(int f, int v) const;
  int find_v(int d_v) const { return v_of_d[d_v]; }
  int find_s(int sigma, int vbot, int right) const;

  std::unordered_map<std::uint64_t, int> h_index;
  std::unordered_map<std::uint64_t, int> s_index;
};

Reflection reflect_perp(const DoubleFunctor& p);

struct ReflectionCertificate {
  FibrationCertificate output;  // (cocart, right) certificate of q
  bool cocartesian_marking_matches = false;  // cocartesian h-arrows = (f, invertible v)
  Report laws;                               // validate_double on the output
  bool ok() const { return output.ok && cocartesian_marking_matches && laws.ok(); }
};
ReflectionCertificate certify_reflection(const Reflection& r);

// Conjugates. reflect_top takes a (cocart, right)-fibration and returns a
// (left, cart)-fibration; reflect_dagger takes a (cocart, left)-fibration and
// returns a (left, cocart)-fibration. The inner reflection is kept for
// provenance.
struct ConjugateReflection {
  DoubleFunctor result;
  Reflection inner;
};
ConjugateReflection reflect_top(const DoubleFunctor& p);
ConjugateReflection reflect_dagger(const DoubleFunctor& p);

// Chosen cartesian lift per (base v-arrow, target object); identities over identities.
struct VerticalCleavage {
  std::unordered_map<std::uint64_t, int> lift;
  int get(int base_v, int target) const;
};
VerticalCleavage vertical_cleavage(const DoubleFunctor& p);

struct Factorization {
  int fiber_part = -1;      // u, over an identity
  int cartesian_part = -1;  // c, chosen by the cleavage
};
Factorization vertical_factorization(const DoubleFunctor& p, int v, const VerticalCleavage& cl);

// Comparison D -> Psi_top(Psi_perp(D)) over C.
struct RoundtripResult {
  enum class Status { Isomorphism, Equivalence, Inconclusive, Failed };
  Status status = Status::Failed;
  std::optional<DoubleFunctor> comparison;  // D -> R
  DoubleFunctor target_projection;          // R -> C
  std::string detail;
  std::string status_name() const;
};
RoundtripResult roundtrip_iso(const DoubleFunctor& p, const VerticalCleavage& cl);

// Fiber swap at c: horizontal fiber of the reflection against the vertical
// fiber of D, compared through provenance.
struct FiberSwapResult {
  bool ok = false;
  std::string detail;
};
FiberSwapResult fiber_swap(const Reflection& r, int c);

// Strong map D -> D' over g: C -> C' induces a map of reflections.
DoubleFunctor reflect_map(const DoubleFunctor& f, const Reflection& src, const Reflection& tgt);

}  // namespace dblcat

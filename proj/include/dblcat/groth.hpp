#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dblcat/reflect.hpp"

namespace dblcat {

// Strict functor base -> FinCat.
struct CatValuedFunctor {
  CategoryPtr base;
  std::vector<CategoryPtr> on_objects;
  std::vector<FinFunctor> on_morphisms;
};

Report validate_cat_valued(const CatValuedFunctor& F);
CatValuedFunctor constant_functor(CategoryPtr base, CategoryPtr value);

// Chosen (co)cartesian lifts keyed by (base morphism, given endpoint).
struct Cleavage {
  bool cocartesian = true;
  std::unordered_map<std::uint64_t, int> lift;
  int get(int base_morphism, int object) const;
};

// nullopt if split; otherwise names the failing identity or composite.
std::optional<std::string> split_failure(const FinFunctor& p, const Cleavage& cl);
// Cocartesian cleavage choosing identities over identities; throws if p is not
// a cocartesian fibration.
Cleavage cocartesian_cleavage(const FinFunctor& p);

struct Unstraightening {
  FinFunctor projection;
  Cleavage cleavage;
  std::vector<std::pair<int, int>> object_cells;    // (c, x)
  std::vector<std::pair<int, int>> morphism_cells;  // (gamma, phi)
  std::vector<int> object_offset;                   // per base object
  std::map<std::array<int, 3>, int> morphism_lookup;  // (gamma, x, phi) -> morphism
  int object(int c, int x) const { return object_offset[c] + x; }
  int morphism(int gamma, int x, int phi) const;
};

// Covariant: projection is a cocartesian fibration with split cleavage
// (gamma, id). With contravariant = true, F is read as a functor on the
// opposite of the intended base; the result is a cartesian fibration over
// opposite(F.base), obtained by conjugating with opposites.
Unstraightening unstraighten_1(const CatValuedFunctor& F, bool contravariant = false);

CatValuedFunctor straighten_1(const FinFunctor& p, const Cleavage& cl);

// Same arrays up to names.
bool same_structure(const FinCategory& a, const FinCategory& b);
bool same_functor(const CatValuedFunctor& a, const CatValuedFunctor& b);

// Comparison Un(St(p)) -> p over the base; (c, x) -> x, (gamma, phi) -> phi o lift.
FinFunctor unstraighten_comparison(const FinFunctor& p, const Cleavage& cl,
                                   const Unstraightening& un);

// Double category of a functor F on product(A, opposite(B)) over A ⊠ B:
// objects (a, b, x); h-arrows (f, b, x) with target (a', b, F(f, b) x);
// v-arrows over (a, g: b -> b') are phi: x -> F(a, g) y; squares (f, phi) with
// right edge F(f, b)(phi). A (left, cart)-fibration.
struct GrothendieckDouble {
  DoubleFunctor projection;
  std::vector<std::array<int, 3>> object_cells;  // (a, b, x)
  std::vector<std::array<int, 3>> h_cells;       // (f, b, x)
  std::vector<std::array<int, 4>> v_cells;       // (a, g, phi, y)
  std::vector<std::array<int, 2>> s_cells;       // (f, left v-arrow)
};
GrothendieckDouble grothendieck_double(const CatValuedFunctor& F, CategoryPtr A, CategoryPtr B);

// F: C -> Cat as a (left, cart)-fibration over C ⊠ [0].
GrothendieckDouble copresheaf_of(const CatValuedFunctor& F);

struct UnReflectReport {
  bool ok = false;
  bool counts_match = false;
  bool isomorphism = false;
  bool verticals_invertible = false;
  bool verticals_identities = false;
  std::string detail;
};
UnReflectReport check_un_equals_reflect(const CatValuedFunctor& F);

// Natural transformation alpha: F -> G (components per base object) induces a
// functor Un(F) -> Un(G) over the base.
FinFunctor unstraighten_map(const CatValuedFunctor& F, const CatValuedFunctor& G,
                            const std::vector<FinFunctor>& alpha, const Unstraightening& uf,
                            const Unstraightening& ug);

}  // namespace dblcat

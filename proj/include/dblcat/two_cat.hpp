#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dblcat/groth.hpp"

namespace dblcat {

// Finite strict 2-category. Objects of hom(x, y) are 1-cells, its morphisms
// are 2-cells and its composition is vertical composition of 2-cells.
struct FinTwoCategory {
  std::vector<std::string> objects;
  std::vector<CategoryPtr> homs;  // hom(x, y) at x * n + y
  std::vector<int> unit;          // per object: unit 1-cell of hom(x, x)
  // Per triple (x, y, z) at (x * n + y) * n + z: composite of (g, f) in
  // hom(y, z) x hom(x, y), stored at g * |hom(x, y)| + f. comp1 on 1-cells,
  // comp2 on 2-cells (horizontal composition).
  std::vector<std::vector<int>> comp1, comp2;

  int num_objects() const { return static_cast<int>(objects.size()); }
  const FinCategory& hom(int x, int y) const { return *homs[x * num_objects() + y]; }
  int compose1(int x, int y, int z, int g, int f) const;
  int compose2(int x, int y, int z, int beta, int alpha) const;
  bool operator==(const FinTwoCategory& o) const;
};

using TwoPtr = std::shared_ptr<const FinTwoCategory>;

struct TwoFunctor {
  TwoPtr source, target;
  std::vector<int> ob;
  std::vector<FinFunctor> homs;  // per (x, y) of the source
  const FinFunctor& hom(int x, int y) const { return homs[x * source->num_objects() + y]; }
};

Report validate_two_category(const FinTwoCategory& t);
Report validate_two_functor(const TwoFunctor& f);

// Builds composition tables from comp1 alone; requires every hom to be thin.
void fill_thin_comp2(FinTwoCategory& t);

FinTwoCategory locally_discrete(const FinCategory& c);
FinCategory underlying_category(const FinTwoCategory& t);
FinFunctor underlying_functor(const TwoFunctor& f, CategoryPtr source, CategoryPtr target);
FinTwoCategory product(const FinTwoCategory& a, const FinTwoCategory& b);
TwoFunctor product_projection(TwoPtr a, TwoPtr b, TwoPtr ab, int factor);
TwoFunctor identity_two_functor(TwoPtr t);

// The free 2-cell: objects 0, 1 and two parallel 1-cells 0 -> 1 with one 2-cell.
FinTwoCategory two_cell();
// Objects 0, 1, 2; 1-cells 01, 12, 02 and the composite; one 2-cell from the
// composite to 02.
FinTwoCategory lax_triangle();
// lax_triangle -> two_cell with 0 -> 0 and 1, 2 -> 1.
TwoFunctor lax_triangle_projection(TwoPtr lax, TwoPtr cell);

// Vertical arrows are identities; h-arrows are the 1-cells in (x, y, local)
// order; squares are the 2-cells in the same order.
FinDoubleCategory double_nerve(const FinTwoCategory& t);
DoubleFunctor double_nerve(const TwoFunctor& f, DoublePtr source, DoublePtr target);
// Inverse of double_nerve on double categories whose v-arrows are identities.
std::optional<FinTwoCategory> two_category_of(const FinDoubleCategory& d, std::string* why = nullptr);
std::optional<TwoFunctor> two_functor_of(const DoubleFunctor& f, TwoPtr source, TwoPtr target);
int nerve_h_index(const FinTwoCategory& t, int x, int y, int f);
int nerve_s_index(const FinTwoCategory& t, int x, int y, int alpha);

enum class CompareMode { Iso, Equiv };

struct CocartesianLift {
  int base_source = -1, base_target = -1, base_cell = -1;  // gamma in hom_C
  int source = -1;                                         // d0
  int target = -1, cell = -1;                              // chosen alpha in hom_D(d0, target)
  int candidates = 0;                                      // cocartesian lifts found
};

struct TwoFibrationCertificate {
  bool ok = false;
  CompareMode mode = CompareMode::Iso;
  bool local_ok = false;        // hom functors are right fibrations
  bool composition_ok = false;  // composition preserves the unique 2-cell lifts
  bool lifts_ok = false;        // every lifting problem has a cocartesian lift
  bool gaunt_homs = false;
  // On gaunt homs in iso mode each problem has exactly one cocartesian lift,
  // which then is the unit of the adjunction read as a section.
  bool unique_lifts = false;
  std::vector<CocartesianLift> lifts;
  std::size_t comparisons = 0;  // comparison functors checked
  std::string failure;
};

// alpha: d0 -> d1 in hom_D(d0, d1) is cocartesian if every comparison functor
// hom_D(d1, d2) -> hom_D(d0, d2) x hom_C(Pd1, Pd2) is an isomorphism
// (equivalence in Equiv mode).
bool is_cocartesian_1cell(const TwoFunctor& p, int d0, int d1, int alpha, CompareMode mode,
                          std::string* why = nullptr);
TwoFibrationCertificate is_1cocartesian_fibration(const TwoFunctor& p,
                                                  CompareMode mode = CompareMode::Iso);

// Strict 2-functor C -> FinCat.
struct TwoCatValuedFunctor {
  TwoPtr base;
  std::vector<CategoryPtr> on_objects;
  std::vector<std::vector<FinFunctor>> on_1cells;  // per (x, y), per 1-cell
  // per (x, y), per 2-cell mu: gamma => delta, per object a of F(x):
  // morphism F(gamma) a -> F(delta) a of F(y).
  std::vector<std::vector<std::vector<int>>> on_2cells;
};

Report validate_two_cat_valued(const TwoCatValuedFunctor& F);
TwoCatValuedFunctor constant_two_functor(TwoPtr base, CategoryPtr value);
// hom(c, -) as a functor to FinCat.
TwoCatValuedFunctor representable(TwoPtr base, int c);
// Discrete-hom base: same data as a CatValuedFunctor.
TwoCatValuedFunctor from_cat_valued(const CatValuedFunctor& F, TwoPtr base);

// Double category over double_nerve(base): objects (c, x), h-arrows (gamma, x),
// v-arrows (c, phi) and squares (mu, phi). A (left, cart)-fibration.
struct CopresheafNerve {
  DoubleFunctor projection;
  std::vector<std::array<int, 2>> object_cells;  // (c, x)
  std::vector<std::array<int, 2>> h_cells;       // (base h-arrow, x)
  std::vector<std::array<int, 2>> v_cells;       // (c, phi)
  std::vector<std::array<int, 2>> s_cells;       // (base square, phi)
};
CopresheafNerve copresheaf_nerve(const TwoCatValuedFunctor& F);

struct TwoUnstraightening {
  TwoFunctor projection;                         // E -> base
  std::vector<std::array<int, 2>> object_cells;  // (c, x)
  TwoFibrationCertificate certificate;
  bool gaunt_fibers = false;
  std::string note;
};

// Objects (c, x); 1-cells (gamma, phi: F(gamma) x -> x'); 2-cells
// (gamma, phi) => (delta, psi) are mu: gamma => delta with psi o mu_x = phi.
// Throws ContractError on non-gaunt fibers unless mode is Equiv.
TwoUnstraightening unstraighten_2(const TwoCatValuedFunctor& F, CompareMode mode = CompareMode::Iso);

// The same 2-category read off reflect_perp of copresheaf_nerve(F).
struct PipelineResult {
  std::optional<TwoFunctor> projection;
  std::string detail;
};
PipelineResult unstraighten_2_pipeline(const TwoCatValuedFunctor& F);

// Isomorphism a -> b, over a common base when pa and pb are given.
std::optional<TwoFunctor> find_two_isomorphism(TwoPtr a, TwoPtr b, const TwoFunctor* pa = nullptr,
                                               const TwoFunctor* pb = nullptr, std::size_t cap = 0);

// All 2-functors lying over base: source -> C through p, with fixed object images.
std::vector<TwoFunctor> two_lifts(TwoPtr source, const TwoFunctor& p, const TwoFunctor& base,
                                  const std::vector<int>& fixed_objects, std::size_t cap = 0);

// Fiber 2-category of p over c.
FinTwoCategory two_fiber(const TwoFunctor& p, int c);

}  // namespace dblcat

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dblcat/common.hpp"

namespace dblcat {

// Finite strict category given by an explicit composition table.
// comp.get(g, f) is g∘f and is defined exactly when tgt(f) == src(g).
struct FinCategory {
  std::vector<std::string> objects;
  std::vector<std::string> morphisms;
  std::vector<int> src, tgt;  // per morphism
  std::vector<int> ident;     // per object
  CompTable comp;

  // Adjacency built by index(); not part of the mathematical data.
  std::vector<std::vector<int>> out, in;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_morphisms() const { return static_cast<int>(morphisms.size()); }
  int compose(int g, int f) const { return comp.get(g, f); }
  bool is_identity(int f) const { return ident[src[f]] == f; }
  std::vector<int> hom(int x, int y) const;
  std::optional<int> inverse(int f) const;
  void index();

  bool operator==(const FinCategory& o) const;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

struct FinFunctor {
  CategoryPtr source, target;
  std::vector<int> on_objects, on_morphisms;
};

// Builder: objects and generating data are added by name; compositions set
// explicitly. finish() indexes and returns the value.
class CategoryBuilder {
 public:
  int add_object(const std::string& name);
  // add_object also creates the identity morphism "id_<name>".
  int add_morphism(const std::string& name, int src, int tgt);
  void set_comp(int g, int f, int gf);
  int identity(int x) const { return cat_.ident[x]; }
  FinCategory finish();
  FinCategory& raw() { return cat_; }

 private:
  FinCategory cat_;
  std::vector<std::array<int, 3>> comps_;
};

Report validate_category(const FinCategory& c);
Report validate_functor(const FinFunctor& f);

FinCategory opposite(const FinCategory& c);
FinCategory product(const FinCategory& c, const FinCategory& d);
FinCategory chain(int n);
FinCategory discrete(const std::vector<std::string>& names);
FinCategory terminal_category();

FinFunctor identity_functor(CategoryPtr c);
FinFunctor opposite(const FinFunctor& f);
FinFunctor compose(const FinFunctor& g, const FinFunctor& f);  // g∘f
FinFunctor to_terminal(CategoryPtr c);
FinFunctor projection_first(CategoryPtr c, CategoryPtr d, CategoryPtr cd);

// Hom-set bijection criterion.
bool is_cartesian_arrow(const FinFunctor& p, int alpha);
std::vector<bool> cartesian_arrows(const FinFunctor& p);

struct LiftRecord {
  int base = -1;     // morphism of the base
  int endpoint = -1; // object of the total category over the relevant end
  std::vector<int> lifts;
};

struct FibrationAnalysis {
  bool ok = false;
  std::vector<LiftRecord> lifts;  // one per lifting problem
  std::string failure;            // human-readable witness when !ok
};

FibrationAnalysis analyze_cartesian_fibration(const FinFunctor& p);
bool is_cartesian_fibration(const FinFunctor& p);
bool is_cocartesian_fibration(const FinFunctor& p);
bool is_right_fibration(const FinFunctor& p);
bool is_left_fibration(const FinFunctor& p);

// Isomorphism search between finite categories, optionally over a common base
// (pa: a -> base, pb: b -> base must then be given). Returns object and
// morphism maps of an isomorphism a -> b.
struct CategoryIso {
  std::vector<int> on_objects, on_morphisms;
};
std::optional<CategoryIso> find_isomorphism(const FinCategory& a, const FinCategory& b,
                                            const FinFunctor* pa = nullptr,
                                            const FinFunctor* pb = nullptr);
bool is_isomorphism(const FinFunctor& f);
bool is_equivalence(const FinFunctor& f);

}  // namespace dblcat

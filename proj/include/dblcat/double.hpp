#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dblcat/category.hpp"

namespace dblcat {

// Finite strict double category. A square s has
//   top    s_top[s]   : a -> b   (horizontal)
//   bottom s_bot[s]   : c -> d   (horizontal)
//   left   s_left[s]  : a => c   (vertical)
//   right  s_right[s] : b => d   (vertical)
// s_hcomp(t, s) pastes t to the right of s; s_vcomp(t, s) pastes t below s.
struct FinDoubleCategory {
  std::vector<std::string> objects, h_names, v_names, s_names;
  std::vector<int> h_src, h_tgt, h_id;
  std::vector<int> v_src, v_tgt, v_id;
  std::vector<int> s_top, s_bot, s_left, s_right;
  std::vector<int> s_hid;  // per v-arrow: unit square for horizontal pasting
  std::vector<int> s_vid;  // per h-arrow: unit square for vertical pasting
  CompTable h_comp, v_comp, s_hcomp, s_vcomp;

  // Adjacency built by index().
  std::vector<std::vector<int>> h_out, h_in, v_out, v_in;
  std::vector<std::vector<int>> s_by_left, s_by_top, s_by_right, s_by_bot;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_h() const { return static_cast<int>(h_names.size()); }
  int num_v() const { return static_cast<int>(v_names.size()); }
  int num_s() const { return static_cast<int>(s_names.size()); }
  int hcomp(int g, int f) const { return h_comp.get(g, f); }
  int vcomp(int g, int f) const { return v_comp.get(g, f); }
  int shcomp(int t, int s) const { return s_hcomp.get(t, s); }
  int svcomp(int t, int s) const { return s_vcomp.get(t, s); }
  bool h_is_id(int f) const { return h_id[h_src[f]] == f; }
  bool v_is_id(int f) const { return v_id[v_src[f]] == f; }

  // Allocates composition tables for the current cell counts.
  void reset_tables();
  void index();
  bool operator==(const FinDoubleCategory& o) const;
};

using DoublePtr = std::shared_ptr<const FinDoubleCategory>;

enum class MarkDirection { Vertical, Horizontal };

struct MarkedDoubleCategory {
  DoublePtr base;
  MarkDirection direction = MarkDirection::Vertical;
  std::vector<bool> marked;  // indexed by v-arrows or h-arrows per direction
};

Report validate_marked(const MarkedDoubleCategory& m);

struct DoubleFunctor {
  DoublePtr source, target;
  std::vector<int> ob, h, v, s;
  bool operator==(const DoubleFunctor& o) const {
    return ob == o.ob && h == o.h && v == o.v && s == o.s;
  }
  bool operator<(const DoubleFunctor& o) const {
    return std::tie(ob, h, v, s) < std::tie(o.ob, o.h, o.v, o.s);
  }
};

Report validate_double(const FinDoubleCategory& d);
Report validate_double_functor(const DoubleFunctor& f);

FinCategory horizontal_category(const FinDoubleCategory& d);
FinCategory vertical_category(const FinDoubleCategory& d);
FinFunctor horizontal_part(const DoubleFunctor& f);
FinFunctor vertical_part(const DoubleFunctor& f);

// (C ⊠ D): objects pairs; h-arrows (arrow of c, object of d); v-arrows
// (object of c, arrow of d); squares (arrow of c, arrow of d).
FinDoubleCategory boxtimes(const FinCategory& c, const FinCategory& d);
FinDoubleCategory product(const FinDoubleCategory& a, const FinDoubleCategory& b);
FinDoubleCategory grid(int m, int n);
FinDoubleCategory terminal_double();
FinDoubleCategory arrow_double(int n);
FinDoubleCategory twisted_double(int n);
DoubleFunctor pi_hor(int n);   // Ar[n] -> grid(n, 0), (i, j) -> j
DoubleFunctor pi_vert(int n);  // Ar[n] -> grid(0, n), (i, j) -> i
FinCategory arrow_category(const FinCategory& c);  // Fun([1], c)

FinDoubleCategory op(const FinDoubleCategory& d, int k);  // k = 1 or 2
FinDoubleCategory reverse(const FinDoubleCategory& d);
DoubleFunctor op(const DoubleFunctor& f, int k);
DoubleFunctor reverse(const DoubleFunctor& f);

bool is_gaunt(const FinDoubleCategory& d);

DoubleFunctor identity_double_functor(DoublePtr d);
DoubleFunctor compose(const DoubleFunctor& g, const DoubleFunctor& f);  // g∘f
DoubleFunctor to_terminal(DoublePtr d);
DoubleFunctor boxtimes(const FinFunctor& f, const FinFunctor& g,
                       DoublePtr source, DoublePtr target);
DoubleFunctor product_projection(DoublePtr a, DoublePtr b, DoublePtr ab, int factor);

// Strict pullback of p: D -> C along g: C' -> C.
struct Pullback {
  DoublePtr total;
  DoubleFunctor projection;  // D' -> C'
  DoubleFunctor to_source;   // D' -> D
};
Pullback pullback(const DoubleFunctor& p, const DoubleFunctor& g);

// Cell lookup for double categories with at most one arrow per endpoint pair
// and at most one square per corner quadruple (grid, Ar, Tw and products).
struct ThinIndex {
  std::unordered_map<std::uint64_t, int> h, v;
  std::unordered_map<std::uint64_t, int> s;  // keyed by the four corners
  explicit ThinIndex(const FinDoubleCategory& d);
  int h_arrow(int a, int b) const;
  int v_arrow(int a, int b) const;
  // Corners: a top-left, b top-right, c bottom-left, d bottom-right.
  int square(int a, int b, int c, int d) const;
  bool thin = true;
  int nobj = 0;
};

// Extends an object map between thin double categories to a double functor;
// nullopt if some cell has no image.
std::optional<DoubleFunctor> thin_extend(DoublePtr src, DoublePtr tgt, const ThinIndex& tix,
                                         const std::vector<int>& on_objects);

std::string describe_square(const FinDoubleCategory& d, int s);

}  // namespace dblcat

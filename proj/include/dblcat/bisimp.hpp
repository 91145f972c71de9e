#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dblcat/enumerate.hpp"
#include "dblcat/reflect.hpp"

namespace dblcat {

// One shape S[m, n] of a kernel. Every kernel shape here is thin, so objects
// carry integer coordinates and all cells are determined by their corners.
struct KernelCell {
  int m = 0, n = 0;
  DoublePtr shape;
  std::vector<bool> marked;  // per arrow of the kernel's marking direction
  DoubleFunctor structure;   // shape -> grid(m, n)
  std::vector<std::vector<int>> coords;  // per object
  std::map<std::vector<int>, int> by_coords;
  std::shared_ptr<const ThinIndex> index;
};

struct Kernel {
  std::string name;
  MarkDirection direction = MarkDirection::Vertical;
  int max_m = 3, max_n = 3;
  int extra_m = 1, extra_n = 0;  // degree carrying the additional marking
  // Per coordinate: acted on by the horizontal (true) or vertical (false) map.
  std::vector<bool> coord_horizontal;
  std::function<KernelCell(int, int)> build;
  std::function<std::vector<bool>(const KernelCell&)> extra;

  const KernelCell& cell(int m, int n) const;
  // Marking of cell(extra_m, extra_n) including the additional arrows.
  std::vector<bool> extra_marked() const;
  // S[m', n'] -> S[m, n] induced by monotone hmap: [m'] -> [m], vmap: [n'] -> [n].
  DoubleFunctor act(int m, int n, const std::vector<int>& hmap, const std::vector<int>& vmap) const;

 private:
  mutable std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
  mutable std::shared_ptr<std::map<std::pair<int, int>, KernelCell>> cache_ =
      std::make_shared<std::map<std::pair<int, int>, KernelCell>>();
};

// K[m, n] = Ar[m] x [0, n], marked verticals in {ii} x [0, n]; extra: 01 => 11 in Ar[1].
Kernel kernel_K();
// K'[m, n] = [m, 0] x Ar[n], marked horizontals in [m, 0] x {ii}; extra: all of Ar[1].
Kernel kernel_Kprime();
// L[m, n] = [m, 0] x Tw[n], with Tw[n] the reversed and horizontally opposite Ar[n];
// marked horizontals in [m, 0] x {ii}; extra: all horizontals of Tw[1].
Kernel kernel_L();
// A[m, n] = Ar[m] x [0, n], marked verticals in Ar[m] x {k}; extra: all of [0, 1].
Kernel kernel_A();
// B[m, n] = Ar[m] x ([0] ⊠ Fun([1], [n])); extra: all verticals of B[0, 1].
Kernel kernel_B();

// Marking of p's source matching the kernel direction: cartesian v-arrows or
// cocartesian h-arrows.
MarkedDoubleCategory natural_marking(const DoubleFunctor& p, MarkDirection direction);

// Marked double functors S[m, n] -> D lying over some grid(m, n) -> C through
// the structure map. Sorted.
std::vector<DoubleFunctor> psi_eval(const Kernel& S, const DoubleFunctor& p,
                                    const MarkedDoubleCategory& marking, int m, int n,
                                    std::size_t cap = 0);
std::vector<DoubleFunctor> psi_eval(const Kernel& S, const DoubleFunctor& p, int m, int n,
                                    std::size_t cap = 0);
// Which elements at the extra degree also preserve the additional marking.
std::vector<bool> psi_marked(const Kernel& S, const MarkedDoubleCategory& marking,
                             const std::vector<DoubleFunctor>& elements);

// Map between two enumerated degree sets.
struct DegreeComparison {
  std::string name;
  int m = 0, n = 0;
  std::size_t domain = 0, codomain = 0;
  bool bijective = false;
  std::vector<int> map;  // domain index -> codomain index
  std::string detail;    // mismatch witness when not bijective
};

// F: K[m, n] -> D  |->  grid(m, n) -> Psi_perp(D).
DoubleFunctor kernel_witness(const Reflection& e, const DoubleFunctor& f, int m, int n);
DegreeComparison kernel_agreement(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);

DegreeComparison zig_zeta(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);
DegreeComparison zig_eta(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);
// Psi_B(m, n) -> Psi_T(m, n), the latter evaluated as Psi_K' of the reflection.
DegreeComparison zig_theta(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);

std::vector<DoubleFunctor> psi_T_eval(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);
// Psi_T(m, n) -> nerve of Psi_top(Psi_perp(D)) through the conjugation identities.
DegreeComparison psi_T_agreement(const DoubleFunctor& p, int m, int n, std::size_t cap = 0);

// Direct evaluation of T[m, n] in degree (s, t): quadruples of monotone maps
// with a, b <= bound modulo maps of the [a] and [b] components. Run at bound
// and bound + 1; differing class counts make the result inconclusive.
struct TOracleResult {
  int m = 0, n = 0, s = 0, t = 0, bound = 0;
  std::size_t classes = 0;
  std::size_t classes_next = 0;
  bool stable = false;
  std::size_t quadruples = 0;
  std::string note;
};
TOracleResult t_oracle(int m, int n, int s, int t, int bound = -1);

}  // namespace dblcat

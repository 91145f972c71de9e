#pragma once

#include <string>
#include <vector>

#include "dblcat/double.hpp"

namespace dblcat {

// One of the eight orientations. One direction carries a discrete (left or
// right) lifting condition on arrows and squares; the other direction's
// 1-category must be a cartesian or cocartesian fibration.
struct FibKind {
  bool discrete_horizontal = true;  // which direction is discrete
  bool discrete_left = true;        // left: lifts given source; right: given target
  bool cartesian = true;            // the other direction: cart or cocart

  std::string name() const;  // horizontal leg first, e.g. "left-cart", "cocart-right"
  static FibKind parse(const std::string& s);
  static std::vector<FibKind> all();
  bool operator==(const FibKind& o) const = default;
};

inline const FibKind kLeftCart{true, true, true};
inline const FibKind kCocartRight{false, false, false};

struct LiftEntry {
  std::string leg;   // "h-arrow", "v-arrow", "square", or "fibration"
  int anchor = -1;   // given cell of the total category (object or edge)
  int base = -1;     // cell of the base to lift
  int solution = -1; // unique lift (for "fibration": a chosen (co)cartesian lift)
  int count = 0;     // number of solutions found
};

struct FibrationCertificate {
  FibKind kind;
  bool ok = false;
  std::string failure;
  std::vector<LiftEntry> lifts;
  MarkDirection marked_direction = MarkDirection::Vertical;
  std::vector<bool> marked;  // (co)cartesian arrows of the fibration direction
};

FibrationCertificate check_fibration(const DoubleFunctor& p, const FibKind& kind,
                                     bool paranoid = false);
FibrationCertificate is_left_cart_fibration(const DoubleFunctor& p, bool paranoid = false);
FibrationCertificate is_cocart_right_fibration(const DoubleFunctor& p, bool paranoid = false);

// Recomputes every recorded lifting problem and compares; also checks that
// the certificate covers every problem.
Report replay_certificate(const DoubleFunctor& p, const FibrationCertificate& cert);

// op_1 op_2 rev, applied to source and target.
DoubleFunctor conjugate(const DoubleFunctor& p);
FinDoubleCategory conjugate(const FinDoubleCategory& d);

MarkedDoubleCategory mark_cartesian_verticals(const DoubleFunctor& p);
// Horizontal arrows that are cocartesian for the horizontal 1-category.
MarkedDoubleCategory mark_cocartesian_horizontals(const DoubleFunctor& p);

// Square  D --f--> D'
//         p|       |q
//         C --g--> C'
// between (left, cart)-fibrations; strong iff f keeps cartesian v-arrows cartesian.
struct StrongMapResult {
  bool commutes = false;
  bool strong = false;
  std::string witness;
};
StrongMapResult is_strong_map(const DoubleFunctor& f, const DoubleFunctor& g, const DoubleFunctor& p,
                              const DoubleFunctor& q);

struct FiberReport {
  FinCategory fiber;  // objects over c, v-arrows over the identity of c
  std::vector<int> objects, arrows;
  bool horizontally_constant = false;  // h-arrows over the identity are identities
};
FiberReport fiber(const DoubleFunctor& p, int c);
// Horizontal fiber: objects over c and h-arrows over the identity.
FiberReport horizontal_fiber(const DoubleFunctor& p, int c);

}  // namespace dblcat

#pragma once

#include <functional>
#include <vector>

#include "dblcat/double.hpp"

namespace dblcat {

// All double functors F: shape -> target, optionally lying over a fixed map
// g: shape -> C through p: target -> C, sending marked shape arrows to marked
// target arrows and agreeing with any fixed object images.
struct LiftProblem {
  DoublePtr shape;
  DoublePtr target;
  const DoubleFunctor* p = nullptr;
  const DoubleFunctor* base = nullptr;  // g; required iff p is set
  const std::vector<bool>* shape_marked = nullptr;
  const std::vector<bool>* target_marked = nullptr;
  MarkDirection direction = MarkDirection::Vertical;
  std::vector<int> fixed_objects;  // empty, or per shape object: image or -1
  std::size_t cap = 0;             // 0: default_cell_cap()
};

// Calls visit on each solution in search order; visit returns false to stop.
// Throws ResourceLimit when solutions or search nodes exceed the cap.
std::size_t enumerate_lifts(const LiftProblem& problem,
                            const std::function<bool(const DoubleFunctor&)>& visit);
std::vector<DoubleFunctor> all_lifts(const LiftProblem& problem);

// Double functors grid(m, n) -> d, sorted.
std::vector<DoubleFunctor> nerve_eval(DoublePtr d, int m, int n, std::size_t cap = 0);

// Restriction of F: grid(m, n) -> D to the columns [i, i + 1] (horizontal) or
// rows [i, i + 1] (vertical).
DoubleFunctor restrict_columns(const DoubleFunctor& f, int m, int n, int i);
DoubleFunctor restrict_rows(const DoubleFunctor& f, int m, int n, int i);

// Checks that restriction to consecutive columns is a bijection
// N(m, n) -> N(1, n) x_{N(0, n)} ... x_{N(0, n)} N(1, n), and likewise for rows.
struct SegalReport {
  bool ok = true;
  std::size_t lhs = 0, rhs = 0;
  std::string detail;
};
SegalReport segal_check(DoublePtr d, int m, int n, std::size_t cap = 0);

}  // namespace dblcat

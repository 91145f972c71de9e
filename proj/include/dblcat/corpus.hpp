#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dblcat/io.hpp"

namespace dblcat {

struct CorpusOptions {
  std::uint64_t seed = 1;
  int count = 200;             // generated fibrations, fixtures not included
  int max_base_objects = 6;
  int max_fiber_objects = 3;
};

struct CorpusEntry {
  std::string name;
  std::string provenance;  // copresheaf | two-sided | base-change | composite
  DoubleFunctor p;         // (left, cart)-fibration
  std::optional<CatValuedFunctor> functor;  // when p = copresheaf_of(functor)
  bool gaunt = false;
};

// Functors a -> b, in enumeration order.
std::vector<FinFunctor> all_functors(CategoryPtr a, CategoryPtr b, std::size_t cap = 0);

// Random gaunt bases: posets on 0..n-1 with i < j only, or free categories on
// a small acyclic multigraph.
FinCategory random_poset(std::mt19937_64& rng, int n);
FinCategory random_free_category(std::mt19937_64& rng, int n);
// Strict functor pulled back from a random chain-shaped diagram along a
// monotone rank; objects must be numbered compatibly with the order.
CatValuedFunctor random_cat_valued(std::mt19937_64& rng, CategoryPtr base, int max_fiber_objects);

// Deterministic per options. Every entry is certified before it is returned.
std::vector<CorpusEntry> generate_corpus(const CorpusOptions& opt);

// Fixed fixtures plus the generated entries, each with its certificate.
std::vector<Instance> corpus_instances(const CorpusOptions& opt);

// The fixture category-valued functor chain(1) -> Cat used by the shipped
// copresheaf fixture.
CatValuedFunctor fixture_cat_valued();
// [0] ⊠ A over the terminal double category.
DoubleFunctor transposition_fixture(CategoryPtr a);
// Gaunt small categories used as fibers.
std::vector<FinCategory> fiber_pool();

}  // namespace dblcat

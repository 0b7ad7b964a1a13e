#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "toposfactor/fincat.hpp"

namespace toposfactor {

struct UniverseBounds {
  std::size_t max_objects = 3;
  std::size_t max_parallel = 2;
};

// Reads TOPOSFACTOR_MAXOBJ as "N" or "N,P" (objects, parallel arrows).
// Errors: PreconditionViolated on malformed values.
UniverseBounds bounds_from_env();

// Every finite category within the bounds, one per isomorphism class, in a
// deterministic order (by object count, then canonical form).
std::vector<CategoryRef> enumerate_categories(const UniverseBounds& bounds);

// All composition tables on the given hom-size matrix (identity first in
// each endo hom), without removing isomorphic copies.
std::vector<FinCategory> categories_with_homs(const std::vector<std::vector<std::size_t>>& homs,
                                              std::size_t limit = 0);

// Canonical serialization, equal exactly for isomorphic categories.
std::vector<std::uint32_t> canonical_form(const FinCategory& c);

// Visits every functor between every ordered pair of universe categories.
void for_each_universe_functor(const std::vector<CategoryRef>& universe,
                               const std::function<void(const FinFunctor&)>& visit);

struct SweepOptions {
  // Pairs (C, D) with |C| * |D| at most this are swept exhaustively.
  std::size_t exhaustive_max_product = 6;
  // Functors drawn from the remaining pairs: a pair uniformly, then a
  // functor uniformly.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct SweepStats {
  std::size_t exhaustive = 0;
  std::size_t sampled = 0;
  std::size_t pairs_exhaustive = 0;
  std::size_t pairs_sampled = 0;
};

// Calls `visit` on every functor of the exhaustive pairs and on the samples.
// `visit` runs concurrently on worker threads and must be thread-safe. The
// set of visited functors depends only on the options, not on scheduling.
SweepStats sweep_universe(const std::vector<CategoryRef>& universe, const SweepOptions& options,
                          const std::function<void(const FinFunctor&)>& visit);

// A random category on exactly `objects` objects with hom-sets bounded by
// `max_parallel`, obtained from a random hom-size matrix and a randomized
// composition search.
CategoryRef random_category(std::mt19937_64& rng, std::size_t objects, std::size_t max_parallel);
// A uniformly chosen functor C -> D; nullopt when there is none.
std::optional<FinFunctor> random_functor(std::mt19937_64& rng, const CategoryRef& c,
                                         const CategoryRef& d);

}  // namespace toposfactor

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "toposfactor/fincat.hpp"
#include "toposfactor/presheaf.hpp"

namespace toposfactor {

// --- comma categories -----------------------------------------------------------

struct CommaObject {
  ObjId a;
  ObjId b;
  MorId h;  // F a -> G b
  friend auto operator<=>(const CommaObject&, const CommaObject&) = default;
};

struct CommaCategory {
  CategoryRef base;
  FinFunctor proj_left;   // to the domain of F
  FinFunctor proj_right;  // to the domain of G
  std::vector<CommaObject> objects;
};

// F : A -> C, G : B -> C. Objects (a, b, h : F a -> G b), ordered by a, b, h;
// morphisms (k, l) with G(l) . h = h' . F(k).
CommaCategory comma(const FinFunctor& f, const FinFunctor& g);

// The coslice d|u = comma(const_d, u) and slice u|d = comma(u, const_d).
CommaCategory coslice(ObjId d, const FinFunctor& u);
CommaCategory slice(const FinFunctor& u, ObjId d);

// --- connected components ---------------------------------------------------------

struct Components {
  std::size_t count = 0;
  std::vector<std::size_t> label;  // object -> component, numbered by least object
};

Components pi0(const FinCategory& c);

// Components of d|u computed without building the comma: objects are the
// arrows h : d -> u c listed as (c, h) in order of c then h.
struct CommaComponents {
  std::vector<std::pair<ObjId, MorId>> objects;
  Components components;
  // Component of (c, h), or npos when (c, h) is not an object.
  std::size_t component_of(ObjId c, MorId h) const;
};
CommaComponents coslice_components(ObjId d, const FinFunctor& u);
CommaComponents slice_components(const FinFunctor& u, ObjId d);

// --- cofilteredness, initiality, finality -------------------------------------------------

Check is_cofiltered(const FinCategory& c);
// Every F|i (comma(F, const_i)) non-empty and connected.
Check is_initial_functor(const FinFunctor& f);
// Every i|F non-empty and connected.
Check is_final_functor(const FinFunctor& f);

Check is_discrete_fibration(const FinFunctor& f);
Check is_discrete_opfibration(const FinFunctor& f);

// --- functor and transformation search ---------------------------------------------------

// Calls visit on every functor C -> D in lexicographic order of (object map,
// morphism map); stops when visit returns false.
void for_each_functor(const CategoryRef& c, const CategoryRef& d,
                      const std::function<bool(const FinFunctor&)>& visit);
std::vector<FinFunctor> all_functors(const CategoryRef& c, const CategoryRef& d);

std::vector<NatTransf> all_natural_transformations(const FinFunctor& f, const FinFunctor& g);
std::vector<NatTransf> natural_isomorphisms(const FinFunctor& f, const FinFunctor& g);
std::optional<NatTransf> find_natural_isomorphism(const FinFunctor& f, const FinFunctor& g);

// Isomorphism of categories (bijective functor), and equivalence.
std::optional<FinFunctor> find_isomorphism(const CategoryRef& c, const CategoryRef& d);
// Full subcategory on one object per isomorphism class (least object id).
FinCategory skeleton(const FinCategory& c);
bool equivalent(const CategoryRef& c, const CategoryRef& d);
// Whether f is full, faithful and essentially surjective.
bool is_equivalence(const FinFunctor& f);

// --- orthogonal fillers -------------------------------------------------------------------

enum class FillerClasses {
  FinalFibration,      // l final, r discrete fibration
  InitialOpfibration,  // l initial, r discrete opfibration
};

struct Square {
  FinFunctor l;       // A -> B
  FinFunctor r;       // C -> D
  FinFunctor top;     // A -> C
  FinFunctor bottom;  // B -> D
  NatTransf alpha;    // r . top  =>  bottom . l, invertible
};

struct Filler {
  FinFunctor s;    // B -> C
  NatTransf beta;  // s . l  =>  top
  NatTransf gamma; // r . s  =>  bottom
};

// Errors: NoFiller when the classes of l, r are wrong, alpha is not an
// isomorphism, or no filler exists. Throws InvariantViolation if two fillers
// fail to be naturally isomorphic.
Filler diagonal_filler(const Square& sq, FillerClasses classes = FillerClasses::FinalFibration);
// All fillers with coherent 2-cells (exhaustive).
std::vector<Filler> all_fillers(const Square& sq);

// --- cocomma collage --------------------------------------------------------------------

struct Collage {
  CategoryRef base;
  FinFunctor q1;  // C -> base, the inclusion parallel to f
  FinFunctor q2;  // B -> base, the inclusion parallel to g
  std::vector<MorId> formal_arrows;  // psi_a : f a -> g a, per object of A
  bool terminals_merged = false;
};

// f : A -> B, g : A -> C. Objects are those of B followed by those of C; the
// arrows from B to C are classes [x, a, y] of x : b -> f a, y : g a -> c
// modulo (f(k) x, a', y) ~ (x, a, y g(k)). When A has a terminal object
// sent to terminal objects by f and g, psi at it is made an identity.
Collage cocomma_collage(const FinFunctor& f, const FinFunctor& g);

// --- finite limits inside a category ------------------------------------------------------

struct PullbackCone {
  ObjId apex;
  MorId left;   // apex -> source of f
  MorId right;  // apex -> source of g
};

// f p1 = g p2 and every other commuting pair factors uniquely through (p1, p2).
bool is_pullback(const FinCategory& c, MorId f, MorId g, MorId p1, MorId p2);
// The first pullback of the cospan f, g in (apex, left, right) order.
std::optional<PullbackCone> find_pullback(const FinCategory& c, MorId f, MorId g);
// p1 : p -> a, p2 : p -> b form a product.
bool is_product(const FinCategory& c, ObjId a, ObjId b, MorId p1, MorId p2);
std::optional<PullbackCone> find_product(const FinCategory& c, ObjId a, ObjId b);

}  // namespace toposfactor

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toposfactor/fincat.hpp"

namespace toposfactor {

// A contravariant functor C^op -> FinSet. Elements of X(c) are the integers
// 0..size(c)-1, each carrying a display name. For g : c' -> c the action
// X(g) : X(c) -> X(c') is stored as a vector indexed by elements of X(c).
class FinPresheaf {
 public:
  // Errors: NotFunctorial when actions(id) != id or actions(g . h) !=
  // actions(h) . actions(g); UnknownName on mismatched dimensions.
  static FinPresheaf make(CategoryRef base, std::vector<std::vector<std::string>> elements,
                          std::vector<std::vector<std::size_t>> actions, std::string name = {});
  static FinPresheaf trusted(CategoryRef base, std::vector<std::vector<std::string>> elements,
                             std::vector<std::vector<std::size_t>> actions,
                             std::string name = {});

  FinPresheaf() = default;

  const CategoryRef& base() const noexcept { return base_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size(ObjId c) const { return elements_[c].size(); }
  const std::vector<std::string>& elements(ObjId c) const { return elements_[c]; }
  const std::string& element_name(ObjId c, std::size_t x) const { return elements_[c][x]; }
  std::optional<std::size_t> find_element(ObjId c, std::string_view name) const;

  // X(g)(x) for g : c' -> c and x in X(c).
  std::size_t act(MorId g, std::size_t x) const { return actions_[g][x]; }
  const std::vector<std::size_t>& action(MorId g) const { return actions_[g]; }
  const std::vector<std::vector<std::size_t>>& actions() const noexcept { return actions_; }
  std::size_t total_size() const;

  Check check_functoriality() const;
  FinPresheaf renamed(std::string name) const;

 private:
  CategoryRef base_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::vector<std::size_t>> actions_;
  std::string name_;
};

// A compatible family: family[c] in X(c) with X(g)(family[c]) = family[c'].
struct GlobalElement {
  std::vector<std::size_t> family;
  friend auto operator<=>(const GlobalElement&, const GlobalElement&) = default;
};

class PresheafMap {
 public:
  // components[c][x] = image of x in Y(c). Errors: NotNatural.
  static PresheafMap make(FinPresheaf source, FinPresheaf target,
                          std::vector<std::vector<std::size_t>> components);
  static PresheafMap trusted(FinPresheaf source, FinPresheaf target,
                             std::vector<std::vector<std::size_t>> components);
  static PresheafMap identity(const FinPresheaf& x);

  PresheafMap() = default;

  const FinPresheaf& source() const noexcept { return source_; }
  const FinPresheaf& target() const noexcept { return target_; }
  std::size_t at(ObjId c, std::size_t x) const { return components_[c][x]; }
  const std::vector<std::vector<std::size_t>>& components() const noexcept {
    return components_;
  }

  Check check_naturality() const;
  bool is_isomorphism() const;
  bool is_monomorphism() const;

  friend bool operator==(const PresheafMap& a, const PresheafMap& b) {
    return a.components_ == b.components_;
  }

 private:
  FinPresheaf source_;
  FinPresheaf target_;
  std::vector<std::vector<std::size_t>> components_;
};

// g . f
PresheafMap compose(const PresheafMap& g, const PresheafMap& f);

// --- basic presheaves --------------------------------------------------------

FinPresheaf terminal_presheaf(CategoryRef c);
FinPresheaf initial_presheaf(CategoryRef c);
// X(d) = Hom(d, c), acting by precomposition. Elements are named by morphisms.
FinPresheaf representable(CategoryRef c, ObjId obj);
// The constant presheaf on a finite set of the given size (coproduct of terminals).
FinPresheaf constant_presheaf(CategoryRef c, std::size_t n);

// Map into the terminal presheaf.
PresheafMap terminal_map(const FinPresheaf& x);
// The global element a seen as a map 1 -> X.
PresheafMap element_as_map(const FinPresheaf& x, const GlobalElement& a);

// --- global elements and maps --------------------------------------------------

bool is_global_element(const FinPresheaf& x, const GlobalElement& a);
// All compatible families, in lexicographic order of families.
std::vector<GlobalElement> global_elements(const FinPresheaf& x);
// All natural transformations X -> Y, lexicographically ordered.
std::vector<PresheafMap> all_maps(const FinPresheaf& x, const FinPresheaf& y);
// Some isomorphism X -> Y, if one exists.
std::optional<PresheafMap> find_isomorphism(const FinPresheaf& x, const FinPresheaf& y);
bool isomorphic(const FinPresheaf& x, const FinPresheaf& y);

// --- pointwise (co)limits -----------------------------------------------------

// A finite diagram of presheaves on a common base: nodes plus maps between them.
struct PresheafDiagram {
  struct Edge {
    std::size_t from;
    std::size_t to;
    PresheafMap map;
  };
  std::vector<FinPresheaf> nodes;
  std::vector<Edge> edges;
};

struct Cone {
  FinPresheaf apex;
  std::vector<PresheafMap> legs;  // one per node; apex -> node (limit) or node -> apex (colimit)
};

// Errors: PreconditionViolated when the diagram is empty or mixes bases.
Cone presheaf_limit(const PresheafDiagram& d);
Cone presheaf_colimit(const PresheafDiagram& d);

// The unique map from `source` into the limit apex whose composites with the
// legs are `legs` (one per diagram node).
PresheafMap factor_through_limit(const Cone& limit, const FinPresheaf& source,
                                 const std::vector<PresheafMap>& legs);

// Convenience wrappers with named legs.
Cone product(const FinPresheaf& x, const FinPresheaf& y);
Cone coproduct(const FinPresheaf& x, const FinPresheaf& y);
Cone pullback(const PresheafMap& f, const PresheafMap& g);

// --- elements, slices, fibers ---------------------------------------------------

// The category of elements of X with its projection; objects are (c, x) in
// order of c then x, morphisms (g, x) : (c', X(g)x) -> (c, x).
struct Elements {
  FinPresheaf presheaf;
  CategoryRef category;
  FinFunctor projection;
  std::vector<std::size_t> offset;  // object id of (c, 0)

  ObjId object(ObjId c, std::size_t x) const { return offset[c] + x; }
  ObjId base_object(ObjId e) const { return projection.on_object(e); }
  std::size_t element(ObjId e) const { return e - offset[base_object(e)]; }
  // The morphism of the elements category lying over g with codomain (c, x).
  MorId lift(MorId g, std::size_t x) const;

  std::vector<std::size_t> mor_offset;
};

Elements category_of_elements(const FinPresheaf& x);

// Fiber presheaf of h : D -> E over the global element a of E.
FinPresheaf pullback_of_element(const GlobalElement& a, const PresheafMap& h);

// The equivalence PSh(C)/X ~ PSh(elements of X), in both directions.
struct SliceTranslation {
  Elements elements;
  // From a map h : D -> X to the presheaf of fibers on the elements category.
  FinPresheaf to_elements(const PresheafMap& h) const;
  // From a presheaf P on the elements category to the total map  sum P -> X.
  PresheafMap from_elements(const FinPresheaf& p) const;
};

SliceTranslation slice_as_elements(const FinPresheaf& x);

// Round trip h -> fibers -> total map, compared with h over X.
Check slice_roundtrip(const SliceTranslation& s, const PresheafMap& h);

// Restriction of a presheaf on D along a functor u : C -> D.
FinPresheaf restrict(const FinPresheaf& x, const FinFunctor& u);
PresheafMap restrict(const PresheafMap& m, const FinFunctor& u);

}  // namespace toposfactor

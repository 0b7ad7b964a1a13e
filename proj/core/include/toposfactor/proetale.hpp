#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "toposfactor/constructions.hpp"
#include "toposfactor/fincat.hpp"
#include "toposfactor/presheaf.hpp"

namespace toposfactor {

// A functor I -> C with I cofiltered; d : i -> j gives u_d : C_i -> C_j.
class CofilteredDiagram {
 public:
  // Errors: NotCofiltered.
  static CofilteredDiagram make(FinFunctor diagram, std::string name = {});

  const FinFunctor& functor() const noexcept { return diagram_; }
  const CategoryRef& index() const noexcept { return diagram_.domain(); }
  const CategoryRef& target() const noexcept { return diagram_.codomain(); }
  const std::string& name() const noexcept { return name_; }
  ObjId at(ObjId i) const { return diagram_.on_object(i); }
  MorId along(MorId d) const { return diagram_.on_morphism(d); }

 private:
  FinFunctor diagram_;
  std::string name_;
};

// members[i]: arrows h : D -> C_i of the target category; must contain the
// identity of C_i and be closed under the chosen pullbacks.
struct SliceSystem {
  std::vector<std::vector<MorId>> members;
};

// Every arrow into each C_i.
SliceSystem full_slice_system(const CofilteredDiagram& diag);

struct OplaxObject {
  ObjId index;
  MorId h;  // D -> C_index
  friend auto operator<=>(const OplaxObject&, const OplaxObject&) = default;
};

// (d, g) : (i0, h0) -> (i1, h1) with h1 . g = u_d . h0.
struct OplaxMorphism {
  MorId d;
  MorId g;
};

struct ChosenPullback {
  MorId leg;    // member of S_i, the pullback of h along u_d
  MorId cover;  // the map from its domain to the domain of h
};

struct MarkedOplaxColimit {
  CofilteredDiagram diagram;
  SliceSystem slices;
  CategoryRef category;
  std::vector<OplaxObject> objects;
  std::vector<OplaxMorphism> morphisms;
  std::vector<bool> vertical;
  std::vector<bool> cartesian;
  FinFunctor projection;  // to I
  std::map<std::pair<MorId, MorId>, ChosenPullback> pullbacks;  // keyed by (d, h)

  ObjId object_of(ObjId i, MorId h) const;
};

// Errors: PreconditionViolated when some S_i misses the identity or has a
// foreign arrow; MissingPullback(d, h) when S is not reindexing-closed.
MarkedOplaxColimit build_oplax_colimit(const CofilteredDiagram& diag, const SliceSystem& slices);

// Closure of the cartesian class under composition, the right Ore condition
// and equalization.
Check check_ore(const MarkedOplaxColimit& mol);
// Every morphism is a cartesian morphism after a vertical one.
Check check_vertical_cartesian_factorization(const MarkedOplaxColimit& mol);

// A span X <-back- W -forth-> Y with `back` cartesian.
struct Span {
  MorId back;
  MorId forth;
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct FractionCategory {
  MarkedOplaxColimit mol;
  CategoryRef category;                       // same objects as mol.category
  std::vector<Span> representative;           // least span of each morphism class
  std::vector<std::vector<Span>> members;     // every span of each class, sorted
  std::map<Span, MorId> class_of;
  std::vector<CategoryRef> slices;            // S_i as categories
  std::vector<FinFunctor> inclusions;         // q_i : S_i -> category
  std::vector<std::vector<ObjId>> slice_objects;  // S_i object -> mol object
};

// Errors: OreFailed. Composition is verified independent of representatives
// and Ore squares; a failure throws InvariantViolation.
FractionCategory localize(const MarkedOplaxColimit& mol);

// A global element of p(c), normalized to a vertical representative
// a : C_index -> c.
struct PseudoGlobalElement {
  MorId cls;  // morphism of fc from the terminal element to the product object
  ObjId index;
  MorId a;
};

// Errors: MissingProduct when S_{i0} has no projection C_{i0} x c -> C_{i0},
// where i0 is the first index object.
std::vector<PseudoGlobalElement> pseudocolim_global_elements(const FractionCategory& fc, ObjId c);

// Classes of pairs (i, a : C_i -> c) under (i, a) ~ (k, a . u_e) for e : k -> i.
struct ColimitHom {
  std::vector<std::pair<ObjId, MorId>> pairs;
  std::vector<std::size_t> label;
  std::size_t count = 0;
  std::size_t class_of(ObjId i, MorId a) const;
};
ColimitHom colimit_hom(const CofilteredDiagram& diag, ObjId c);

// The functor sending i to the diagonal element of C_i in the category of
// elements of c |-> colim_i C(C_i, c), tested for initiality. Failure is a
// theorem violation and throws InvariantViolation.
Check canonical_reindexing_initial(const FractionCategory& fc, const CofilteredDiagram& diag);

// --- pro-objects -------------------------------------------------------------------------

class ProObject {
 public:
  // Errors: NotCofiltered.
  static ProObject make(FinFunctor diagram);
  static ProObject singleton(CategoryRef a, ObjId obj);

  const FinFunctor& diagram() const noexcept { return diagram_; }
  const CategoryRef& index() const noexcept { return diagram_.domain(); }
  const CategoryRef& base() const noexcept { return diagram_.codomain(); }

 private:
  FinFunctor diagram_;
};

// A reindexing map on objects J -> I with components phi_j : X(f j) -> Y(j).
struct ProMorphism {
  std::vector<ObjId> reindex;
  std::vector<MorId> components;
  friend auto operator<=>(const ProMorphism&, const ProMorphism&) = default;
};

struct ProHom {
  std::vector<ProMorphism> candidates;     // all valid (f, phi), sorted
  std::vector<std::size_t> class_of;       // per candidate
  std::vector<ProMorphism> representatives;  // least member of each class
  std::size_t size() const { return representatives.size(); }
};

// Errors: PreconditionViolated when the bases differ.
ProHom pro_hom(const ProObject& x, const ProObject& y);

// The projection from pairs (d, a : F -> u* y(d)) to D. Errors: NotCofiltered
// when the index fails to be cofiltered.
ProObject left_pro_adjoint_on_representables(const FinFunctor& u, const FinPresheaf& f);

struct FaithfulnessReport {
  Check verdict;
  std::size_t pairs_checked = 0;
};

// Distinct parallel morphisms X -> Y of fc act differently by precomposition
// on some Hom(Y, P_c), P_c the product object of c. Failure throws
// InvariantViolation.
FaithfulnessReport pro_adjoint_faithful_check(const FractionCategory& fc);

}  // namespace toposfactor

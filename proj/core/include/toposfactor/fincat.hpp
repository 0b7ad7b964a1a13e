#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toposfactor/error.hpp"

namespace toposfactor {

using ObjId = std::size_t;
using MorId = std::size_t;
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// --- raw descriptions (what the DSL produces) --------------------------------

struct MorphismDecl {
  std::string name;
  std::string source;
  std::string target;
};

// second . first = result
struct CompositionDecl {
  std::string second;
  std::string first;
  std::string result;
};

struct CategoryDescription {
  std::string name;
  std::vector<std::string> objects;
  // Non-identity morphisms. Identities are implicit and named id_<object>.
  std::vector<MorphismDecl> morphisms;
  std::vector<CompositionDecl> compositions;
  // Omitted composites are inferred when exactly one candidate exists.
  bool infer_missing = true;
};

struct Morphism {
  std::string name;
  ObjId source;
  ObjId target;
};

// A finite category given by an explicit composition table. Immutable once
// built; every factory validates the category laws.
class FinCategory {
 public:
  // `table[g * num_morphisms + f]` holds g . f for composable pairs and npos
  // otherwise. Identities must appear among `morphisms`.
  static FinCategory from_tables(std::string name, std::vector<std::string> objects,
                                 std::vector<Morphism> morphisms,
                                 std::vector<MorId> identities,
                                 std::vector<MorId> table);

  // Same as from_tables, but skips the O(n^3) associativity check. Used by
  // constructions whose output is associative by construction.
  static FinCategory trusted(std::string name, std::vector<std::string> objects,
                             std::vector<Morphism> morphisms,
                             std::vector<MorId> identities,
                             std::vector<MorId> table);

  FinCategory() = default;

  const std::string& name() const noexcept { return name_; }
  std::size_t num_objects() const noexcept { return objects_.size(); }
  std::size_t num_morphisms() const noexcept { return morphisms_.size(); }

  const std::string& object_name(ObjId a) const { return objects_.at(a); }
  const std::string& morphism_name(MorId f) const { return morphisms_.at(f).name; }
  const Morphism& morphism(MorId f) const { return morphisms_[f]; }
  ObjId source(MorId f) const { return morphisms_[f].source; }
  ObjId target(MorId f) const { return morphisms_[f].target; }
  MorId identity(ObjId a) const { return identities_[a]; }
  bool is_identity(MorId f) const { return identities_[morphisms_[f].source] == f; }

  // g . f ; requires target(f) == source(g).
  MorId compose(MorId g, MorId f) const {
    const auto h = table_[g * morphisms_.size() + f];
    return h == kNoComposite ? npos : static_cast<MorId>(h);
  }
  bool composable(MorId g, MorId f) const { return target(f) == source(g); }

  const std::vector<MorId>& hom(ObjId a, ObjId b) const {
    return homs_[a * objects_.size() + b];
  }
  // Morphisms with the given target, grouped by source in object order.
  const std::vector<MorId>& arrows_into(ObjId b) const { return into_[b]; }
  const std::vector<MorId>& arrows_out_of(ObjId a) const { return out_of_[a]; }

  std::optional<ObjId> find_object(std::string_view name) const;
  std::optional<MorId> find_morphism(std::string_view name) const;
  ObjId object(std::string_view name) const;
  MorId morphism_id(std::string_view name) const;

  bool is_isomorphism(MorId f) const;
  std::optional<MorId> inverse(MorId f) const;

  std::optional<ObjId> terminal_object() const;
  std::optional<ObjId> initial_object() const;

  // Checks the category laws exhaustively; returns the first violation.
  Check check_laws() const;

  // Structural equality: same identifiers and the same table.
  friend bool operator==(const FinCategory& a, const FinCategory& b);

 private:
  static constexpr std::uint32_t kNoComposite = 0xffffffffu;

  void index();

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<MorId> identities_;
  std::vector<std::uint32_t> table_;
  std::vector<std::vector<MorId>> homs_;
  std::vector<std::vector<MorId>> into_;
  std::vector<std::vector<MorId>> out_of_;
  std::unordered_map<std::string, ObjId> object_index_;
  std::unordered_map<std::string, MorId> morphism_index_;
};

using CategoryRef = std::shared_ptr<const FinCategory>;

inline CategoryRef share(FinCategory c) {
  return std::make_shared<const FinCategory>(std::move(c));
}

// Builds a category from a user description. Errors: MissingComposite,
// NonAssociative(h,g,f), BrokenIdentity(f), IllTypedComposite, UnknownName,
// DuplicateName.
FinCategory validate_category(const CategoryDescription& raw);

FinCategory opposite(const FinCategory& c);

// The empty category.
FinCategory empty_category(std::string name = "Empty");

// Discrete category on n objects named by `names`.
FinCategory discrete_category(std::vector<std::string> names, std::string name = "Disc");

// Full subcategory on the listed objects (in the given order).
FinCategory full_subcategory(const FinCategory& c, std::span<const ObjId> objects,
                             std::string name = {});

// --- functors ----------------------------------------------------------------

struct FunctorDescription {
  std::string name;
  std::map<std::string, std::string> on_objects;
  std::map<std::string, std::string> on_morphisms;
};

class FinFunctor {
 public:
  // Validates preservation of sources, targets, identities and composition.
  static FinFunctor make(CategoryRef domain, CategoryRef codomain,
                         std::vector<ObjId> on_objects, std::vector<MorId> on_morphisms,
                         std::string name = {});
  static FinFunctor trusted(CategoryRef domain, CategoryRef codomain,
                            std::vector<ObjId> on_objects,
                            std::vector<MorId> on_morphisms, std::string name = {});
  static FinFunctor identity(CategoryRef c);
  // Constant functor at object `d` of `codomain`.
  static FinFunctor constant(CategoryRef domain, CategoryRef codomain, ObjId d);

  FinFunctor() = default;

  const CategoryRef& domain() const noexcept { return domain_; }
  const CategoryRef& codomain() const noexcept { return codomain_; }
  const std::string& name() const noexcept { return name_; }
  ObjId on_object(ObjId a) const { return objects_[a]; }
  MorId on_morphism(MorId f) const { return morphisms_[f]; }
  const std::vector<ObjId>& object_map() const noexcept { return objects_; }
  const std::vector<MorId>& morphism_map() const noexcept { return morphisms_; }

  Check check_laws() const;

  FinFunctor renamed(std::string name) const;

  friend bool operator==(const FinFunctor& a, const FinFunctor& b) {
    return a.objects_ == b.objects_ && a.morphisms_ == b.morphisms_ &&
           *a.domain_ == *b.domain_ && *a.codomain_ == *b.codomain_;
  }

 private:
  CategoryRef domain_;
  CategoryRef codomain_;
  std::vector<ObjId> objects_;
  std::vector<MorId> morphisms_;
  std::string name_;
};

// g . f
FinFunctor compose(const FinFunctor& g, const FinFunctor& f);

FinFunctor opposite(const FinFunctor& f, CategoryRef dom_op, CategoryRef cod_op);

// Errors: UnknownName, UnmappedMorphism, BrokenComposition(g,f), BrokenIdentity(a).
// Unmapped morphisms are inferred when their image hom-set has one element.
FinFunctor validate_functor(const FunctorDescription& raw, CategoryRef c, CategoryRef d);

// --- natural transformations -------------------------------------------------

class NatTransf {
 public:
  static NatTransf make(FinFunctor source, FinFunctor target, std::vector<MorId> components,
                        std::string name = {});
  static NatTransf identity(const FinFunctor& f);

  const FinFunctor& source() const noexcept { return source_; }
  const FinFunctor& target() const noexcept { return target_; }
  MorId component(ObjId a) const { return components_[a]; }
  const std::vector<MorId>& components() const noexcept { return components_; }
  const std::string& name() const noexcept { return name_; }

  bool is_isomorphism() const;
  Check check_naturality() const;

 private:
  FinFunctor source_;
  FinFunctor target_;
  std::vector<MorId> components_;
  std::string name_;
};

// Vertical composite beta . alpha.
NatTransf vertical(const NatTransf& beta, const NatTransf& alpha);
// Whiskerings  H * alpha  and  alpha * K.
NatTransf whisker_left(const FinFunctor& h, const NatTransf& alpha);
NatTransf whisker_right(const NatTransf& alpha, const FinFunctor& k);

// --- fixture catalog ---------------------------------------------------------

namespace fixtures {
CategoryRef one();       // single object x
CategoryRef arrow();     // f : 0 -> 1
CategoryRef par_pair();  // a, b : 0 -> 1
CategoryRef span();      // p : s -> a, q : s -> b
CategoryRef sq();        // commutative square poset bot -> l, r -> top
CategoryRef idem();      // one object x, e . e = e
CategoryRef z2();        // one object x, g . g = id

// All of the above, by name.
std::vector<std::pair<std::string, CategoryRef>> catalog();
CategoryRef by_name(std::string_view name);
}  // namespace fixtures

}  // namespace toposfactor

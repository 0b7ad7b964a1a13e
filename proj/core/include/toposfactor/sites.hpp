#pragma once

#include <string>
#include <vector>

#include "toposfactor/constructions.hpp"
#include "toposfactor/fincat.hpp"
#include "toposfactor/presheaf.hpp"

namespace toposfactor {

// A sieve on `apex`: sorted morphism ids, all with target apex, closed under
// precomposition.
struct Sieve {
  ObjId apex = 0;
  std::vector<MorId> arrows;

  bool contains(MorId f) const;
  friend auto operator<=>(const Sieve&, const Sieve&) = default;
};

// Errors: NotASieve when an arrow does not target the apex.
Sieve generated_sieve(const FinCategory& c, ObjId apex, const std::vector<MorId>& arrows);
Sieve maximal_sieve(const FinCategory& c, ObjId apex);
// h* S = { k : h . k in S } for h : c' -> apex(S).
Sieve pullback_sieve(const FinCategory& c, const Sieve& s, MorId h);
bool is_sieve(const FinCategory& c, const Sieve& s);
// Every sieve on the object, smallest first.
std::vector<Sieve> all_sieves(const FinCategory& c, ObjId apex);

// Generating families per object: basis[c] is a list of arrow families into c.
using CoverageBasis = std::vector<std::vector<std::vector<MorId>>>;

class GrothendieckTopology {
 public:
  // Checks the three axioms exhaustively. Errors: NotATopology.
  static GrothendieckTopology make(CategoryRef base, std::vector<std::vector<Sieve>> covers);
  static GrothendieckTopology trusted(CategoryRef base, std::vector<std::vector<Sieve>> covers);

  GrothendieckTopology() = default;

  const CategoryRef& base() const noexcept { return base_; }
  // Covering sieves of c, sorted.
  const std::vector<Sieve>& covers(ObjId c) const { return covers_[c]; }
  bool is_cover(const Sieve& s) const;
  // Intersection of all covers of c; itself a cover.
  Sieve smallest_cover(ObjId c) const;
  Check check_axioms() const;

  friend bool operator==(const GrothendieckTopology& a, const GrothendieckTopology& b) {
    return a.covers_ == b.covers_;
  }

 private:
  CategoryRef base_;
  std::vector<std::vector<Sieve>> covers_;
};

// Least topology containing the sieves generated by the basis families.
GrothendieckTopology saturate(CategoryRef base, const CoverageBasis& basis);
GrothendieckTopology trivial_topology(CategoryRef base);
GrothendieckTopology join(const GrothendieckTopology& j, const GrothendieckTopology& k);
bool finer_or_equal(const GrothendieckTopology& j, const GrothendieckTopology& k);  // K inside J
// Every topology on the category, as joins of singly generated ones; sorted.
std::vector<GrothendieckTopology> all_topologies(CategoryRef base);

// --- sheaves --------------------------------------------------------------------------------

// Matching families for X on s: entry i is the value at s.arrows[i].
std::vector<std::vector<std::size_t>> matching_families(const FinPresheaf& x, const Sieve& s);
Check is_sheaf(const FinPresheaf& x, const GrothendieckTopology& j);
bool is_subcanonical(const GrothendieckTopology& j);

struct Sheafification {
  FinPresheaf sheaf;
  PresheafMap unit;  // X -> a X
};

// One plus construction step: X+(c) is the set of matching families on the
// smallest cover of c.
Sheafification plus_construction(const FinPresheaf& x, const GrothendieckTopology& j);
Sheafification sheafify(const FinPresheaf& x, const GrothendieckTopology& j);

// Every map X -> F into a sheaf factors uniquely through the unit.
Check sheafify_universal(const Sheafification& s, const GrothendieckTopology& j,
                         const std::vector<FinPresheaf>& test_sheaves);

// --- site properties and terminal connectedness --------------------------------------------

// Only the maximal sieve covers the terminal object. Errors: NoTerminalObject.
bool is_local_site(const GrothendieckTopology& j);

// f : A -> C, J on C.
Check is_J_cofinal(const FinFunctor& f, const GrothendieckTopology& j);

// Hom(1, c) -> Hom(1, f c), k |-> f(k) . e, is a bijection for every c, where
// e : 1 -> f(1). Errors: NoTerminalObject.
Check lifts_global_elements(const FinFunctor& f);

enum class SiteRole { Morphism, Comorphism };

struct SiteMorphismData {
  FinFunctor f;
  SiteRole role = SiteRole::Morphism;
  GrothendieckTopology domain_topology;
  GrothendieckTopology codomain_topology;
};

// Morphism: covers go to covers and the terminal object, products and
// pullbacks that exist in the domain are preserved. Comorphism: cover lifting.
Check check_site_morphism(const SiteMorphismData& m);

enum class TcKind { TerminallyConnected, NotTerminallyConnected, Inconclusive };
std::string to_string(TcKind k);

struct TcVerdict {
  TcKind kind = TcKind::Inconclusive;
  std::string certificate;
};

// Errors: NotLocalSite when the codomain site is not local.
TcVerdict tc_by_local_site(const SiteMorphismData& m);
// Errors: NotComorphism when cover lifting fails.
TcVerdict comorphism_tc(const SiteMorphismData& m);

}  // namespace toposfactor

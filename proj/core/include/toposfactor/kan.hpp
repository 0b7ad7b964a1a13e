#pragma once

#include <tuple>
#include <vector>

#include "toposfactor/constructions.hpp"
#include "toposfactor/presheaf.hpp"

namespace toposfactor {

// Left Kan extension along u : C -> D with its colimit bookkeeping. An element
// of Lan X (d) is a class of triples (c, h : d -> u c, x in X(c)) modulo
// (c, h, X(k) x') ~ (c', u(k) h, x') for k : c -> c'.
struct LanData {
  FinPresheaf value;
  std::vector<std::vector<std::tuple<ObjId, MorId, std::size_t>>> triples;  // per d
  std::vector<std::vector<std::size_t>> class_of;                            // per d, per triple

  std::size_t class_of_triple(ObjId d, ObjId c, MorId h, std::size_t x) const;
};

LanData lan_data(const FinPresheaf& x, const FinFunctor& u);
FinPresheaf lan(const FinPresheaf& x, const FinFunctor& u);
PresheafMap lan(const PresheafMap& m, const FinFunctor& u);

// Right Kan extension: Ran X (d) = compatible families over u|d, indexed by
// the objects (c, h : u c -> d) of slice(u, d) in order.
struct RanData {
  FinPresheaf value;
  std::vector<std::vector<std::pair<ObjId, MorId>>> slice_objects;  // (c, h) per d, sorted
  std::vector<std::vector<GlobalElement>> families;                 // per d, sorted
};

RanData ran_data(const FinPresheaf& x, const FinFunctor& u);
FinPresheaf ran(const FinPresheaf& x, const FinFunctor& u);
PresheafMap ran(const PresheafMap& m, const FinFunctor& u);

// Pi(d) = pi0(d|u), elements named by a representative (c, h).
FinPresheaf components_presheaf(const FinFunctor& u);

// Units and counits of Lan -| u* -| Ran.
PresheafMap lan_unit(const FinPresheaf& x, const FinFunctor& u);    // X -> u* Lan X
PresheafMap lan_counit(const FinPresheaf& y, const FinFunctor& u);  // Lan u* Y -> Y
PresheafMap ran_unit(const FinPresheaf& y, const FinFunctor& u);    // Y -> Ran u* Y
PresheafMap ran_counit(const FinPresheaf& x, const FinFunctor& u);  // u* Ran X -> X

struct AdjunctionWitness {
  PresheafMap lan_unit;    // at X
  PresheafMap lan_counit;  // at Y
  PresheafMap ran_unit;    // at Y
  PresheafMap ran_counit;  // at X
  // The four triangle identities, each verified exhaustively.
  Check triangles;
};

// Witness at a presheaf X on C and Y on D.
AdjunctionWitness unit_counit(const FinFunctor& u, const FinPresheaf& x, const FinPresheaf& y);

// Counit of Lan -| u* is invertible at every representable of D.
Check is_connected_essential(const FinFunctor& u);

// phi : F -> u* E, b : E' -> E. Compares Lan(F x_{u*E} u*E') with
// Lan(F) x_E E' through the canonical map.
Check frobenius_check(const FinFunctor& u, const PresheafMap& phi, const PresheafMap& b);

// The adjoint transpose Lan F -> E of phi : F -> u* E.
PresheafMap lan_transpose(const FinFunctor& u, const FinPresheaf& e, const PresheafMap& phi);

}  // namespace toposfactor

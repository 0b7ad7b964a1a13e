#pragma once

#include <vector>

#include "toposfactor/constructions.hpp"
#include "toposfactor/kan.hpp"
#include "toposfactor/presheaf.hpp"

namespace toposfactor {

// u = right . left with left final and right the projection from the elements
// of Pi = components_presheaf(u).
struct Factorization {
  FinFunctor u;
  FinPresheaf pi;
  Elements elements;
  CategoryRef mid;
  FinFunctor left;
  FinFunctor right;
  NatTransf witness;  // right . left => u (an identity)
};

// Throws InvariantViolation if the returned data fails its invariants.
Factorization comprehensive_factorize(const FinFunctor& u);

// Pi is terminal. Cross-checked against is_final_functor; a disagreement
// throws InvariantViolation.
Check is_terminally_connected_essential(const FinFunctor& u);

// Unique global element of E restricting to a. Errors: NotTerminallyConnected.
GlobalElement lift_global_element(const FinFunctor& u, const FinPresheaf& e,
                                  const GlobalElement& a);

// The restriction map on global elements Gamma(E) -> Gamma(Ran u* E) through
// the unit is a bijection.
Check eta_orthogonal_check(const FinFunctor& u, const FinPresheaf& e);
// Quantified form: eta_orthogonal_check over the terminal presheaf, Pi and
// every representable of the codomain.
Check eta_orthogonal(const FinFunctor& u);

// a : coproduct of n terminals on C -> u* E. Returns the lifted map from the
// coproduct of n terminals on D to E. Errors: NotTerminallyConnected.
PresheafMap lift_constant_family(const FinFunctor& u, const FinPresheaf& e,
                                 const PresheafMap& a);

// --- transport along 2-cells ------------------------------------------------------------

// phi : g => u as functors C -> D; on presheaves it gives phi_flat : u* => g*
// with component E(phi_c) : E(u c) -> E(g c).
struct TwoCellTransport {
  NatTransf phi;
  FinPresheaf e;
  PresheafMap flat;                             // u* E -> g* E
  std::vector<GlobalElement> source_elements;  // Gamma(u* E)
  std::vector<GlobalElement> target_elements;  // Gamma(g* E)
  std::vector<std::size_t> element_map;        // a |-> flat . a
};

TwoCellTransport transport_elements(const NatTransf& phi, const FinPresheaf& e);

// For h : D -> E and a in Gamma(u* E): the comparison of fibers
// (u* h)^{-1}(a) -> (g* h)^{-1}(flat . a), x |-> D(phi_c) x.
PresheafMap fiber_comparison(const NatTransf& phi, const PresheafMap& h, const GlobalElement& a);

// The comparison is natural and commutes with the fiber inclusions and
// phi_flat at D; element_map is natural in E along h.
Check transport_pasting(const NatTransf& phi, const PresheafMap& h, const GlobalElement& a);

// --- oplax square decomposition ----------------------------------------------------------

struct OplaxSquare {
  FinFunctor t;         // A -> B, final
  Elements elements;    // p : El(X) -> D
  FinFunctor g;         // A -> El(X)
  FinFunctor f;         // B -> D
  NatTransf phi;        // f . t => p . g
};

struct OplaxDecomposition {
  FinFunctor h;    // B -> El(X)
  NatTransf lambda;  // h . t => g
  NatTransf rho;     // p . h => f, invertible
  Check pasting;
};

// Errors: PreconditionViolated when t is not final or the data is ill-typed.
OplaxDecomposition oplax_square_decompose(const OplaxSquare& sq);

}  // namespace toposfactor

#include "toposfactor/factorization.hpp"

#include <algorithm>

namespace toposfactor {

namespace {

std::size_t index_of(const std::vector<GlobalElement>& sorted, const GlobalElement& a) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), a);
  if (it == sorted.end() || !(*it == a)) return npos;
  return static_cast<std::size_t>(it - sorted.begin());
}

std::string describe(const FinPresheaf& x, const GlobalElement& a) {
  const FinCategory& c = *x.base();
  std::string s = "(";
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    if (o) s += ", ";
    s += c.object_name(o) + ":" + x.element_name(o, a.family[o]);
  }
  return s + ")";
}

void require_terminally_connected(const FinFunctor& u) {
  if (Check c = is_terminally_connected_essential(u); !c) {
    throw Error(ErrorCode::NotTerminallyConnected, c.certificate);
  }
}

}  // namespace

Factorization comprehensive_factorize(const FinFunctor& u) {
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  Factorization out;
  out.u = u;
  out.pi = components_presheaf(u);
  out.elements = category_of_elements(out.pi);
  out.mid = out.elements.category;
  std::vector<CommaComponents> cc;
  for (ObjId o = 0; o < d.num_objects(); ++o) cc.push_back(coslice_components(o, u));
  auto unit_class = [&](ObjId a) {
    const ObjId ua = u.on_object(a);
    return cc[ua].component_of(a, d.identity(ua));
  };
  std::vector<ObjId> objects;
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    objects.push_back(out.elements.object(u.on_object(a), unit_class(a)));
  }
  std::vector<MorId> morphisms;
  for (MorId k = 0; k < c.num_morphisms(); ++k) {
    morphisms.push_back(out.elements.lift(u.on_morphism(k), unit_class(c.target(k))));
  }
  out.left = FinFunctor::trusted(u.domain(), out.mid, std::move(objects), std::move(morphisms),
                                 "left");
  out.right = out.elements.projection.renamed("right");
  if (Check laws = out.left.check_laws(); !laws) {
    throw InvariantViolation("left factor is not a functor: " + laws.certificate);
  }
  const FinFunctor composite = compose(out.right, out.left);
  if (composite.object_map() != u.object_map() || composite.morphism_map() != u.morphism_map()) {
    throw InvariantViolation("right . left differs from u");
  }
  out.witness = NatTransf::identity(u);
  if (Check f = is_final_functor(out.left); !f) {
    throw InvariantViolation("left factor is not final: " + f.certificate);
  }
  if (Check f = is_discrete_fibration(out.right); !f) {
    throw InvariantViolation("right factor is not a discrete fibration: " + f.certificate);
  }
  return out;
}

Check is_terminally_connected_essential(const FinFunctor& u) {
  const FinPresheaf pi = components_presheaf(u);
  const FinCategory& d = *u.codomain();
  Check verdict = Check::ok();
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    if (pi.size(o) != 1) {
      verdict = Check::fail("Pi(" + d.object_name(o) + ") has " + std::to_string(pi.size(o)) +
                            " elements");
      break;
    }
  }
  if (verdict.holds != is_final_functor(u).holds) {
    throw InvariantViolation("components presheaf and finality disagree");
  }
  return verdict;
}

GlobalElement lift_global_element(const FinFunctor& u, const FinPresheaf& e,
                                  const GlobalElement& a) {
  require_terminally_connected(u);
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  const FinPresheaf ue = restrict(e, u);
  if (!is_global_element(ue, a)) {
    throw Error(ErrorCode::PreconditionViolated, "input is not a global element of u*E");
  }
  GlobalElement lifted{std::vector<std::size_t>(d.num_objects(), npos)};
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    for (ObjId x = 0; x < c.num_objects(); ++x) {
      for (MorId h : d.hom(o, u.on_object(x))) {
        const std::size_t v = e.act(h, a.family[x]);
        if (lifted.family[o] == npos) lifted.family[o] = v;
        if (lifted.family[o] != v) {
          throw InvariantViolation("NoLift: value at " + d.object_name(o) + " is not well defined");
        }
      }
    }
  }
  if (!is_global_element(e, lifted)) throw InvariantViolation("NoLift: lift is not compatible");
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    if (lifted.family[u.on_object(x)] != a.family[x]) {
      throw InvariantViolation("NoLift: lift does not restrict to the input");
    }
  }
  // Unit triangle: the transpose a# : Lan 1 -> E satisfies u*(a#) . eta_1 = a,
  // and a# agrees with the lift on the unique element of Lan 1 = Pi.
  const PresheafMap sharp = lan_transpose(u, e, element_as_map(ue, a));
  const PresheafMap eta = lan_unit(terminal_presheaf(u.domain()), u);
  const PresheafMap back = compose(restrict(sharp, u), eta);
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    if (back.at(x, 0) != a.family[x]) {
      throw InvariantViolation("unit triangle fails at " + c.object_name(x));
    }
  }
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    if (sharp.at(o, 0) != lifted.family[o]) {
      throw InvariantViolation("transpose and lift disagree at " + d.object_name(o));
    }
  }
  return lifted;
}

Check eta_orthogonal_check(const FinFunctor& u, const FinPresheaf& e) {
  const PresheafMap eta = ran_unit(e, u);
  const std::vector<GlobalElement> source = global_elements(e);
  const std::vector<GlobalElement> target = global_elements(eta.target());
  const FinCategory& d = *u.codomain();
  std::vector<bool> hit(target.size(), false);
  for (const auto& a : source) {
    GlobalElement image;
    for (ObjId o = 0; o < d.num_objects(); ++o) image.family.push_back(eta.at(o, a.family[o]));
    const std::size_t i = index_of(target, image);
    if (i == npos) throw InvariantViolation("unit does not preserve global elements");
    if (hit[i]) {
      return Check::fail("two global elements of " + e.name() + " have the same image " +
                         describe(eta.target(), image) + " in Ran u*E");
    }
    hit[i] = true;
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!hit[i]) {
      return Check::fail("global element " + describe(eta.target(), target[i]) +
                         " of Ran u*" + e.name() + " does not factor through the unit");
    }
  }
  return Check::ok();
}

Check eta_orthogonal(const FinFunctor& u) {
  const CategoryRef& d = u.codomain();
  std::vector<FinPresheaf> tests{terminal_presheaf(d), components_presheaf(u)};
  for (ObjId o = 0; o < d->num_objects(); ++o) tests.push_back(representable(d, o));
  for (const auto& e : tests) {
    if (Check c = eta_orthogonal_check(u, e); !c) return c;
  }
  return Check::ok();
}

PresheafMap lift_constant_family(const FinFunctor& u, const FinPresheaf& e, const PresheafMap& a) {
  require_terminally_connected(u);
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  std::size_t n = 0;
  if (c.num_objects() > 0) n = a.source().size(0);
  std::vector<std::vector<std::size_t>> comps(d.num_objects(), std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    GlobalElement ai;
    for (ObjId x = 0; x < c.num_objects(); ++x) ai.family.push_back(a.at(x, i));
    const GlobalElement lifted = lift_global_element(u, e, ai);
    for (ObjId o = 0; o < d.num_objects(); ++o) comps[o][i] = lifted.family[o];
  }
  return PresheafMap::make(constant_presheaf(u.codomain(), n), e, std::move(comps));
}

// --- transport along 2-cells ------------------------------------------------------------

namespace {

PresheafMap flat_at(const NatTransf& phi, const FinPresheaf& e) {
  const FinFunctor& g = phi.source();
  const FinFunctor& u = phi.target();
  const FinCategory& c = *g.domain();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) comps[x] = e.action(phi.component(x));
  return PresheafMap::trusted(restrict(e, u), restrict(e, g), std::move(comps));
}

GlobalElement apply(const PresheafMap& m, const GlobalElement& a) {
  GlobalElement out;
  for (ObjId x = 0; x < a.family.size(); ++x) out.family.push_back(m.at(x, a.family[x]));
  return out;
}

// Inclusion of the fiber of h over a into the source of h.
PresheafMap fiber_inclusion(const GlobalElement& a, const PresheafMap& h) {
  const FinPresheaf fiber = pullback_of_element(a, h);
  const FinCategory& c = *h.source().base();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    for (std::size_t v = 0; v < h.source().size(x); ++v) {
      if (h.at(x, v) == a.family[x]) comps[x].push_back(v);
    }
  }
  return PresheafMap::trusted(fiber, h.source(), std::move(comps));
}

}  // namespace

TwoCellTransport transport_elements(const NatTransf& phi, const FinPresheaf& e) {
  TwoCellTransport t;
  t.phi = phi;
  t.e = e;
  t.flat = flat_at(phi, e);
  t.source_elements = global_elements(t.flat.source());
  t.target_elements = global_elements(t.flat.target());
  for (const auto& a : t.source_elements) {
    const std::size_t i = index_of(t.target_elements, apply(t.flat, a));
    if (i == npos) throw InvariantViolation("transport leaves the global elements");
    t.element_map.push_back(i);
  }
  return t;
}

PresheafMap fiber_comparison(const NatTransf& phi, const PresheafMap& h, const GlobalElement& a) {
  const FinFunctor& g = phi.source();
  const FinFunctor& u = phi.target();
  const PresheafMap flat_e = flat_at(phi, h.target());
  const PresheafMap i1 = fiber_inclusion(a, restrict(h, u));
  const PresheafMap i2 = fiber_inclusion(apply(flat_e, a), restrict(h, g));
  const FinPresheaf& dd = h.source();
  const FinCategory& c = *g.domain();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    const auto& members = i2.components()[x];
    for (std::size_t v : i1.components()[x]) {
      const std::size_t image = dd.act(phi.component(x), v);
      auto it = std::find(members.begin(), members.end(), image);
      if (it == members.end()) throw InvariantViolation("fiber comparison leaves the fiber");
      comps[x].push_back(static_cast<std::size_t>(it - members.begin()));
    }
  }
  return PresheafMap::trusted(i1.source(), i2.source(), std::move(comps));
}

Check transport_pasting(const NatTransf& phi, const PresheafMap& h, const GlobalElement& a) {
  const FinFunctor& g = phi.source();
  const FinFunctor& u = phi.target();
  const PresheafMap cmp = fiber_comparison(phi, h, a);
  if (Check c = cmp.check_naturality(); !c) return Check::fail("fiber comparison: " + c.certificate);
  const PresheafMap flat_e = flat_at(phi, h.target());
  const PresheafMap flat_d = flat_at(phi, h.source());
  const PresheafMap i1 = fiber_inclusion(a, restrict(h, u));
  const PresheafMap i2 = fiber_inclusion(apply(flat_e, a), restrict(h, g));
  if (!(compose(i2, cmp) == compose(flat_d, i1))) {
    return Check::fail("fiber comparison does not commute with phi_flat");
  }
  // Naturality of phi_flat along h, on all global elements of u* D.
  const PresheafMap uh = restrict(h, u);
  const PresheafMap gh = restrict(h, g);
  for (const auto& b : global_elements(uh.source())) {
    if (!(apply(flat_e, apply(uh, b)) == apply(gh, apply(flat_d, b)))) {
      return Check::fail("element transport is not natural along h");
    }
  }
  return Check::ok();
}

// --- oplax square decomposition ----------------------------------------------------------

OplaxDecomposition oplax_square_decompose(const OplaxSquare& sq) {
  const FinFunctor& p = sq.elements.projection;
  const FinPresheaf& x = sq.elements.presheaf;
  if (!(*sq.t.domain() == *sq.g.domain()) || !(*sq.f.domain() == *sq.t.codomain()) ||
      !(*sq.g.codomain() == *sq.elements.category) || !(*sq.f.codomain() == *p.codomain())) {
    throw Error(ErrorCode::PreconditionViolated, "oplax square is ill-typed");
  }
  if (Check c = is_final_functor(sq.t); !c) {
    throw Error(ErrorCode::PreconditionViolated, "t is not terminally connected: " + c.certificate);
  }
  const FinFunctor ft = compose(sq.f, sq.t);
  const FinFunctor pg = compose(p, sq.g);
  if (sq.phi.source().object_map() != ft.object_map() ||
      sq.phi.source().morphism_map() != ft.morphism_map() ||
      sq.phi.target().object_map() != pg.object_map() ||
      sq.phi.target().morphism_map() != pg.morphism_map()) {
    throw Error(ErrorCode::PreconditionViolated, "phi is not a 2-cell f.t => p.g");
  }
  const FinCategory& a = *sq.t.domain();
  const FinCategory& b = *sq.t.codomain();
  // y_a = X(phi_a)(x_a) is a global element of t* f* X.
  GlobalElement pushed;
  std::vector<std::size_t> xs;
  for (ObjId o = 0; o < a.num_objects(); ++o) {
    const std::size_t xa = sq.elements.element(sq.g.on_object(o));
    xs.push_back(xa);
    pushed.family.push_back(x.act(sq.phi.component(o), xa));
  }
  const FinPresheaf fx = restrict(x, sq.f);
  const GlobalElement y = lift_global_element(sq.t, fx, pushed);

  std::vector<ObjId> h_obj;
  for (ObjId o = 0; o < b.num_objects(); ++o) {
    h_obj.push_back(sq.elements.object(sq.f.on_object(o), y.family[o]));
  }
  std::vector<MorId> h_mor;
  for (MorId l = 0; l < b.num_morphisms(); ++l) {
    h_mor.push_back(sq.elements.lift(sq.f.on_morphism(l), y.family[b.target(l)]));
  }
  OplaxDecomposition out;
  out.h = FinFunctor::make(sq.t.codomain(), sq.elements.category, std::move(h_obj),
                           std::move(h_mor), "h");
  std::vector<MorId> lambda;
  for (ObjId o = 0; o < a.num_objects(); ++o) {
    lambda.push_back(sq.elements.lift(sq.phi.component(o), xs[o]));
  }
  out.lambda = NatTransf::make(compose(out.h, sq.t), sq.g, std::move(lambda), "lambda");
  std::vector<MorId> rho;
  const FinCategory& d = *sq.f.codomain();
  for (ObjId o = 0; o < b.num_objects(); ++o) rho.push_back(d.identity(sq.f.on_object(o)));
  out.rho = NatTransf::make(compose(p, out.h), sq.f, std::move(rho), "rho");
  out.pasting = Check::ok();
  for (ObjId o = 0; o < a.num_objects(); ++o) {
    const MorId pasted =
        d.compose(p.on_morphism(out.lambda.component(o)), out.rho.component(sq.t.on_object(o)));
    if (pasted != sq.phi.component(o)) {
      out.pasting = Check::fail("pasting differs from phi at " + a.object_name(o));
      break;
    }
  }
  return out;
}

}  // namespace toposfactor

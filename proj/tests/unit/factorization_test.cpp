#include <gtest/gtest.h>

#include "toposfactor/factorization.hpp"

using namespace toposfactor;

namespace {

FinFunctor pick(const CategoryRef& c, const std::string& obj) {
  return FinFunctor::constant(fixtures::one(), c, c->object(obj));
}

}  // namespace

TEST(ComprehensiveFactorize, PickingSourceIsAlreadyADiscreteFibration) {
  const auto u = pick(fixtures::arrow(), "0");
  const auto fac = comprehensive_factorize(u);
  EXPECT_EQ(fac.mid->num_objects(), 1u);
  EXPECT_EQ(fac.mid->num_morphisms(), 1u);
  EXPECT_TRUE(is_equivalence(fac.left));
  EXPECT_EQ(fac.right.on_object(0), u.on_object(0));
}

TEST(ComprehensiveFactorize, PickingTargetIsFinal) {
  const auto v = pick(fixtures::arrow(), "1");
  const auto fac = comprehensive_factorize(v);
  EXPECT_TRUE(equivalent(fac.mid, fixtures::arrow()));
  EXPECT_TRUE(is_equivalence(fac.right));
  EXPECT_TRUE(is_final_functor(fac.left));
}

TEST(ComprehensiveFactorize, IdentityFactorsTrivially) {
  for (const auto& [name, c] : fixtures::catalog()) {
    const auto fac = comprehensive_factorize(FinFunctor::identity(c));
    EXPECT_TRUE(is_equivalence(fac.left)) << name;
    EXPECT_TRUE(is_equivalence(fac.right)) << name;
  }
}

TEST(TerminallyConnected, Examples) {
  auto arrow = fixtures::arrow();
  EXPECT_TRUE(is_terminally_connected_essential(pick(arrow, "1")));
  const Check u = is_terminally_connected_essential(pick(arrow, "0"));
  EXPECT_FALSE(u);
  EXPECT_NE(u.certificate.find("Pi(1)"), std::string::npos);
  EXPECT_TRUE(is_terminally_connected_essential(FinFunctor::identity(arrow)));
}

TEST(LiftGlobalElement, IdentityReturnsInput) {
  auto sq = fixtures::sq();
  const auto id = FinFunctor::identity(sq);
  for (ObjId o = 0; o < sq->num_objects(); ++o) {
    const auto e = representable(sq, o);
    for (const auto& a : global_elements(e)) EXPECT_EQ(lift_global_element(id, e, a), a);
  }
}

TEST(LiftGlobalElement, PickingTargetOfArrow) {
  auto arrow = fixtures::arrow();
  const auto v = pick(arrow, "1");
  const auto e = representable(arrow, 1);
  const auto ve = restrict(e, v);
  ASSERT_EQ(ve.size(0), 1u);
  const auto lifted = lift_global_element(v, e, GlobalElement{{0}});
  EXPECT_EQ(e.element_name(0, lifted.family[0]), "f");
  EXPECT_EQ(e.element_name(1, lifted.family[1]), "id_1");
  const auto t = terminal_presheaf(arrow);
  EXPECT_EQ(lift_global_element(v, t, GlobalElement{{0}}).family, (std::vector<std::size_t>{0, 0}));
}

TEST(LiftGlobalElement, RejectsNonFinal) {
  auto arrow = fixtures::arrow();
  try {
    lift_global_element(pick(arrow, "0"), terminal_presheaf(arrow), GlobalElement{{0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTerminallyConnected);
  }
}

TEST(EtaOrthogonal, Examples) {
  auto arrow = fixtures::arrow();
  for (ObjId o = 0; o < 2; ++o) {
    EXPECT_TRUE(eta_orthogonal_check(FinFunctor::identity(arrow), representable(arrow, o)));
  }
  const auto v = pick(arrow, "1");
  EXPECT_TRUE(eta_orthogonal_check(v, representable(arrow, 1)));
  EXPECT_TRUE(eta_orthogonal(v));
  const auto u = pick(arrow, "0");
  // Gamma(y(1)) and Gamma(Ran u* y(1)) are both singletons; the failure
  // appears on y(0), whose empty set of global elements gains one in Ran.
  EXPECT_TRUE(eta_orthogonal_check(u, representable(arrow, 1)));
  const Check fail = eta_orthogonal_check(u, representable(arrow, 0));
  EXPECT_FALSE(fail);
  EXPECT_FALSE(fail.certificate.empty());
  EXPECT_FALSE(eta_orthogonal(u));
}

TEST(LiftConstantFamily, Sizes) {
  auto arrow = fixtures::arrow();
  const auto v = pick(arrow, "1");
  const auto e = constant_presheaf(arrow, 2);
  const auto ve = restrict(e, v);
  const auto empty = PresheafMap::make(constant_presheaf(v.domain(), 0), ve, {{}});
  EXPECT_EQ(lift_constant_family(v, e, empty).source().size(0), 0u);
  const auto pair = PresheafMap::make(constant_presheaf(v.domain(), 2), ve, {{1, 0}});
  const auto lifted = lift_constant_family(v, e, pair);
  EXPECT_EQ(lifted.components(), (std::vector<std::vector<std::size_t>>{{1, 0}, {1, 0}}));
  const auto single = PresheafMap::make(constant_presheaf(v.domain(), 1), ve, {{1}});
  EXPECT_EQ(lift_constant_family(v, e, single).at(0, 0),
            lift_global_element(v, e, GlobalElement{{1}}).family[0]);
}

TEST(Transport, IdentityCell) {
  auto arrow = fixtures::arrow();
  const auto v = pick(arrow, "1");
  const auto t = transport_elements(NatTransf::identity(v), representable(arrow, 1));
  for (std::size_t i = 0; i < t.element_map.size(); ++i) EXPECT_EQ(t.element_map[i], i);
}

TEST(Transport, IdempotentCell) {
  auto idem = fixtures::idem();
  const auto same = pick(idem, "x");
  const MorId e = idem->morphism_id("e");
  const auto phi = NatTransf::make(same, same, {e});
  const auto y = representable(idem, 0);
  const auto t = transport_elements(phi, y);
  ASSERT_EQ(t.source_elements.size(), 2u);
  for (std::size_t i = 0; i < t.source_elements.size(); ++i) {
    const auto image = t.target_elements[t.element_map[i]].family[0];
    EXPECT_EQ(image, y.act(e, t.source_elements[i].family[0]));
  }
  const auto h = terminal_map(y);
  EXPECT_TRUE(transport_pasting(phi, h, GlobalElement{{0}}));
  EXPECT_TRUE(fiber_comparison(phi, h, GlobalElement{{0}}).check_naturality());
}

TEST(OplaxSquare, IdentityTop) {
  auto arrow = fixtures::arrow();
  const auto x = representable(arrow, 1);
  const auto el = category_of_elements(x);
  // g picks the element (0, f); f picks 0; phi is the identity.
  const auto b = fixtures::one();
  const auto g = FinFunctor::constant(b, el.category, el.object(0, x.find_element(0, "f").value()));
  const auto f = pick(arrow, "0");
  OplaxSquare sq{FinFunctor::identity(b), el, g, f, NatTransf::identity(f)};
  const auto out = oplax_square_decompose(sq);
  EXPECT_TRUE(out.pasting);
  EXPECT_EQ(out.h.object_map(), g.object_map());
  EXPECT_TRUE(out.rho.is_isomorphism());
}

TEST(OplaxSquare, RejectsNonFinalTop) {
  auto arrow = fixtures::arrow();
  const auto x = terminal_presheaf(arrow);
  const auto el = category_of_elements(x);
  const auto t = pick(arrow, "0");
  const auto g = FinFunctor::constant(fixtures::one(), el.category, el.object(0, 0));
  const auto f = FinFunctor::identity(arrow);
  OplaxSquare sq{t, el, g, f, NatTransf::identity(t)};
  try {
    oplax_square_decompose(sq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

#include <gtest/gtest.h>

#include "toposfactor/proetale.hpp"

using namespace toposfactor;

namespace {

FinFunctor functor(const CategoryRef& c, const CategoryRef& d,
                   std::map<std::string, std::string> objects,
                   std::map<std::string, std::string> morphisms = {}) {
  return validate_functor({"D", std::move(objects), std::move(morphisms)}, c, d);
}

CofilteredDiagram corner_into_top() {
  return CofilteredDiagram::make(
      functor(fixtures::arrow(), fixtures::sq(), {{"0", "l"}, {"1", "top"}}, {{"f", "lt"}}));
}

CofilteredDiagram single(const CategoryRef& c, const std::string& obj) {
  return CofilteredDiagram::make(FinFunctor::constant(fixtures::one(), c, c->object(obj)));
}

}  // namespace

TEST(OplaxColimit, SingleIndexIsTheSlice) {
  const auto diag = single(fixtures::sq(), "top");
  const auto mol = build_oplax_colimit(diag, full_slice_system(diag));
  EXPECT_EQ(mol.category->num_objects(), 4u);
  for (bool v : mol.vertical) EXPECT_TRUE(v);
  EXPECT_TRUE(check_ore(mol));
  const auto fc = localize(mol);
  EXPECT_TRUE(equivalent(fc.category, fc.slices[0]));
}

TEST(OplaxColimit, CornerIntoTop) {
  const auto diag = corner_into_top();
  const auto mol = build_oplax_colimit(diag, full_slice_system(diag));
  EXPECT_EQ(mol.category->num_objects(), 6u);
  EXPECT_TRUE(check_ore(mol));
  EXPECT_TRUE(check_vertical_cartesian_factorization(mol));
  std::size_t cartesian_nonvertical = 0;
  for (std::size_t m = 0; m < mol.morphisms.size(); ++m) {
    cartesian_nonvertical += mol.cartesian[m] && !mol.vertical[m];
  }
  EXPECT_EQ(cartesian_nonvertical, 4u);
  const auto fc = localize(mol);
  // Arrow has the initial object 0, so the localization collapses to S_0.
  EXPECT_TRUE(equivalent(fc.category, fc.slices[0]));
  EXPECT_TRUE(canonical_reindexing_initial(fc, diag));
  EXPECT_TRUE(pro_adjoint_faithful_check(fc).verdict);
}

TEST(OplaxColimit, RejectsMissingIdentity) {
  const auto diag = single(fixtures::sq(), "top");
  SliceSystem empty{{{}}};
  try {
    build_oplax_colimit(diag, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

TEST(OplaxColimit, RejectsNonClosedSlices) {
  const auto diag = corner_into_top();
  auto slices = full_slice_system(diag);
  slices.members[0] = {diag.target()->identity(diag.at(0))};
  try {
    build_oplax_colimit(diag, slices);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingPullback);
  }
}

TEST(Ore, CorruptedMarkingFails) {
  auto chain = share(validate_category({"Chain3",
                                        {"0", "1", "2"},
                                        {{"a", "0", "1"}, {"b", "1", "2"}, {"c", "0", "2"}},
                                        {{"b", "a", "c"}}}));
  const auto diag = CofilteredDiagram::make(FinFunctor::identity(chain));
  auto mol = build_oplax_colimit(diag, full_slice_system(diag));
  ASSERT_TRUE(check_ore(mol));
  const FinCategory& k = *mol.category;
  bool corrupted = false;
  for (MorId t = 0; t < k.num_morphisms() && !corrupted; ++t) {
    if (!mol.cartesian[t] || mol.vertical[t]) continue;
    for (MorId s : k.arrows_into(k.source(t))) {
      const MorId ts = k.compose(t, s);
      if (mol.cartesian[s] && !mol.vertical[s] && ts != t && ts != s) {
        mol.cartesian[ts] = false;
        corrupted = true;
        break;
      }
    }
  }
  ASSERT_TRUE(corrupted);
  const Check c = check_ore(mol);
  EXPECT_FALSE(c);
  EXPECT_NE(c.certificate.find("composite"), std::string::npos);
  EXPECT_THROW(localize(mol), Error);
}

TEST(GlobalElements, TerminalHasExactlyOne) {
  const auto diag = corner_into_top();
  const auto fc = localize(build_oplax_colimit(diag, full_slice_system(diag)));
  const auto& sq = *diag.target();
  EXPECT_EQ(pseudocolim_global_elements(fc, sq.object("top")).size(), 1u);
  for (ObjId c = 0; c < sq.num_objects(); ++c) {
    EXPECT_EQ(pseudocolim_global_elements(fc, c).size(), colimit_hom(diag, c).count);
  }
}

TEST(GlobalElements, SingleIndexMatchesHom) {
  const auto diag = single(fixtures::sq(), "top");
  const auto fc = localize(build_oplax_colimit(diag, full_slice_system(diag)));
  const auto& sq = *diag.target();
  for (ObjId c = 0; c < sq.num_objects(); ++c) {
    EXPECT_EQ(pseudocolim_global_elements(fc, c).size(), sq.hom(sq.object("top"), c).size());
  }
}

TEST(ProHom, SingletonsGiveHomSets) {
  for (const auto& [name, c] : fixtures::catalog()) {
    for (ObjId a = 0; a < c->num_objects(); ++a) {
      for (ObjId b = 0; b < c->num_objects(); ++b) {
        const auto h = pro_hom(ProObject::singleton(c, a), ProObject::singleton(c, b));
        EXPECT_EQ(h.size(), c->hom(a, b).size()) << name;
      }
    }
  }
}

TEST(ProHom, TerminalSingletonIsTerminal) {
  auto sq = fixtures::sq();
  const auto top = ProObject::singleton(sq, sq->object("top"));
  const auto x = ProObject::make(functor(fixtures::arrow(), sq, {{"0", "l"}, {"1", "top"}},
                                         {{"f", "lt"}}));
  EXPECT_EQ(pro_hom(x, top).size(), 1u);
}

TEST(ProHom, IdempotentIndexedObject) {
  auto idem = fixtures::idem();
  const auto x = ProObject::make(FinFunctor::identity(idem));
  const auto point = ProObject::singleton(idem, 0);
  // colim over Idem of Hom(x, x) identifies phi with phi . e.
  EXPECT_EQ(pro_hom(x, point).size(), 1u);
  EXPECT_EQ(pro_hom(point, x).size(), 1u);
}

TEST(LeftProAdjoint, Examples) {
  auto arrow = fixtures::arrow();
  const auto v = FinFunctor::constant(fixtures::one(), arrow, 1);
  const auto pv = left_pro_adjoint_on_representables(v, terminal_presheaf(v.domain()));
  EXPECT_EQ(pv.index()->num_objects(), 1u);
  EXPECT_EQ(pv.diagram().on_object(0), 1u);
  const auto id = FinFunctor::identity(arrow);
  const auto p0 = left_pro_adjoint_on_representables(id, representable(arrow, 0));
  EXPECT_TRUE(p0.index()->initial_object().has_value());
  const auto one = FinFunctor::identity(fixtures::one());
  EXPECT_EQ(left_pro_adjoint_on_representables(one, terminal_presheaf(one.domain()))
                .index()
                ->num_objects(),
            1u);
}

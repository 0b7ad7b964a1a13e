#include <gtest/gtest.h>

#include "toposfactor/factorization.hpp"
#include "toposfactor/sites.hpp"

namespace tf = toposfactor;
using namespace toposfactor;

namespace {

GrothendieckTopology f_covers_one() {
  auto arrow = fixtures::arrow();
  CoverageBasis basis(2);
  basis[1].push_back({arrow->morphism_id("f")});
  return saturate(arrow, basis);
}

FinFunctor pick(const CategoryRef& c, const std::string& obj) {
  return FinFunctor::constant(fixtures::one(), c, c->object(obj));
}

}  // namespace

TEST(Saturate, EmptyBasisIsTrivial) {
  auto arrow = fixtures::arrow();
  const auto t = saturate(arrow, {});
  for (ObjId o = 0; o < 2; ++o) {
    ASSERT_EQ(t.covers(o).size(), 1u);
    EXPECT_EQ(t.covers(o)[0], maximal_sieve(*arrow, o));
  }
  EXPECT_TRUE(t.check_axioms());
}

TEST(Saturate, IdentitySingletonsGiveTrivialTopology) {
  auto arrow = fixtures::arrow();
  CoverageBasis basis(2);
  basis[0].push_back({arrow->identity(0)});
  basis[1].push_back({arrow->identity(1)});
  EXPECT_EQ(saturate(arrow, basis), trivial_topology(arrow));
}

TEST(Saturate, ArrowCoveringTheTarget) {
  const auto t = f_covers_one();
  auto arrow = t.base();
  Sieve generated{1, {arrow->morphism_id("f")}};
  EXPECT_TRUE(t.is_cover(generated));
  EXPECT_TRUE(t.check_axioms());
  EXPECT_EQ(saturate(arrow, {{}, {generated.arrows}}), t);
}

TEST(Saturate, IsIdempotent) {
  for (const auto& [name, c] : fixtures::catalog()) {
    for (const auto& t : all_topologies(c)) {
      CoverageBasis basis(c->num_objects());
      for (ObjId o = 0; o < c->num_objects(); ++o) {
        for (const auto& s : t.covers(o)) basis[o].push_back(s.arrows);
      }
      EXPECT_EQ(saturate(c, basis), t) << name;
      EXPECT_TRUE(t.check_axioms()) << name;
    }
  }
}

TEST(Sheaf, TrivialTopologyAcceptsEverything) {
  auto arrow = fixtures::arrow();
  const auto t = trivial_topology(arrow);
  EXPECT_TRUE(is_sheaf(representable(arrow, 0), t));
  EXPECT_TRUE(is_sheaf(initial_presheaf(arrow), t));
  EXPECT_TRUE(is_subcanonical(t));
}

TEST(Sheaf, SheafificationLandsInSheaves) {
  const auto t = f_covers_one();
  const auto a = sheafify(representable(t.base(), 0), t);
  EXPECT_TRUE(is_sheaf(a.sheaf, t));
  EXPECT_TRUE(a.unit.check_naturality());
  const auto again = sheafify(a.sheaf, t);
  EXPECT_TRUE(again.unit.is_isomorphism());
}

TEST(Sheaf, UnitIsIsoOnSheaves) {
  const auto t = trivial_topology(fixtures::sq());
  const auto x = representable(t.base(), 1);
  EXPECT_TRUE(sheafify(x, t).unit.is_isomorphism());
}

TEST(LocalSite, Examples) {
  EXPECT_TRUE(is_local_site(trivial_topology(fixtures::arrow())));
  EXPECT_TRUE(is_local_site(trivial_topology(fixtures::one())));
  EXPECT_FALSE(is_local_site(f_covers_one()));
  EXPECT_THROW(is_local_site(trivial_topology(fixtures::span())), Error);
}

TEST(Cofinal, TrivialTopologyMatchesFinality) {
  auto arrow = fixtures::arrow();
  const auto t = trivial_topology(arrow);
  EXPECT_TRUE(is_J_cofinal(pick(arrow, "1"), t));
  EXPECT_FALSE(is_J_cofinal(pick(arrow, "0"), t));
  EXPECT_TRUE(is_J_cofinal(FinFunctor::identity(arrow), f_covers_one()));
}

TEST(LiftsGlobalElements, Examples) {
  auto arrow = fixtures::arrow();
  EXPECT_TRUE(lifts_global_elements(FinFunctor::identity(arrow)));
  EXPECT_FALSE(lifts_global_elements(pick(arrow, "0")));
  EXPECT_TRUE(lifts_global_elements(pick(arrow, "1")));
}

TEST(TcByLocalSite, Examples) {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  SiteMorphismData id{FinFunctor::identity(one), SiteRole::Morphism, trivial_topology(one),
                      trivial_topology(one)};
  EXPECT_EQ(tc_by_local_site(id).kind, TcKind::TerminallyConnected);
  SiteMorphismData v{pick(arrow, "1"), SiteRole::Morphism, trivial_topology(one),
                     trivial_topology(arrow)};
  EXPECT_EQ(tc_by_local_site(v).kind, TcKind::TerminallyConnected);
  SiteMorphismData u{pick(arrow, "0"), SiteRole::Morphism, trivial_topology(one),
                     trivial_topology(arrow)};
  EXPECT_EQ(tc_by_local_site(u).kind, TcKind::NotTerminallyConnected);
  SiteMorphismData bad = v;
  bad.codomain_topology = f_covers_one();
  EXPECT_THROW(tc_by_local_site(bad), Error);
}

TEST(ComorphismTc, Examples) {
  auto arrow = fixtures::arrow();
  auto one = fixtures::one();
  SiteMorphismData v{pick(arrow, "1"), SiteRole::Comorphism, trivial_topology(one),
                     trivial_topology(arrow)};
  EXPECT_EQ(comorphism_tc(v).kind, TcKind::TerminallyConnected);
  SiteMorphismData u = v;
  u.f = pick(arrow, "0");
  EXPECT_EQ(comorphism_tc(u).kind, TcKind::NotTerminallyConnected);
}

TEST(Subcanonical, JoinOfSubcanonicalTopologies) {
  for (const char* name : {"Arrow", "ParPair"}) {
    const auto all = all_topologies(fixtures::by_name(name));
    for (const auto& j : all) {
      if (!is_subcanonical(j)) continue;
      for (const auto& k : all) {
        if (is_subcanonical(k)) EXPECT_TRUE(is_subcanonical(join(j, k))) << name;
      }
    }
  }
}

#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "toposfactor/kan.hpp"
#include "toposfactor/universe.hpp"

using namespace toposfactor;

namespace {

FinFunctor pick(const CategoryRef& c, ObjId x) {
  return FinFunctor::constant(fixtures::one(), c, x);
}

std::vector<std::size_t> sizes(const FinPresheaf& x) {
  std::vector<std::size_t> out;
  for (ObjId c = 0; c < x.base()->num_objects(); ++c) out.push_back(x.size(c));
  return out;
}

FinPresheaf two_points() {
  return FinPresheaf::make(fixtures::one(), {{"x", "y"}}, {{0, 1}});
}

// Presheaves used by the property tests: terminal, empty, two points and
// every representable.
std::vector<FinPresheaf> samples(const CategoryRef& c) {
  std::vector<FinPresheaf> out{terminal_presheaf(c), initial_presheaf(c), constant_presheaf(c, 2)};
  for (ObjId x = 0; x < c->num_objects(); ++x) out.push_back(representable(c, x));
  return out;
}

}  // namespace

TEST(Presheaf, TerminalAndRepresentables) {
  const auto arrow = fixtures::arrow();
  EXPECT_EQ(sizes(terminal_presheaf(arrow)), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(sizes(representable(arrow, 0)), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(sizes(representable(arrow, 1)), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(representable(arrow, 1).element_name(0, 0), "f");
  EXPECT_TRUE(isomorphic(representable(fixtures::one(), 0), terminal_presheaf(fixtures::one())));
  const auto empty = share(empty_category());
  EXPECT_EQ(global_elements(terminal_presheaf(empty)).size(), 1u);
  for (const auto& [name, c] : fixtures::catalog()) {
    EXPECT_EQ(global_elements(terminal_presheaf(c)).size(), 1u) << name;
  }
}

TEST(Presheaf, RejectsNonFunctorialActions) {
  // e acting as a swap on two points breaks e . e = e.
  const auto idem = fixtures::idem();
  try {
    FinPresheaf::make(idem, {{"p", "q"}}, {{0, 1}, {1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFunctorial);
  }
}

TEST(GlobalElements, Examples) {
  const auto arrow = fixtures::arrow();
  const auto g1 = global_elements(representable(arrow, 1));
  ASSERT_EQ(g1.size(), 1u);
  EXPECT_EQ(g1[0].family, (std::vector<std::size_t>{0, 0}));
  EXPECT_TRUE(global_elements(representable(arrow, 0)).empty());
  EXPECT_EQ(global_elements(two_points()).size(), 2u);
}

TEST(GlobalElements, MatchSectionsOfTheElementsProjection) {
  for (const auto& [name, c] : fixtures::catalog()) {
    for (const auto& x : samples(c)) {
      const auto el = category_of_elements(x);
      std::size_t sections = 0;
      for_each_functor(c, el.category, [&](const FinFunctor& s) {
        if (compose(el.projection, s) == FinFunctor::identity(c)) ++sections;
        return true;
      });
      EXPECT_EQ(sections, global_elements(x).size()) << name;
      EXPECT_EQ(global_elements(x), oracle::global_elements(x)) << name;
    }
  }
}

TEST(GlobalElements, AreSplitMonomorphisms) {
  for (const auto& [name, c] : fixtures::catalog()) {
    for (const auto& x : samples(c)) {
      for (const auto& a : global_elements(x)) {
        const auto m = element_as_map(x, a);
        EXPECT_TRUE(m.is_monomorphism());
        EXPECT_TRUE(compose(terminal_map(x), m).is_isomorphism());
      }
    }
  }
}

TEST(Limits, Examples) {
  const auto arrow = fixtures::arrow();
  const auto y0 = representable(arrow, 0);
  const auto y1 = representable(arrow, 1);
  EXPECT_TRUE(isomorphic(product(y1, terminal_presheaf(arrow)).apex, y1));
  EXPECT_EQ(sizes(coproduct(y0, y1).apex), (std::vector<std::size_t>{2, 1}));
  const auto a = element_as_map(y1, global_elements(y1)[0]);
  EXPECT_TRUE(isomorphic(pullback(a, a).apex, terminal_presheaf(arrow)));
}

TEST(Limits, RestrictionPreservesProductsAndCoproducts) {
  std::mt19937_64 rng(17);
  const auto u = enumerate_categories({3, 2});
  for (int n = 0; n < 100; ++n) {
    auto f = random_functor(rng, u[rng() % u.size()], u[rng() % u.size()]);
    if (!f) continue;
    const auto xs = samples(f->codomain());
    const auto& x = xs[rng() % xs.size()];
    const auto& y = xs[rng() % xs.size()];
    EXPECT_TRUE(isomorphic(restrict(product(x, y).apex, *f),
                           product(restrict(x, *f), restrict(y, *f)).apex));
    EXPECT_TRUE(isomorphic(restrict(coproduct(x, y).apex, *f),
                           coproduct(restrict(x, *f), restrict(y, *f)).apex));
  }
}

TEST(Elements, Examples) {
  const auto arrow = fixtures::arrow();
  EXPECT_TRUE(equivalent(category_of_elements(terminal_presheaf(arrow)).category, arrow));
  const auto e0 = category_of_elements(representable(arrow, 0));
  EXPECT_EQ(e0.category->num_objects(), 1u);
  EXPECT_EQ(e0.projection.on_object(0), 0u);
  const auto e2 = category_of_elements(two_points());
  EXPECT_EQ(e2.category->num_objects(), 2u);
  EXPECT_EQ(e2.category->num_morphisms(), 2u);
}

TEST(SliceAsElements, Examples) {
  const auto arrow = fixtures::arrow();
  const auto y1 = representable(arrow, 1);
  const auto s = slice_as_elements(y1);
  const auto id_fibers = s.to_elements(PresheafMap::identity(y1));
  EXPECT_TRUE(isomorphic(id_fibers, terminal_presheaf(s.elements.category)));
  const auto a = element_as_map(y1, global_elements(y1)[0]);
  const auto fibers = s.to_elements(a);
  for (ObjId e = 0; e < s.elements.category->num_objects(); ++e) EXPECT_LE(fibers.size(e), 1u);
  EXPECT_TRUE(slice_roundtrip(s, a));
}

TEST(SliceAsElements, RoundTripsOnAllMapsIntoSamples) {
  for (const auto& [name, c] : fixtures::catalog()) {
    const auto xs = samples(c);
    for (const auto& x : xs) {
      const auto s = slice_as_elements(x);
      for (const auto& d : xs) {
        for (const auto& h : all_maps(d, x)) EXPECT_TRUE(slice_roundtrip(s, h)) << name;
      }
    }
  }
}

TEST(PullbackOfElement, Examples) {
  const auto arrow = fixtures::arrow();
  const auto y1 = representable(arrow, 1);
  const auto t = terminal_presheaf(arrow);
  const auto only = global_elements(t)[0];
  EXPECT_TRUE(isomorphic(pullback_of_element(only, terminal_map(y1)), y1));
  const auto a = global_elements(y1)[0];
  EXPECT_TRUE(isomorphic(pullback_of_element(a, PresheafMap::identity(y1)), t));
}

TEST(Restrict, Examples) {
  const auto arrow = fixtures::arrow();
  const auto v = pick(arrow, 1);
  EXPECT_EQ(sizes(restrict(representable(arrow, 1), v)), (std::vector<std::size_t>{1}));
  EXPECT_TRUE(isomorphic(restrict(terminal_presheaf(arrow), v),
                         terminal_presheaf(fixtures::one())));
  const auto y1 = representable(arrow, 1);
  EXPECT_EQ(restrict(y1, FinFunctor::identity(arrow)).actions(), y1.actions());
}

TEST(Lan, Examples) {
  const auto arrow = fixtures::arrow();
  const auto t1 = terminal_presheaf(fixtures::one());
  EXPECT_TRUE(isomorphic(lan(t1, pick(arrow, 0)), representable(arrow, 0)));
  EXPECT_TRUE(isomorphic(lan(t1, pick(arrow, 1)), terminal_presheaf(arrow)));
  const auto y1 = representable(arrow, 1);
  EXPECT_TRUE(isomorphic(lan(y1, FinFunctor::identity(arrow)), y1));
}

TEST(Ran, Examples) {
  const auto arrow = fixtures::arrow();
  const auto v = pick(arrow, 1);
  EXPECT_TRUE(isomorphic(ran(terminal_presheaf(fixtures::one()), v), terminal_presheaf(arrow)));
  // Ran at 0 is a limit over the empty comma, at 1 a copy of the two points.
  EXPECT_EQ(sizes(ran(two_points(), v)), (std::vector<std::size_t>{1, 2}));
  const auto y1 = representable(arrow, 1);
  EXPECT_TRUE(isomorphic(ran(y1, FinFunctor::identity(arrow)), y1));
}

TEST(ComponentsPresheaf, Examples) {
  const auto arrow = fixtures::arrow();
  EXPECT_TRUE(isomorphic(components_presheaf(pick(arrow, 0)), representable(arrow, 0)));
  EXPECT_TRUE(isomorphic(components_presheaf(pick(arrow, 1)), terminal_presheaf(arrow)));
  const auto one = fixtures::one();
  EXPECT_TRUE(isomorphic(components_presheaf(FinFunctor::identity(one)), terminal_presheaf(one)));
}

TEST(ComponentsPresheaf, AgreesWithLanOfTerminal) {
  const auto u = enumerate_categories({2, 2});
  for (const auto& c : u) {
    for (const auto& d : u) {
      for (const auto& f : all_functors(c, d)) {
        EXPECT_TRUE(isomorphic(components_presheaf(f), lan(terminal_presheaf(c), f)));
      }
    }
  }
}

TEST(UnitCounit, Examples) {
  const auto arrow = fixtures::arrow();
  const auto id = FinFunctor::identity(arrow);
  const auto y1 = representable(arrow, 1);
  const auto w = unit_counit(id, y1, y1);
  EXPECT_TRUE(w.lan_unit.is_isomorphism());
  EXPECT_TRUE(w.ran_counit.is_isomorphism());
  EXPECT_TRUE(w.triangles);

  const auto u = pick(arrow, 0);
  const auto t1 = terminal_presheaf(fixtures::one());
  const auto eta = lan_unit(t1, u);
  EXPECT_EQ(eta.target().size(0), 1u);
  EXPECT_TRUE(eta.is_isomorphism());

  EXPECT_TRUE(unit_counit(pick(arrow, 1), t1, y1).triangles);
}

// Maps Lan X -> Y correspond to maps X -> u* Y.
TEST(UnitCounit, HomBijectionOnRandomInstances) {
  std::mt19937_64 rng(23);
  const auto u = enumerate_categories({2, 2});
  int done = 0;
  while (done < 60) {
    auto f = random_functor(rng, u[rng() % u.size()], u[rng() % u.size()]);
    if (!f) continue;
    const auto xs = samples(f->domain());
    const auto ys = samples(f->codomain());
    const auto& x = xs[rng() % xs.size()];
    const auto& y = ys[rng() % ys.size()];
    EXPECT_EQ(all_maps(lan(x, *f), y).size(), all_maps(x, restrict(y, *f)).size());
    EXPECT_EQ(all_maps(restrict(y, *f), x).size(), all_maps(y, ran(x, *f)).size());
    EXPECT_TRUE(unit_counit(*f, x, y).triangles);
    ++done;
  }
}

TEST(ConnectedEssential, Examples) {
  const auto arrow = fixtures::arrow();
  EXPECT_TRUE(is_connected_essential(FinFunctor::identity(arrow)));
  EXPECT_FALSE(is_connected_essential(pick(arrow, 0)));
  EXPECT_FALSE(is_connected_essential(pick(arrow, 1)));
}

TEST(Frobenius, Examples) {
  const auto arrow = fixtures::arrow();
  const auto u = pick(arrow, 0);
  const auto t = terminal_presheaf(arrow);
  const auto y1 = representable(arrow, 1);
  const auto f = terminal_presheaf(fixtures::one());
  const auto phi = terminal_map(f);  // F -> u* 1
  EXPECT_TRUE(frobenius_check(u, phi, PresheafMap::identity(t)));
  EXPECT_TRUE(frobenius_check(u, phi, terminal_map(y1)));
  const auto id = FinFunctor::identity(arrow);
  EXPECT_TRUE(frobenius_check(id, terminal_map(y1), terminal_map(representable(arrow, 0))));
}

#include <gtest/gtest.h>

#include <map>
#include <mutex>
#include <set>

#include "toposfactor/constructions.hpp"
#include "toposfactor/universe.hpp"

using namespace toposfactor;

namespace {

CategoryDescription chain3() {
  return {"Chain3",
          {"0", "1", "2"},
          {{"f", "0", "1"}, {"g", "1", "2"}, {"h", "0", "2"}},
          {{"g", "f", "h"}}};
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::UnknownCommand;
}

}  // namespace

TEST(FinCategory, ValidatesChain) {
  const auto c = validate_category(chain3());
  EXPECT_EQ(c.num_objects(), 3u);
  EXPECT_EQ(c.num_morphisms(), 6u);
  EXPECT_EQ(c.compose(c.morphism_id("g"), c.morphism_id("f")), c.morphism_id("h"));
  EXPECT_EQ(c.morphism_name(c.identity(1)), "id_1");
  EXPECT_TRUE(c.check_laws());
  EXPECT_EQ(c.terminal_object(), std::optional<ObjId>(2));
  EXPECT_EQ(c.initial_object(), std::optional<ObjId>(0));
}

TEST(FinCategory, InfersUniqueComposite) {
  auto raw = chain3();
  raw.compositions.clear();
  EXPECT_EQ(validate_category(raw).hom(0, 2).size(), 1u);
}

TEST(FinCategory, ReportsMissingComposite) {
  auto raw = chain3();
  raw.compositions.clear();
  raw.morphisms.push_back({"h2", "0", "2"});
  EXPECT_EQ(code_of([&] { validate_category(raw); }), ErrorCode::MissingComposite);
}

TEST(FinCategory, ReportsIllTypedAndUnknownNames) {
  auto raw = chain3();
  raw.compositions = {{"f", "g", "h"}};
  EXPECT_EQ(code_of([&] { validate_category(raw); }), ErrorCode::IllTypedComposite);
  raw = chain3();
  raw.morphisms.push_back({"k", "0", "7"});
  EXPECT_EQ(code_of([&] { validate_category(raw); }), ErrorCode::UnknownName);
  raw = chain3();
  raw.morphisms.push_back({"f", "0", "1"});
  EXPECT_EQ(code_of([&] { validate_category(raw); }), ErrorCode::DuplicateName);
}

TEST(FinCategory, RejectsNonAssociativeTable) {
  // (a.a).b = b.b = a but a.(a.b) = a.a = b.
  CategoryDescription raw{"M", {"x"}, {{"a", "x", "x"}, {"b", "x", "x"}},
                          {{"a", "a", "b"}, {"b", "b", "a"}, {"a", "b", "a"}, {"b", "a", "b"}}};
  EXPECT_EQ(code_of([&] { validate_category(raw); }), ErrorCode::NonAssociative);
}

TEST(FinCategory, OppositeIsAnInvolution) {
  for (const auto& [name, c] : fixtures::catalog()) {
    const auto op = opposite(*c);
    EXPECT_TRUE(op.check_laws()) << name;
    EXPECT_TRUE(opposite(op) == *c) << name;
    for (MorId f = 0; f < c->num_morphisms(); ++f) {
      EXPECT_EQ(op.source(f), c->target(f));
    }
  }
}

TEST(FinFunctor, ValidationErrors) {
  const auto c = share(validate_category(chain3()));
  const auto arrow = fixtures::arrow();
  FunctorDescription raw{"u", {{"0", "0"}, {"1", "2"}}, {}};
  const auto u = validate_functor(raw, arrow, c);
  EXPECT_EQ(u.on_morphism(arrow->morphism_id("f")), c->morphism_id("h"));
  raw.on_objects = {{"0", "2"}, {"1", "0"}};
  EXPECT_EQ(code_of([&] { validate_functor(raw, arrow, c); }), ErrorCode::UnmappedMorphism);
  raw.on_objects = {{"0", "0"}, {"1", "1"}};
  raw.on_morphisms = {{"f", "g"}};
  EXPECT_EQ(code_of([&] { validate_functor(raw, arrow, c); }), ErrorCode::BrokenComposition);
}

TEST(FinFunctor, CompositionIsAssociativeOnSmallUniverse) {
  const auto cats = fixtures::catalog();
  std::size_t checked = 0;
  for (const auto& [n1, a] : cats) {
    for (const auto& [n2, b] : cats) {
      if (a->num_objects() > 2 || b->num_objects() > 2) continue;
      for (const auto& f : all_functors(a, b)) {
        const auto id_b = FinFunctor::identity(b);
        EXPECT_EQ(compose(id_b, f), f);
        for (const auto& g : all_functors(b, a)) {
          EXPECT_EQ(compose(compose(f, g), f), compose(f, compose(g, f)));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(NatTransf, NaturalityAndIsomorphism) {
  const auto arrow = fixtures::arrow();
  const auto one = fixtures::one();
  const auto s = FinFunctor::constant(one, arrow, 0);
  const auto t = FinFunctor::constant(one, arrow, 1);
  const auto all = all_natural_transformations(s, t);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_FALSE(all[0].is_isomorphism());
  EXPECT_TRUE(natural_isomorphisms(s, t).empty());
  EXPECT_EQ(code_of([&] { NatTransf::make(t, s, {arrow->morphism_id("f")}); }),
            ErrorCode::NotNatural);
}

TEST(Equivalence, SkeletonOfIsomorphicObjects) {
  CategoryDescription raw{"Iso", {"a", "b"}, {{"i", "a", "b"}, {"j", "b", "a"}},
                          {{"j", "i", "id_a"}, {"i", "j", "id_b"}}};
  const auto iso = share(validate_category(raw));
  EXPECT_TRUE(equivalent(iso, fixtures::one()));
  EXPECT_FALSE(equivalent(iso, fixtures::arrow()));
  EXPECT_EQ(skeleton(*iso).num_objects(), 1u);
  EXPECT_TRUE(is_equivalence(FinFunctor::constant(iso, fixtures::one(), 0)));
}

// Categories with one object are monoids: one of order 1 and two of order 2.
TEST(Universe, CountsSmallCategories) {
  const auto u = enumerate_categories({1, 2});
  std::map<std::size_t, std::size_t> by_objects;
  for (const auto& c : u) ++by_objects[c->num_objects()];
  EXPECT_EQ(by_objects[0], 1u);
  EXPECT_EQ(by_objects[1], 3u);
}

TEST(Universe, TwoObjectCategoriesArePairwiseNonIsomorphic) {
  const auto u = enumerate_categories({2, 2});
  std::vector<CategoryRef> two;
  for (const auto& c : u) {
    EXPECT_TRUE(c->check_laws());
    if (c->num_objects() == 2) two.push_back(c);
  }
  for (std::size_t i = 0; i < two.size(); ++i) {
    for (std::size_t j = i + 1; j < two.size(); ++j) {
      EXPECT_FALSE(find_isomorphism(two[i], two[j]).has_value()) << i << " " << j;
    }
  }
  // Every raw table on a hom-size matrix is isomorphic to a listed category.
  for (std::size_t a = 1; a <= 2; ++a) {
    for (std::size_t b = 0; b <= 2; ++b) {
      for (auto& raw : categories_with_homs({{a, b}, {0, 1}})) {
        const auto c = share(std::move(raw));
        bool found = false;
        for (const auto& t : two) found = found || find_isomorphism(c, t).has_value();
        EXPECT_TRUE(found);
      }
    }
  }
}

TEST(Universe, CanonicalFormDetectsIsomorphism) {
  const auto arrow = fixtures::arrow();
  CategoryDescription raw{"Flip", {"1", "0"}, {{"f", "0", "1"}}, {}};
  const auto flipped = validate_category(raw);
  EXPECT_EQ(canonical_form(*arrow), canonical_form(flipped));
  EXPECT_NE(canonical_form(*arrow), canonical_form(*fixtures::par_pair()));
}

TEST(Universe, RandomFunctorIsValid) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_category(rng, 4, 2);
    const auto d = random_category(rng, 3, 2);
    EXPECT_EQ(c->num_objects(), 4u);
    EXPECT_TRUE(c->check_laws());
    const auto f = random_functor(rng, c, d);
    ASSERT_TRUE(f.has_value());
    EXPECT_TRUE(f->check_laws());
  }
}

TEST(Universe, SweepIsDeterministic) {
  const auto u = enumerate_categories({2, 2});
  SweepOptions o;
  o.exhaustive_max_product = 2;
  o.samples = 40;
  o.seed = 9;
  auto collect = [&] {
    std::mutex m;
    std::multiset<std::vector<std::size_t>> seen;
    const auto stats = sweep_universe(u, o, [&](const FinFunctor& f) {
      std::lock_guard lock(m);
      auto key = f.morphism_map();
      key.push_back(f.domain()->num_morphisms());
      key.push_back(f.codomain()->num_morphisms());
      seen.insert(key);
    });
    EXPECT_EQ(stats.sampled, 40u);
    return seen;
  };
  EXPECT_EQ(collect(), collect());
}

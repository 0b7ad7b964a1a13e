// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "oracles/oracles.hpp"
#include "oracles/test_data.hpp"
#include "toposfactor/cli.hpp"
#include "toposfactor/constructions.hpp"
#include "toposfactor/factorization.hpp"
#include "toposfactor/kan.hpp"
#include "toposfactor/proetale.hpp"
#include "toposfactor/sites.hpp"
#include "toposfactor/universe.hpp"

using namespace toposfactor;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// First failure wins; the total is counted across worker threads.
class Failures {
 public:
  void add(const std::string& what) {
    std::lock_guard lock(mutex_);
    if (count_++ == 0) first_ = what;
  }
  std::size_t count() const { return count_; }
  const std::string& first() const { return first_; }

 private:
  std::mutex mutex_;
  std::size_t count_ = 0;
  std::string first_;
};

std::string describe(const FinFunctor& u) {
  std::ostringstream out;
  out << u.domain()->name() << " -> " << u.codomain()->name() << " [";
  for (ObjId a = 0; a < u.domain()->num_objects(); ++a) out << (a ? "," : "") << u.on_object(a);
  out << " |";
  for (MorId m = 0; m < u.domain()->num_morphisms(); ++m) out << " " << u.on_morphism(m);
  out << "]";
  return out.str();
}

Outcome verdict(const Failures& f, const std::string& summary) {
  if (f.count() == 0) return {true, summary};
  return {false, std::to_string(f.count()) + " failures; first: " + f.first()};
}

const UniverseBounds& bounds() {
  static const UniverseBounds b = bounds_from_env();
  return b;
}

const std::vector<CategoryRef>& universe() {
  static const std::vector<CategoryRef> u = enumerate_categories(bounds());
  return u;
}

// Criteria 1 and 3 leave out only the block of functors between categories of
// maximal size; criteria 4 and 5 sweep the blocks up to |C| * |D| <= 4.
SweepOptions broad_sweep() {
  const std::size_t n = bounds().max_objects;
  SweepOptions o;
  o.exhaustive_max_product = n * n <= 4 ? n * n : n * (n - 1);
  o.samples = 20000;
  o.seed = 2024;
  return o;
}

SweepOptions narrow_sweep() {
  SweepOptions o;
  o.exhaustive_max_product = 4;
  o.samples = 3000;
  o.seed = 4048;
  return o;
}

std::string sweep_summary(const SweepStats& s) {
  return std::to_string(s.exhaustive) + " exhaustive functors over " +
         std::to_string(s.pairs_exhaustive) + " category pairs, " + std::to_string(s.sampled) +
         " sampled from " + std::to_string(s.pairs_sampled) + " further pairs";
}

// --- 1 -------------------------------------------------------------------------------------

void check_factorization(const FinFunctor& u, Failures& fails) {
  const auto fac = comprehensive_factorize(u);
  if (!(compose(fac.right, fac.left) == u)) fails.add("right . left != u for " + describe(u));
  if (!is_final_functor(fac.left)) fails.add("left not final for " + describe(u));
  if (!is_discrete_fibration(fac.right)) fails.add("right not a fibration for " + describe(u));
  if (!fac.witness.is_isomorphism()) fails.add("witness not invertible for " + describe(u));
}

Outcome criterion_factorization() {
  Failures fails;
  std::atomic<std::size_t> n{0};
  const auto stats = sweep_universe(universe(), broad_sweep(), [&](const FinFunctor& u) {
    check_factorization(u, fails);
    ++n;
  });
  std::mt19937_64 rng(99);
  std::size_t random_cases = 0;
  for (; random_cases < 600; ++random_cases) {
    const auto c = random_category(rng, 4, 2);
    const auto d = random_category(rng, 4, 2);
    check_factorization(*random_functor(rng, c, d), fails);
  }
  return verdict(fails, sweep_summary(stats) + "; " + std::to_string(random_cases) +
                            " random 4-object functors");
}

// --- 2 -------------------------------------------------------------------------------------

// Every presheaf P with a factorization u = p . l through El(P), l final,
// must be isomorphic to Pi.
Outcome criterion_uniqueness() {
  Failures fails;
  std::mt19937_64 rng(7);
  std::vector<CategoryRef> small;
  for (const auto& c : universe()) {
    if (c->num_objects() <= 2) small.push_back(c);
  }
  std::size_t accepted = 0, candidates_total = 0, attempts = 0;
  while (accepted < 100 && attempts < 100000) {
    ++attempts;
    const auto& c = universe()[rng() % universe().size()];
    const auto& d = small[rng() % small.size()];
    auto u = random_functor(rng, c, d);
    if (!u || d->num_objects() == 0) continue;
    // |P(x)| is bounded by the number of objects of x|u for a final l.
    std::vector<std::size_t> bound;
    double leaves = 1;
    for (ObjId x = 0; x < d->num_objects(); ++x) {
      bound.push_back(coslice_components(x, *u).objects.size());
    }
    for (MorId g = 0; g < d->num_morphisms(); ++g) {
      if (d->is_identity(g)) continue;
      leaves *= std::pow(static_cast<double>(bound[d->source(g)] + 1),
                         static_cast<double>(bound[d->target(g)]));
    }
    double sizes = 1;
    for (auto b : bound) sizes *= static_cast<double>(b + 1);
    if (leaves * sizes > 2e5) continue;
    ++accepted;
    const auto fac = comprehensive_factorize(*u);
    std::size_t found = 0;
    oracle::for_each_presheaf(d, bound, [&](const FinPresheaf& p) {
      const auto el = category_of_elements(p);
      for (const auto& a : global_elements(restrict(p, *u))) {
        std::vector<ObjId> objs;
        std::vector<MorId> mors;
        for (ObjId x = 0; x < c->num_objects(); ++x) {
          objs.push_back(el.object(u->on_object(x), a.family[x]));
        }
        for (MorId k = 0; k < c->num_morphisms(); ++k) {
          mors.push_back(el.lift(u->on_morphism(k), a.family[c->target(k)]));
        }
        const auto l = FinFunctor::make(c, el.category, objs, mors);
        if (!oracle::is_final(l)) continue;
        ++found;
        ++candidates_total;
        if (!isomorphic(p, fac.pi) || !equivalent(el.category, fac.mid)) {
          fails.add("alternative middle not equivalent for " + describe(*u));
        }
      }
      return true;
    });
    if (found == 0) fails.add("no factorization found by search for " + describe(*u));
  }
  if (accepted < 100) fails.add("only " + std::to_string(accepted) + " functors sampled");
  return verdict(fails, std::to_string(accepted) + " functors, " +
                            std::to_string(candidates_total) +
                            " (final, fibration) factorizations found by exhaustive search");
}

// --- 3 -------------------------------------------------------------------------------------

std::unordered_map<const FinCategory*, GrothendieckTopology> trivial_topologies() {
  std::unordered_map<const FinCategory*, GrothendieckTopology> out;
  for (const auto& c : universe()) out.emplace(c.get(), trivial_topology(c));
  return out;
}

Outcome criterion_tc_equivalence() {
  Failures fails;
  const auto trivial = trivial_topologies();
  std::atomic<std::size_t> tc{0};
  const auto stats = sweep_universe(universe(), broad_sweep(), [&](const FinFunctor& u) {
    const bool a = is_terminally_connected_essential(u).holds;
    const bool b = is_final_functor(u).holds;
    const bool c = isomorphic(components_presheaf(u), terminal_presheaf(u.codomain()));
    const bool d = is_J_cofinal(u, trivial.at(u.codomain().get())).holds;
    if (a != b || b != c || c != d) fails.add("criteria disagree on " + describe(u));
    if (a) ++tc;
  });
  return verdict(fails, sweep_summary(stats) + "; " + std::to_string(tc.load()) +
                            " terminally connected");
}

// --- 4 -------------------------------------------------------------------------------------

std::vector<FinPresheaf> fixture_presheaves(const CategoryRef& d) {
  std::vector<FinPresheaf> out{terminal_presheaf(d), initial_presheaf(d),
                               constant_presheaf(d, 2)};
  for (ObjId x = 0; x < d->num_objects(); ++x) out.push_back(representable(d, x));
  return out;
}

GlobalElement restrict_element(const FinFunctor& u, const GlobalElement& b) {
  GlobalElement a;
  for (ObjId c = 0; c < u.domain()->num_objects(); ++c) a.family.push_back(b.family[u.on_object(c)]);
  return a;
}

GlobalElement push(const PresheafMap& m, const GlobalElement& a) {
  GlobalElement out;
  for (ObjId c = 0; c < a.family.size(); ++c) out.family.push_back(m.at(c, a.family[c]));
  return out;
}

Outcome criterion_lifting() {
  Failures fails;
  std::atomic<std::size_t> finals{0}, lifted{0}, natural{0};
  const auto stats = sweep_universe(universe(), narrow_sweep(), [&](const FinFunctor& u) {
    if (!is_final_functor(u)) return;
    ++finals;
    const auto fixtures = fixture_presheaves(u.codomain());
    for (const auto& e : fixtures) {
      const auto ge = global_elements(e);
      const auto gr = global_elements(restrict(e, u));
      if (ge.size() != gr.size()) fails.add("sizes differ for " + describe(u));
      for (const auto& a : gr) {
        const auto b = lift_global_element(u, e, a);
        if (!(restrict_element(u, b) == a)) fails.add("restrict . lift != id on " + describe(u));
        ++lifted;
      }
      for (const auto& b : ge) {
        if (!(lift_global_element(u, e, restrict_element(u, b)) == b)) {
          fails.add("lift . restrict != id on " + describe(u));
        }
      }
    }
    // Naturality along maps between the fixtures.
    for (const auto& e : fixtures) {
      for (const auto& e2 : fixtures) {
        const auto maps = all_maps(e, e2);
        for (std::size_t k = 0; k < maps.size() && k < 8; ++k) {
          const auto m_restricted = restrict(maps[k], u);
          for (const auto& a : global_elements(restrict(e, u))) {
            const auto lhs = lift_global_element(u, e2, push(m_restricted, a));
            const auto rhs = push(maps[k], lift_global_element(u, e, a));
            if (!(lhs == rhs)) fails.add("lifting not natural on " + describe(u));
            ++natural;
          }
        }
      }
    }
    const auto& y = fixtures.back();
    const auto w = unit_counit(u, restrict(y, u), y);
    if (!w.triangles) fails.add("unit triangles fail on " + describe(u) + ": " + w.triangles.certificate);
  });
  return verdict(fails, sweep_summary(stats) + "; " + std::to_string(finals.load()) +
                            " final functors, " + std::to_string(lifted.load()) +
                            " lifts, " + std::to_string(natural.load()) + " naturality squares");
}

// --- 5 -------------------------------------------------------------------------------------

Outcome criterion_eta() {
  Failures fails;
  std::atomic<std::size_t> tc{0};
  const auto stats = sweep_universe(universe(), narrow_sweep(), [&](const FinFunctor& u) {
    const bool a = is_terminally_connected_essential(u).holds;
    const bool b = eta_orthogonal(u).holds;
    if (a != b) fails.add("eta-orthogonality disagrees on " + describe(u));
    if (a) ++tc;
  });
  return verdict(fails, sweep_summary(stats) + "; " + std::to_string(tc.load()) +
                            " terminally connected");
}

// --- 6, 7, 8 -------------------------------------------------------------------------------

const std::vector<testdata::DiagramFixture>& diagrams() {
  static const auto d = testdata::diagram_fixtures();
  return d;
}

std::optional<ObjId> initial_object(const FinCategory& c) { return c.initial_object(); }

Outcome criterion_ore() {
  Failures fails;
  bool idem_index = false;
  std::size_t collapses = 0;
  for (const auto& fx : diagrams()) {
    const auto& diag = fx.def.diagram;
    idem_index = idem_index || *diag.index() == *fixtures::idem();
    const auto mol = build_oplax_colimit(diag, fx.def.slices);
    if (auto c = check_ore(mol); !c) fails.add(fx.file + ": " + c.certificate);
    const auto fc = localize(mol);
    if (auto i0 = initial_object(*diag.index())) {
      ++collapses;
      if (!is_equivalence(fc.inclusions[*i0])) {
        fails.add(fx.file + ": slice at the initial index is not equivalent to the localization");
      }
    }
  }
  if (diagrams().size() < 20) fails.add("fewer than 20 diagram fixtures");
  if (!idem_index) fails.add("no fixture indexed by Idem");
  return verdict(fails, std::to_string(diagrams().size()) + " diagrams (Idem index included), " +
                            std::to_string(collapses) + " with an initial index object");
}

Outcome criterion_reindexing() {
  Failures fails;
  for (const auto& fx : diagrams()) {
    const auto fc = localize(build_oplax_colimit(fx.def.diagram, fx.def.slices));
    if (auto c = canonical_reindexing_initial(fc, fx.def.diagram); !c) {
      fails.add(fx.file + ": " + c.certificate);
    }
  }
  return verdict(fails, std::to_string(diagrams().size()) + " diagrams");
}

Outcome criterion_faithful() {
  Failures fails;
  std::size_t pairs = 0;
  for (const auto& fx : diagrams()) {
    const auto fc = localize(build_oplax_colimit(fx.def.diagram, fx.def.slices));
    const auto r = pro_adjoint_faithful_check(fc);
    pairs += r.pairs_checked;
    if (!r.verdict) fails.add(fx.file + ": " + r.verdict.certificate);
  }
  return verdict(fails, std::to_string(diagrams().size()) + " diagrams, " +
                            std::to_string(pairs) + " parallel pairs separated");
}

// --- 9 -------------------------------------------------------------------------------------

Outcome criterion_comma_stability() {
  Failures fails;
  std::mt19937_64 rng(31);
  const auto& u_all = universe();
  std::size_t squares = 0;
  while (squares < 250) {
    const auto& c = u_all[rng() % u_all.size()];
    const auto& d = u_all[rng() % u_all.size()];
    const auto& b = u_all[rng() % u_all.size()];
    auto u = random_functor(rng, c, d);
    if (!u || !is_final_functor(*u)) continue;
    auto g = random_functor(rng, b, d);
    if (!g) continue;
    ++squares;
    const auto cm = comma(*g, *u);
    if (!is_final_functor(cm.proj_left)) {
      fails.add("comma projection not final for g = " + describe(*g) + ", u = " + describe(*u));
    }
  }

  std::vector<CategoryRef> pointed;
  for (const auto& c : u_all) {
    if (c->terminal_object()) pointed.push_back(c);
  }
  auto keeps_terminal = [](const FinFunctor& f) {
    const auto t = f.domain()->terminal_object();
    const auto& cod = *f.codomain();
    const ObjId ft = f.on_object(*t);
    for (ObjId x = 0; x < cod.num_objects(); ++x) {
      if (cod.hom(x, ft).size() != 1) return false;
    }
    return true;
  };
  std::size_t collages = 0, attempts = 0;
  while (collages < 60 && attempts < 200000) {
    ++attempts;
    const auto& a = pointed[rng() % pointed.size()];
    const auto& b = pointed[rng() % pointed.size()];
    const auto& c = pointed[rng() % pointed.size()];
    auto f = random_functor(rng, a, b);
    auto g = random_functor(rng, a, c);
    if (!f || !g || !keeps_terminal(*f) || !keeps_terminal(*g)) continue;
    if (!lifts_global_elements(*f)) continue;
    ++collages;
    const auto col = cocomma_collage(*f, *g);
    if (auto r = lifts_global_elements(col.q1); !r) {
      fails.add("q1 does not lift for f = " + describe(*f) + ", g = " + describe(*g) + ": " +
                r.certificate);
    }
  }
  if (collages < 50) fails.add("only " + std::to_string(collages) + " collage instances");
  return verdict(fails, std::to_string(squares) + " comma squares, " + std::to_string(collages) +
                            " collages");
}

// --- 10 ------------------------------------------------------------------------------------

std::vector<CategoryRef> site_categories() {
  std::vector<CategoryRef> out;
  for (const auto& [name, c] : fixtures::catalog()) out.push_back(c);
  for (const auto& c : universe()) {
    if (c->num_objects() >= 1 && c->num_objects() <= 2) out.push_back(c);
  }
  return out;
}

// The image of x in X(T_C) in (a_K Lan_f X)(T_D), computed through the Kan
// extension and the sheafification unit.
bool lifts_by_kan(const FinFunctor& f, const GrothendieckTopology& k) {
  const auto& c = *f.domain();
  const auto& d = *f.codomain();
  const ObjId tc = *c.terminal_object();
  const ObjId td = *d.terminal_object();
  const MorId e = d.hom(td, f.on_object(tc)).front();
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    const auto y = representable(f.domain(), x);
    const auto l = lan_data(y, f);
    const auto s = sheafify(l.value, k);
    std::set<std::size_t> image;
    for (std::size_t v = 0; v < y.size(tc); ++v) {
      image.insert(s.unit.at(td, l.class_of_triple(td, tc, e, v)));
    }
    if (image.size() != y.size(tc) || image.size() != s.sheaf.size(td)) return false;
  }
  return true;
}

Outcome criterion_sites() {
  Failures fails;
  std::size_t saturations = 0, sheafifications = 0, joins = 0, tc_cases = 0, tc_true = 0;
  const auto cats = site_categories();

  for (const auto& c : cats) {
    for (const auto& j : all_topologies(c)) {
      CoverageBasis basis(c->num_objects());
      for (ObjId a = 0; a < c->num_objects(); ++a) {
        for (const auto& s : j.covers(a)) basis[a].push_back(s.arrows);
      }
      if (!(saturate(c, basis) == j)) fails.add("saturate not idempotent on " + c->name());
      ++saturations;
    }
  }

  for (const auto& [name, c] : fixtures::catalog()) {
    for (const auto& j : all_topologies(c)) {
      std::vector<FinPresheaf> inputs = fixture_presheaves(c);
      std::vector<FinPresheaf> sheaves;
      for (const auto& x : inputs) sheaves.push_back(sheafify(x, j).sheaf);
      for (const auto& x : inputs) {
        const auto s = sheafify(x, j);
        const auto s2 = sheafify(s.sheaf, j);
        if (!isomorphic(s.sheaf, s2.sheaf) || !s2.unit.is_isomorphism()) {
          fails.add("sheafify not idempotent on " + name);
        }
        if (!oracle::is_sheaf(s.sheaf, j)) fails.add("sheafify output not a sheaf on " + name);
        if (auto r = sheafify_universal(s, j, sheaves); !r) {
          fails.add("sheafify not universal on " + name + ": " + r.certificate);
        }
        ++sheafifications;
      }
    }
  }

  for (const auto& c : {fixtures::arrow(), fixtures::par_pair()}) {
    const auto tops = all_topologies(c);
    for (const auto& j : tops) {
      for (const auto& k : tops) {
        if (!is_subcanonical(j) || !is_subcanonical(k)) continue;
        ++joins;
        if (!is_subcanonical(join(j, k))) fails.add("join not subcanonical on " + c->name());
      }
    }
  }

  std::vector<CategoryRef> pointed;
  for (const auto& c : cats) {
    if (c->terminal_object()) pointed.push_back(c);
  }
  for (const auto& c : pointed) {
    std::vector<GrothendieckTopology> js;
    for (const auto& j : all_topologies(c)) {
      if (is_subcanonical(j)) js.push_back(j);
    }
    for (const auto& d : pointed) {
      std::vector<GrothendieckTopology> ks;
      for (const auto& k : all_topologies(d)) {
        if (is_subcanonical(k) && is_local_site(k)) ks.push_back(k);
      }
      for (const auto& f : all_functors(c, d)) {
        for (const auto& j : js) {
          for (const auto& k : ks) {
            const SiteMorphismData m{f, SiteRole::Morphism, j, k};
            if (!check_site_morphism(m)) continue;
            const auto v = tc_by_local_site(m);
            ++tc_cases;
            if (v.kind == TcKind::Inconclusive) {
              fails.add("inconclusive verdict on a doubly subcanonical site morphism " +
                        describe(f));
              continue;
            }
            const bool tc = v.kind == TcKind::TerminallyConnected;
            tc_true += tc ? 1 : 0;
            if (tc != lifts_by_kan(f, k)) {
              fails.add("local-site verdict disagrees with the Kan computation on " + describe(f));
            }
          }
        }
      }
    }
  }
  return verdict(fails, std::to_string(saturations) + " saturations, " +
                            std::to_string(sheafifications) + " sheafifications, " +
                            std::to_string(joins) + " subcanonical joins, " +
                            std::to_string(tc_cases) + " site morphisms (" +
                            std::to_string(tc_true) + " terminally connected)");
}

// --- 11 ------------------------------------------------------------------------------------

Outcome criterion_oracles() {
  Failures fails;
  std::size_t n_pi0 = 0, n_comma = 0, n_global = 0, n_prohom = 0, n_fraction = 0;

  for (const auto& c : universe()) {
    if (pi0(*c).label != oracle::pi0_labels(*c)) fails.add("pi0 differs on " + c->name());
    ++n_pi0;
  }

  std::mt19937_64 rng(11);
  const auto& u = universe();
  while (n_comma < 400) {
    const auto& a = u[rng() % u.size()];
    const auto& b = u[rng() % u.size()];
    const auto& c = u[rng() % u.size()];
    auto f = random_functor(rng, a, c);
    auto g = random_functor(rng, b, c);
    if (!f || !g) continue;
    ++n_comma;
    const auto lib = comma(*f, *g);
    const auto ref = oracle::comma(*f, *g);
    std::vector<std::tuple<ObjId, ObjId, MorId>> objs;
    for (const auto& o : lib.objects) objs.emplace_back(o.a, o.b, o.h);
    if (objs != ref.objects || lib.base->num_morphisms() != ref.morphisms ||
        pi0(*lib.base).label != ref.component) {
      fails.add("comma differs for " + describe(*f) + ", " + describe(*g));
    }
  }

  for (const auto& c : u) {
    if (c->num_objects() > 2) continue;
    std::size_t per_category = 0;
    oracle::for_each_presheaf(c, std::vector<std::size_t>(c->num_objects(), 2),
                              [&](const FinPresheaf& x) {
                                if (global_elements(x) != oracle::global_elements(x)) {
                                  fails.add("global elements differ on " + c->name());
                                }
                                ++n_global;
                                return ++per_category < 200;
                              });
  }

  std::vector<ProObject> pros;
  for (const auto& fx : diagrams()) {
    pros.push_back(ProObject::make(fx.def.diagram.functor()));
    const auto& t = fx.def.diagram.target();
    for (ObjId x = 0; x < t->num_objects(); ++x) pros.push_back(ProObject::singleton(t, x));
  }
  for (const auto& x : pros) {
    for (const auto& y : pros) {
      if (!(*x.base() == *y.base())) continue;
      if (x.index()->num_objects() * y.index()->num_objects() > 16) continue;
      ++n_prohom;
      if (pro_hom(x, y).size() != oracle::pro_hom_size(x.diagram(), y.diagram())) {
        fails.add("pro_hom differs between pro-objects over " + x.base()->name());
      }
    }
  }

  for (const auto& fx : diagrams()) {
    const auto fc = localize(build_oplax_colimit(fx.def.diagram, fx.def.slices));
    const auto& cat = *fc.category;
    for (ObjId x = 0; x < cat.num_objects(); ++x) {
      for (ObjId y = 0; y < cat.num_objects(); ++y) {
        std::vector<std::set<Span>> lib;
        for (MorId m : cat.hom(x, y)) lib.emplace_back(fc.members[m].begin(), fc.members[m].end());
        std::sort(lib.begin(), lib.end());
        if (lib != oracle::fraction_classes(fc.mol, x, y)) {
          fails.add(fx.file + ": fraction hom-set differs at (" + std::to_string(x) + ", " +
                    std::to_string(y) + ")");
        }
        ++n_fraction;
      }
    }
  }
  return verdict(fails, std::to_string(n_pi0) + " pi0, " + std::to_string(n_comma) +
                            " comma, " + std::to_string(n_global) + " global-element, " +
                            std::to_string(n_prohom) + " pro-hom, " +
                            std::to_string(n_fraction) + " fraction hom-set comparisons");
}

// --- 12 ------------------------------------------------------------------------------------

Outcome criterion_determinism() {
  Failures fails;
  const std::string basic = testdata::root() + "/basic.cat";
  const std::string diag = testdata::root() + "/diagrams/arrow_sq_corner.diag";
  const std::vector<std::vector<std::string>> commands{
      {"print", basic},
      {"export", "Chain3", basic},
      {"export", "E", basic},
      {"export", "J", basic},
      {"export", "u", basic},
      {"check", "final", "v", basic},
      {"check", "final", "w", basic},
      {"check", "initial", "u", basic},
      {"check", "tc", "u", basic},
      {"check", "dfib", "u", basic},
      {"check", "dopfib", "u", basic},
      {"check", "equivalence", "u", basic},
      {"check", "eta", "w", basic},
      {"check", "lifts", "u", basic},
      {"check", "cofiltered", "Chain3", basic},
      {"check", "sheaf", "E", "J", basic},
      {"check", "subcanonical", "J", basic},
      {"check", "local", "J", basic},
      {"check", "cofinal", "v", "J", basic},
      {"check", "topology", "J", basic},
      {"factor", "comprehensive", "u", basic},
      {"lift", "u", "F", basic},
      {"transport", "phi", "F", basic},
      {"kan", "lan", "u", "E", basic},
      {"kan", "ran", "u", "E", basic},
      {"pi", "w", basic},
      {"sheafify", "E", "J", basic},
      {"saturate", "J", basic},
      {"tc", "local", "v", "T", "T", basic},
      {"proetale", "build", diag},
      {"sweep", "factor", "50"},
      {"frobnicate", basic},
  };
  std::size_t runs = 0;
  for (const auto& cmd : commands) {
    for (const std::string emit : {"", "json", "dot"}) {
      CliOptions o;
      o.command = cmd.front();
      o.args.assign(cmd.begin() + 1, cmd.end());
      o.emit = emit;
      o.seed = 5;
      if (o.command == "proetale") o.checks = {"ore", "factorization", "reindexing", "faithful"};
      const auto first = run_cli(o);
      const auto second = run_cli(o);
      runs += 2;
      if (first.output != second.output || first.exit_code != second.exit_code) {
        fails.add("output differs for '" + o.command + "' --emit " + emit);
      }
      if (first.exit_code == 0 && first.output.empty()) {
        fails.add("empty output for '" + o.command + "' --emit " + emit);
      }
    }
  }
  return verdict(fails, std::to_string(commands.size()) + " commands x 3 formats, " +
                            std::to_string(runs) + " runs byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"factorization soundness", criterion_factorization},
      {"uniqueness of the middle", criterion_uniqueness},
      {"terminal connectedness criteria agree", criterion_tc_equivalence},
      {"lifting of global elements", criterion_lifting},
      {"eta-orthogonality", criterion_eta},
      {"Ore condition and localization", criterion_ore},
      {"canonical reindexing", criterion_reindexing},
      {"pro-adjoint faithfulness", criterion_faithful},
      {"comma and cocomma stability", criterion_comma_stability},
      {"sites", criterion_sites},
      {"oracle equivalence", criterion_oracles},
      {"CLI determinism", criterion_determinism},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));

  std::cout << "universe bounds: " << bounds().max_objects << " objects, "
            << bounds().max_parallel << " parallel arrows\n";
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].first
              << ": " << r.detail << " (" << timing << ")" << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

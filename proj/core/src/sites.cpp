#include "toposfactor/sites.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "toposfactor/factorization.hpp"

namespace toposfactor {

bool Sieve::contains(MorId f) const { return std::binary_search(arrows.begin(), arrows.end(), f); }

namespace {

std::string show(const FinCategory& c, const Sieve& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.arrows.size(); ++i) {
    if (i) out += ", ";
    out += c.morphism_name(s.arrows[i]);
  }
  return out + "} on " + c.object_name(s.apex);
}

void require_same_base(const FinCategory& a, const FinCategory& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::PreconditionViolated, std::string(what) + ": base mismatch");
}

}  // namespace

Sieve generated_sieve(const FinCategory& c, ObjId apex, const std::vector<MorId>& arrows) {
  std::set<MorId> out;
  for (MorId f : arrows) {
    if (f >= c.num_morphisms() || c.target(f) != apex) {
      throw Error(ErrorCode::NotASieve,
                  "arrow does not target " + c.object_name(apex) +
                      (f < c.num_morphisms() ? ": " + c.morphism_name(f) : std::string()));
    }
    for (MorId k : c.arrows_into(c.source(f))) out.insert(c.compose(f, k));
  }
  return Sieve{apex, {out.begin(), out.end()}};
}

Sieve maximal_sieve(const FinCategory& c, ObjId apex) {
  Sieve s{apex, c.arrows_into(apex)};
  std::sort(s.arrows.begin(), s.arrows.end());
  return s;
}

Sieve pullback_sieve(const FinCategory& c, const Sieve& s, MorId h) {
  Sieve out{c.source(h), {}};
  for (MorId k : c.arrows_into(c.source(h))) {
    if (s.contains(c.compose(h, k))) out.arrows.push_back(k);
  }
  std::sort(out.arrows.begin(), out.arrows.end());
  return out;
}

bool is_sieve(const FinCategory& c, const Sieve& s) {
  if (!std::is_sorted(s.arrows.begin(), s.arrows.end())) return false;
  for (MorId f : s.arrows) {
    if (c.target(f) != s.apex) return false;
    for (MorId k : c.arrows_into(c.source(f))) {
      if (!s.contains(c.compose(f, k))) return false;
    }
  }
  return true;
}

std::vector<Sieve> all_sieves(const FinCategory& c, ObjId apex) {
  std::set<std::vector<MorId>> seen{{}};
  std::vector<std::vector<MorId>> frontier{{}};
  while (!frontier.empty()) {
    std::vector<std::vector<MorId>> next;
    for (const auto& s : frontier) {
      for (MorId f : c.arrows_into(apex)) {
        if (std::binary_search(s.begin(), s.end(), f)) continue;
        std::vector<MorId> gens = s;
        gens.push_back(f);
        Sieve g = generated_sieve(c, apex, gens);
        if (seen.insert(g.arrows).second) next.push_back(std::move(g.arrows));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Sieve> out;
  for (const auto& s : seen) out.push_back(Sieve{apex, s});
  std::stable_sort(out.begin(), out.end(), [](const Sieve& a, const Sieve& b) {
    return a.arrows.size() < b.arrows.size();
  });
  return out;
}

// --- topologies -----------------------------------------------------------------------------

GrothendieckTopology GrothendieckTopology::trusted(CategoryRef base,
                                                   std::vector<std::vector<Sieve>> covers) {
  GrothendieckTopology t;
  t.base_ = std::move(base);
  for (auto& row : covers) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  t.covers_ = std::move(covers);
  return t;
}

GrothendieckTopology GrothendieckTopology::make(CategoryRef base,
                                                std::vector<std::vector<Sieve>> covers) {
  if (covers.size() != base->num_objects()) {
    throw Error(ErrorCode::NotATopology, "one list of covers per object is required");
  }
  for (ObjId c = 0; c < covers.size(); ++c) {
    for (auto& s : covers[c]) {
      std::sort(s.arrows.begin(), s.arrows.end());
      if (s.apex != c || !is_sieve(*base, s)) {
        throw Error(ErrorCode::NotASieve, "not a sieve on " + base->object_name(c));
      }
    }
  }
  GrothendieckTopology t = trusted(std::move(base), std::move(covers));
  if (Check ax = t.check_axioms(); !ax) throw Error(ErrorCode::NotATopology, ax.certificate);
  return t;
}

bool GrothendieckTopology::is_cover(const Sieve& s) const {
  const auto& row = covers_[s.apex];
  return std::binary_search(row.begin(), row.end(), s);
}

Sieve GrothendieckTopology::smallest_cover(ObjId c) const {
  Sieve out = maximal_sieve(*base_, c);
  for (const auto& s : covers_[c]) {
    std::vector<MorId> meet;
    std::set_intersection(out.arrows.begin(), out.arrows.end(), s.arrows.begin(), s.arrows.end(),
                          std::back_inserter(meet));
    out.arrows = std::move(meet);
  }
  return out;
}

Check GrothendieckTopology::check_axioms() const {
  const FinCategory& c = *base_;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    if (!is_cover(maximal_sieve(c, o))) {
      return Check::fail("maximal sieve on " + c.object_name(o) + " does not cover");
    }
  }
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (const auto& s : covers_[o]) {
      for (MorId h : c.arrows_into(o)) {
        if (!is_cover(pullback_sieve(c, s, h))) {
          return Check::fail("pullback of " + show(c, s) + " along " + c.morphism_name(h) +
                             " does not cover");
        }
      }
    }
  }
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (const auto& r : all_sieves(c, o)) {
      if (is_cover(r)) continue;
      for (const auto& s : covers_[o]) {
        const bool local = std::all_of(s.arrows.begin(), s.arrows.end(), [&](MorId h) {
          return is_cover(pullback_sieve(c, r, h));
        });
        if (local) {
          return Check::fail("transitivity: " + show(c, r) + " is locally covering along " +
                             show(c, s) + " but does not cover");
        }
      }
    }
  }
  return Check::ok();
}

GrothendieckTopology saturate(CategoryRef base, const CoverageBasis& basis) {
  const FinCategory& c = *base;
  if (basis.size() > c.num_objects()) {
    throw Error(ErrorCode::NotASieve, "basis lists more objects than the category has");
  }
  std::vector<std::set<Sieve>> covers(c.num_objects());
  std::vector<std::vector<Sieve>> sieves(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    covers[o].insert(maximal_sieve(c, o));
    sieves[o] = all_sieves(c, o);
    if (o < basis.size()) {
      for (const auto& family : basis[o]) covers[o].insert(generated_sieve(c, o, family));
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (ObjId o = 0; o < c.num_objects(); ++o) {
      const std::vector<Sieve> current(covers[o].begin(), covers[o].end());
      for (const auto& s : current) {
        for (MorId h : c.arrows_into(o)) {
          changed |= covers[c.source(h)].insert(pullback_sieve(c, s, h)).second;
        }
      }
    }
    for (ObjId o = 0; o < c.num_objects(); ++o) {
      for (const auto& r : sieves[o]) {
        if (covers[o].count(r)) continue;
        for (const auto& s : covers[o]) {
          const bool local = std::all_of(s.arrows.begin(), s.arrows.end(), [&](MorId h) {
            return covers[c.source(h)].count(pullback_sieve(c, r, h)) > 0;
          });
          if (local) {
            covers[o].insert(r);
            changed = true;
            break;
          }
        }
      }
    }
  }
  std::vector<std::vector<Sieve>> out;
  for (auto& row : covers) out.emplace_back(row.begin(), row.end());
  return GrothendieckTopology::trusted(std::move(base), std::move(out));
}

GrothendieckTopology trivial_topology(CategoryRef base) { return saturate(std::move(base), {}); }

GrothendieckTopology join(const GrothendieckTopology& j, const GrothendieckTopology& k) {
  require_same_base(*j.base(), *k.base(), "join");
  CoverageBasis basis(j.base()->num_objects());
  for (ObjId o = 0; o < basis.size(); ++o) {
    for (const auto* t : {&j, &k}) {
      for (const auto& s : t->covers(o)) basis[o].push_back(s.arrows);
    }
  }
  return saturate(j.base(), basis);
}

bool finer_or_equal(const GrothendieckTopology& j, const GrothendieckTopology& k) {
  for (ObjId o = 0; o < k.base()->num_objects(); ++o) {
    for (const auto& s : k.covers(o)) {
      if (!j.is_cover(s)) return false;
    }
  }
  return true;
}

std::vector<GrothendieckTopology> all_topologies(CategoryRef base) {
  const FinCategory& c = *base;
  std::set<std::vector<std::vector<Sieve>>> seen;
  std::vector<GrothendieckTopology> generators;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (const auto& s : all_sieves(c, o)) {
      CoverageBasis basis(c.num_objects());
      basis[o].push_back(s.arrows);
      generators.push_back(saturate(base, basis));
    }
  }
  std::vector<GrothendieckTopology> all;
  auto covers_of = [&](const GrothendieckTopology& t) {
    std::vector<std::vector<Sieve>> rows;
    for (ObjId o = 0; o < c.num_objects(); ++o) rows.push_back(t.covers(o));
    return rows;
  };
  auto add = [&](const GrothendieckTopology& t) {
    if (seen.insert(covers_of(t)).second) {
      all.push_back(t);
      return true;
    }
    return false;
  };
  add(trivial_topology(base));
  for (const auto& g : generators) add(g);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& g : generators) add(join(all[i], g));
  }
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    return covers_of(a) < covers_of(b);
  });
  return all;
}

// --- sheaves --------------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> matching_families(const FinPresheaf& x, const Sieve& s) {
  const FinCategory& c = *x.base();
  const std::size_t n = s.arrows.size();
  std::map<MorId, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position[s.arrows[i]] = i;
  // constraints[i]: (a, k, b) with X(k) x_a = x_b and max(a, b) = i.
  std::vector<std::vector<std::tuple<std::size_t, MorId, std::size_t>>> constraints(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (MorId k : c.arrows_into(c.source(s.arrows[a]))) {
      const std::size_t b = position.at(c.compose(s.arrows[a], k));
      constraints[std::max(a, b)].emplace_back(a, k, b);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> family(n);
  auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(family);
      return;
    }
    for (std::size_t v = 0; v < x.size(c.source(s.arrows[i])); ++v) {
      family[i] = v;
      bool ok = true;
      for (const auto& [a, k, b] : constraints[i]) {
        if (x.act(k, family[a]) != family[b]) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, i + 1);
    }
  };
  search(search, 0);
  return out;
}

Check is_sheaf(const FinPresheaf& x, const GrothendieckTopology& j) {
  require_same_base(*x.base(), *j.base(), "is_sheaf");
  const FinCategory& c = *x.base();
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (const auto& s : j.covers(o)) {
      for (const auto& fam : matching_families(x, s)) {
        std::size_t amalgamations = 0;
        for (std::size_t v = 0; v < x.size(o); ++v) {
          bool ok = true;
          for (std::size_t i = 0; i < s.arrows.size() && ok; ++i) {
            ok = x.act(s.arrows[i], v) == fam[i];
          }
          amalgamations += ok;
        }
        if (amalgamations != 1) {
          return Check::fail("a matching family for " + show(c, s) + " has " +
                             std::to_string(amalgamations) + " amalgamations");
        }
      }
    }
  }
  return Check::ok();
}

bool is_subcanonical(const GrothendieckTopology& j) {
  for (ObjId o = 0; o < j.base()->num_objects(); ++o) {
    if (!is_sheaf(representable(j.base(), o), j)) return false;
  }
  return true;
}

Sheafification plus_construction(const FinPresheaf& x, const GrothendieckTopology& j) {
  require_same_base(*x.base(), *j.base(), "plus_construction");
  const FinCategory& c = *x.base();
  const std::size_t n = c.num_objects();
  std::vector<Sieve> smallest(n);
  std::vector<std::vector<std::vector<std::size_t>>> families(n);
  std::vector<std::vector<std::string>> names(n);
  for (ObjId o = 0; o < n; ++o) {
    smallest[o] = j.smallest_cover(o);
    families[o] = matching_families(x, smallest[o]);
    for (const auto& fam : families[o]) {
      std::string name = "[";
      for (std::size_t i = 0; i < fam.size(); ++i) {
        if (i) name += ",";
        name += x.element_name(c.source(smallest[o].arrows[i]), fam[i]);
      }
      names[o].push_back(name + "]");
    }
  }
  auto index_in = [&](ObjId o, const std::vector<std::size_t>& fam) {
    auto it = std::lower_bound(families[o].begin(), families[o].end(), fam);
    if (it == families[o].end() || *it != fam) {
      throw InvariantViolation("plus construction: restriction is not a matching family");
    }
    return static_cast<std::size_t>(it - families[o].begin());
  };
  std::vector<std::vector<std::size_t>> actions(c.num_morphisms());
  for (MorId h = 0; h < c.num_morphisms(); ++h) {
    const ObjId from = c.target(h);
    const ObjId to = c.source(h);
    const Sieve& s = smallest[from];
    for (const auto& fam : families[from]) {
      std::vector<std::size_t> restricted;
      for (MorId g : smallest[to].arrows) {
        const MorId hg = c.compose(h, g);
        auto pos = std::lower_bound(s.arrows.begin(), s.arrows.end(), hg) - s.arrows.begin();
        restricted.push_back(fam[pos]);
      }
      actions[h].push_back(index_in(to, restricted));
    }
  }
  Sheafification out;
  out.sheaf = FinPresheaf::trusted(x.base(), std::move(names), std::move(actions), x.name() + "+");
  std::vector<std::vector<std::size_t>> unit(n);
  for (ObjId o = 0; o < n; ++o) {
    for (std::size_t v = 0; v < x.size(o); ++v) {
      std::vector<std::size_t> fam;
      for (MorId f : smallest[o].arrows) fam.push_back(x.act(f, v));
      unit[o].push_back(index_in(o, fam));
    }
  }
  out.unit = PresheafMap::trusted(x, out.sheaf, std::move(unit));
  return out;
}

Sheafification sheafify(const FinPresheaf& x, const GrothendieckTopology& j) {
  const Sheafification once = plus_construction(x, j);
  const Sheafification twice = plus_construction(once.sheaf, j);
  Sheafification out;
  out.sheaf = twice.sheaf.renamed("a" + x.name());
  out.unit = PresheafMap::trusted(x, out.sheaf, compose(twice.unit, once.unit).components());
  if (Check s = is_sheaf(out.sheaf, j); !s) {
    throw InvariantViolation("sheafification is not a sheaf: " + s.certificate);
  }
  if (Check f = out.sheaf.check_functoriality(); !f) {
    throw InvariantViolation("sheafification is not functorial: " + f.certificate);
  }
  if (Check nat = out.unit.check_naturality(); !nat) {
    throw InvariantViolation("sheafification unit is not natural: " + nat.certificate);
  }
  return out;
}

Check sheafify_universal(const Sheafification& s, const GrothendieckTopology& j,
                         const std::vector<FinPresheaf>& test_sheaves) {
  for (const auto& f : test_sheaves) {
    if (!is_sheaf(f, j)) continue;
    const auto candidates = all_maps(s.sheaf, f);
    for (const auto& m : all_maps(s.unit.source(), f)) {
      std::size_t factorizations = 0;
      for (const auto& c : candidates) factorizations += compose(c, s.unit) == m;
      if (factorizations != 1) {
        return Check::fail("a map into " + f.name() + " has " + std::to_string(factorizations) +
                           " factorizations through the unit");
      }
    }
  }
  return Check::ok();
}

// --- site properties ------------------------------------------------------------------------

bool is_local_site(const GrothendieckTopology& j) {
  const auto t = j.base()->terminal_object();
  if (!t) throw Error(ErrorCode::NoTerminalObject, j.base()->name() + " has no terminal object");
  return j.covers(*t).size() == 1;
}

Check is_J_cofinal(const FinFunctor& f, const GrothendieckTopology& j) {
  const FinCategory& c = *f.codomain();
  const FinCategory& a = *f.domain();
  require_same_base(c, *j.base(), "is_J_cofinal");
  std::vector<CommaComponents> comps;
  for (ObjId o = 0; o < c.num_objects(); ++o) comps.push_back(coslice_components(o, f));
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    Sieve reach{o, {}};
    for (MorId g : c.arrows_into(o)) {
      if (!comps[c.source(g)].objects.empty()) reach.arrows.push_back(g);
    }
    std::sort(reach.arrows.begin(), reach.arrows.end());
    if (!j.is_cover(reach)) {
      return Check::fail("no cover of " + c.object_name(o) + " factors through the image");
    }
  }
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    const auto& objs = comps[o].objects;
    for (std::size_t p = 0; p < objs.size(); ++p) {
      for (std::size_t q = p + 1; q < objs.size(); ++q) {
        const auto [a1, x] = objs[p];
        const auto [a2, y] = objs[q];
        Sieve agree{o, {}};
        for (MorId g : c.arrows_into(o)) {
          const auto& cc = comps[c.source(g)];
          if (cc.component_of(a1, c.compose(x, g)) == cc.component_of(a2, c.compose(y, g))) {
            agree.arrows.push_back(g);
          }
        }
        std::sort(agree.arrows.begin(), agree.arrows.end());
        if (!j.is_cover(agree)) {
          return Check::fail("span " + c.morphism_name(x) + " : " + c.object_name(o) + " -> " +
                             a.object_name(a1) + ", " + c.morphism_name(y) + " : " +
                             c.object_name(o) + " -> " + a.object_name(a2) +
                             " is not connected locally");
        }
      }
    }
  }
  return Check::ok();
}

Check lifts_global_elements(const FinFunctor& f) {
  const FinCategory& c = *f.domain();
  const FinCategory& d = *f.codomain();
  const auto tc = c.terminal_object();
  const auto td = d.terminal_object();
  if (!tc) throw Error(ErrorCode::NoTerminalObject, c.name() + " has no terminal object");
  if (!td) throw Error(ErrorCode::NoTerminalObject, d.name() + " has no terminal object");
  const auto& candidates = d.hom(*td, f.on_object(*tc));
  if (candidates.empty()) {
    return Check::fail("Hom(" + d.object_name(*td) + ", " + d.object_name(f.on_object(*tc)) +
                       ") is empty");
  }
  std::string why;
  for (MorId e : candidates) {
    why.clear();
    for (ObjId o = 0; o < c.num_objects() && why.empty(); ++o) {
      std::set<MorId> image;
      for (MorId k : c.hom(*tc, o)) image.insert(d.compose(f.on_morphism(k), e));
      if (image.size() != c.hom(*tc, o).size() ||
          image.size() != d.hom(*td, f.on_object(o)).size()) {
        why = "global elements of " + c.object_name(o) + " (" +
              std::to_string(c.hom(*tc, o).size()) + ") do not match those of " +
              d.object_name(f.on_object(o)) + " (" +
              std::to_string(d.hom(*td, f.on_object(o)).size()) + ")";
      }
    }
    if (why.empty()) return Check::ok();
  }
  return Check::fail(why);
}

Check check_site_morphism(const SiteMorphismData& m) {
  const FinFunctor& f = m.f;
  const FinCategory& a = *f.domain();
  const FinCategory& c = *f.codomain();
  require_same_base(a, *m.domain_topology.base(), "site morphism domain");
  require_same_base(c, *m.codomain_topology.base(), "site morphism codomain");
  if (m.role == SiteRole::Comorphism) {
    for (ObjId o = 0; o < a.num_objects(); ++o) {
      const Sieve small = m.domain_topology.smallest_cover(o);
      for (const auto& r : m.codomain_topology.covers(f.on_object(o))) {
        for (MorId g : small.arrows) {
          if (!r.contains(f.on_morphism(g))) {
            return Check::fail("cover " + show(c, r) + " has no lifted cover on " +
                               a.object_name(o));
          }
        }
      }
    }
    return Check::ok();
  }
  for (ObjId o = 0; o < a.num_objects(); ++o) {
    for (const auto& s : m.domain_topology.covers(o)) {
      std::vector<MorId> image;
      for (MorId g : s.arrows) image.push_back(f.on_morphism(g));
      if (!m.codomain_topology.is_cover(generated_sieve(c, f.on_object(o), image))) {
        return Check::fail("image of " + show(a, s) + " does not cover");
      }
    }
  }
  if (const auto t = a.terminal_object()) {
    for (ObjId x = 0; x < c.num_objects(); ++x) {
      if (c.hom(x, f.on_object(*t)).size() != 1) {
        return Check::fail("terminal object " + a.object_name(*t) + " is not preserved");
      }
    }
  }
  for (ObjId x = 0; x < a.num_objects(); ++x) {
    for (ObjId y = x; y < a.num_objects(); ++y) {
      if (const auto p = find_product(a, x, y)) {
        if (!is_product(c, f.on_object(x), f.on_object(y), f.on_morphism(p->left),
                        f.on_morphism(p->right))) {
          return Check::fail("product of " + a.object_name(x) + ", " + a.object_name(y) +
                             " is not preserved");
        }
      }
    }
  }
  for (MorId g = 0; g < a.num_morphisms(); ++g) {
    for (MorId h = g; h < a.num_morphisms(); ++h) {
      if (a.target(g) != a.target(h)) continue;
      if (const auto p = find_pullback(a, g, h)) {
        if (!is_pullback(c, f.on_morphism(g), f.on_morphism(h), f.on_morphism(p->left),
                         f.on_morphism(p->right))) {
          return Check::fail("pullback of " + a.morphism_name(g) + ", " + a.morphism_name(h) +
                             " is not preserved");
        }
      }
    }
  }
  return Check::ok();
}

std::string to_string(TcKind k) {
  switch (k) {
    case TcKind::TerminallyConnected: return "TerminallyConnected";
    case TcKind::NotTerminallyConnected: return "NotTerminallyConnected";
    case TcKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

TcVerdict tc_by_local_site(const SiteMorphismData& m) {
  if (!is_local_site(m.codomain_topology)) {
    throw Error(ErrorCode::NotLocalSite, m.f.codomain()->name() + " is not a local site");
  }
  if (Check lifts = lifts_global_elements(m.f)) return {TcKind::TerminallyConnected, {}};
  else if (is_subcanonical(m.domain_topology) && is_subcanonical(m.codomain_topology)) {
    return {TcKind::NotTerminallyConnected, lifts.certificate};
  } else {
    return {TcKind::Inconclusive,
            "global elements do not lift and a site is not subcanonical: " + lifts.certificate};
  }
}

TcVerdict comorphism_tc(const SiteMorphismData& m) {
  SiteMorphismData as_comorphism = m;
  as_comorphism.role = SiteRole::Comorphism;
  if (Check c = check_site_morphism(as_comorphism); !c) {
    throw Error(ErrorCode::NotComorphism, c.certificate);
  }
  const Check cofinal = is_J_cofinal(m.f, m.codomain_topology);
  if (m.codomain_topology == trivial_topology(m.f.codomain())) {
    if (cofinal.holds != is_terminally_connected_essential(m.f).holds) {
      throw InvariantViolation("cofinality and the essential criterion disagree");
    }
  }
  return {cofinal ? TcKind::TerminallyConnected : TcKind::NotTerminallyConnected,
          cofinal.certificate};
}

}  // namespace toposfactor

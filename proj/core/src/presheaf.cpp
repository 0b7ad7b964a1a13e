#include "toposfactor/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "partition.hpp"

namespace toposfactor {

// --- FinPresheaf ---------------------------------------------------------------

FinPresheaf FinPresheaf::trusted(CategoryRef base, std::vector<std::vector<std::string>> elements,
                                 std::vector<std::vector<std::size_t>> actions,
                                 std::string name) {
  FinPresheaf x;
  x.base_ = std::move(base);
  x.elements_ = std::move(elements);
  x.actions_ = std::move(actions);
  x.name_ = std::move(name);
  return x;
}

FinPresheaf FinPresheaf::make(CategoryRef base, std::vector<std::vector<std::string>> elements,
                              std::vector<std::vector<std::size_t>> actions, std::string name) {
  FinPresheaf x = trusted(std::move(base), std::move(elements), std::move(actions),
                          std::move(name));
  if (Check c = x.check_functoriality(); !c) throw Error(ErrorCode::NotFunctorial, c.certificate);
  return x;
}

std::optional<std::size_t> FinPresheaf::find_element(ObjId c, std::string_view name) const {
  const auto& els = elements_[c];
  auto it = std::find(els.begin(), els.end(), name);
  if (it == els.end()) return std::nullopt;
  return static_cast<std::size_t>(it - els.begin());
}

std::size_t FinPresheaf::total_size() const {
  std::size_t n = 0;
  for (const auto& e : elements_) n += e.size();
  return n;
}

Check FinPresheaf::check_functoriality() const {
  const FinCategory& c = *base_;
  if (elements_.size() != c.num_objects() || actions_.size() != c.num_morphisms()) {
    return Check::fail("presheaf '" + name_ + "' does not match the size of its base");
  }
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const auto& a = actions_[g];
    if (a.size() != size(c.target(g))) {
      return Check::fail("action of '" + c.morphism_name(g) + "' has the wrong domain");
    }
    for (std::size_t y : a) {
      if (y >= size(c.source(g))) {
        return Check::fail("action of '" + c.morphism_name(g) + "' leaves its codomain");
      }
    }
  }
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    const auto& a = actions_[c.identity(o)];
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (a[x] != x) {
        return Check::fail("identity of '" + c.object_name(o) + "' acts nontrivially on '" +
                           elements_[o][x] + "'");
      }
    }
  }
  for (MorId h = 0; h < c.num_morphisms(); ++h) {
    for (MorId g : c.arrows_out_of(c.target(h))) {
      const MorId gh = c.compose(g, h);
      for (std::size_t x = 0; x < size(c.target(g)); ++x) {
        if (actions_[gh][x] != actions_[h][actions_[g][x]]) {
          return Check::fail("X(" + c.morphism_name(g) + " . " + c.morphism_name(h) +
                             ") != X(" + c.morphism_name(h) + ") X(" + c.morphism_name(g) +
                             ") at '" + elements_[c.target(g)][x] + "'");
        }
      }
    }
  }
  return Check::ok();
}

FinPresheaf FinPresheaf::renamed(std::string name) const {
  FinPresheaf x = *this;
  x.name_ = std::move(name);
  return x;
}

// --- PresheafMap ---------------------------------------------------------------

PresheafMap PresheafMap::trusted(FinPresheaf source, FinPresheaf target,
                                 std::vector<std::vector<std::size_t>> components) {
  PresheafMap m;
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  m.components_ = std::move(components);
  return m;
}

PresheafMap PresheafMap::make(FinPresheaf source, FinPresheaf target,
                              std::vector<std::vector<std::size_t>> components) {
  PresheafMap m = trusted(std::move(source), std::move(target), std::move(components));
  if (Check c = m.check_naturality(); !c) throw Error(ErrorCode::NotNatural, c.certificate);
  return m;
}

PresheafMap PresheafMap::identity(const FinPresheaf& x) {
  std::vector<std::vector<std::size_t>> comps(x.base()->num_objects());
  for (ObjId c = 0; c < comps.size(); ++c) {
    comps[c].resize(x.size(c));
    std::iota(comps[c].begin(), comps[c].end(), std::size_t{0});
  }
  return trusted(x, x, std::move(comps));
}

Check PresheafMap::check_naturality() const {
  const FinCategory& c = *source_.base();
  if (components_.size() != c.num_objects()) {
    return Check::fail("map has the wrong number of components");
  }
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    if (components_[o].size() != source_.size(o)) {
      return Check::fail("component at '" + c.object_name(o) + "' has the wrong domain");
    }
    for (std::size_t y : components_[o]) {
      if (y >= target_.size(o)) {
        return Check::fail("component at '" + c.object_name(o) + "' leaves its codomain");
      }
    }
  }
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const ObjId s = c.source(g);
    const ObjId t = c.target(g);
    for (std::size_t x = 0; x < source_.size(t); ++x) {
      if (components_[s][source_.act(g, x)] != target_.act(g, components_[t][x])) {
        return Check::fail("naturality fails at '" + c.morphism_name(g) + "' on '" +
                           source_.element_name(t, x) + "'");
      }
    }
  }
  return Check::ok();
}

bool PresheafMap::is_monomorphism() const {
  for (ObjId c = 0; c < components_.size(); ++c) {
    std::vector<bool> seen(target_.size(c), false);
    for (std::size_t y : components_[c]) {
      if (seen[y]) return false;
      seen[y] = true;
    }
  }
  return true;
}

bool PresheafMap::is_isomorphism() const {
  for (ObjId c = 0; c < components_.size(); ++c) {
    if (source_.size(c) != target_.size(c)) return false;
  }
  return is_monomorphism();
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  std::vector<std::vector<std::size_t>> comps(f.components().size());
  for (ObjId c = 0; c < comps.size(); ++c) {
    for (std::size_t x : f.components()[c]) comps[c].push_back(g.at(c, x));
  }
  return PresheafMap::trusted(f.source(), g.target(), std::move(comps));
}

// --- basic presheaves ----------------------------------------------------------

FinPresheaf terminal_presheaf(CategoryRef c) {
  std::vector<std::vector<std::string>> els(c->num_objects(), {"*"});
  std::vector<std::vector<std::size_t>> acts(c->num_morphisms(), {0});
  return FinPresheaf::trusted(std::move(c), std::move(els), std::move(acts), "1");
}

FinPresheaf initial_presheaf(CategoryRef c) {
  std::vector<std::vector<std::string>> els(c->num_objects());
  std::vector<std::vector<std::size_t>> acts(c->num_morphisms());
  return FinPresheaf::trusted(std::move(c), std::move(els), std::move(acts), "0");
}

FinPresheaf representable(CategoryRef c, ObjId obj) {
  const FinCategory& cat = *c;
  std::vector<std::size_t> pos(cat.num_morphisms(), npos);
  std::vector<std::vector<std::string>> els(cat.num_objects());
  for (ObjId d = 0; d < cat.num_objects(); ++d) {
    const auto& h = cat.hom(d, obj);
    for (std::size_t i = 0; i < h.size(); ++i) {
      pos[h[i]] = i;
      els[d].push_back(cat.morphism_name(h[i]));
    }
  }
  std::vector<std::vector<std::size_t>> acts(cat.num_morphisms());
  for (MorId g = 0; g < cat.num_morphisms(); ++g) {
    for (MorId h : cat.hom(cat.target(g), obj)) acts[g].push_back(pos[cat.compose(h, g)]);
  }
  std::string name = "y(" + cat.object_name(obj) + ")";
  return FinPresheaf::trusted(std::move(c), std::move(els), std::move(acts), std::move(name));
}

FinPresheaf constant_presheaf(CategoryRef c, std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    ids.push_back(i);
  }
  std::vector<std::vector<std::string>> els(c->num_objects(), names);
  std::vector<std::vector<std::size_t>> acts(c->num_morphisms(), ids);
  return FinPresheaf::trusted(std::move(c), std::move(els), std::move(acts),
                              "const" + std::to_string(n));
}

PresheafMap terminal_map(const FinPresheaf& x) {
  std::vector<std::vector<std::size_t>> comps(x.base()->num_objects());
  for (ObjId c = 0; c < comps.size(); ++c) comps[c].assign(x.size(c), 0);
  return PresheafMap::trusted(x, terminal_presheaf(x.base()), std::move(comps));
}

PresheafMap element_as_map(const FinPresheaf& x, const GlobalElement& a) {
  std::vector<std::vector<std::size_t>> comps(x.base()->num_objects());
  for (ObjId c = 0; c < comps.size(); ++c) comps[c] = {a.family[c]};
  return PresheafMap::trusted(terminal_presheaf(x.base()), x, std::move(comps));
}

// --- global elements and maps ----------------------------------------------------

bool is_global_element(const FinPresheaf& x, const GlobalElement& a) {
  const FinCategory& c = *x.base();
  if (a.family.size() != c.num_objects()) return false;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    if (a.family[o] >= x.size(o)) return false;
  }
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (x.act(g, a.family[c.target(g)]) != a.family[c.source(g)]) return false;
  }
  return true;
}

std::vector<GlobalElement> global_elements(const FinPresheaf& x) {
  const FinCategory& c = *x.base();
  const std::size_t n = c.num_objects();
  // checks[o] = morphisms whose endpoints are both <= o with max endpoint o.
  std::vector<std::vector<MorId>> checks(n);
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    checks[std::max(c.source(g), c.target(g))].push_back(g);
  }
  std::vector<GlobalElement> out;
  GlobalElement cur{std::vector<std::size_t>(n, 0)};
  std::function<void(ObjId)> go = [&](ObjId o) {
    if (o == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t v = 0; v < x.size(o); ++v) {
      cur.family[o] = v;
      bool ok = true;
      for (MorId g : checks[o]) {
        if (x.act(g, cur.family[c.target(g)]) != cur.family[c.source(g)]) {
          ok = false;
          break;
        }
      }
      if (ok) go(o + 1);
    }
  };
  go(0);
  return out;
}

namespace {

// Backtracking search for natural transformations X -> Y. Variables are the
// elements (c, x) in order; each naturality constraint is checked as soon as
// both of its variables are assigned. Stops early when `visit` returns false.
void search_maps(const FinPresheaf& x, const FinPresheaf& y, bool bijective,
                 const std::function<bool(const std::vector<std::vector<std::size_t>>&)>& visit) {
  const FinCategory& c = *x.base();
  const std::size_t n = c.num_objects();
  std::vector<std::size_t> offset(n + 1, 0);
  for (ObjId o = 0; o < n; ++o) offset[o + 1] = offset[o] + x.size(o);
  const std::size_t vars = offset[n];
  std::vector<std::pair<ObjId, std::size_t>> var_at(vars);
  for (ObjId o = 0; o < n; ++o) {
    for (std::size_t e = 0; e < x.size(o); ++e) var_at[offset[o] + e] = {o, e};
  }
  struct Constraint {
    MorId g;
    std::size_t hi;  // variable (target g, x)
    std::size_t lo;  // variable (source g, X(g)x)
  };
  std::vector<std::vector<Constraint>> checks(vars);
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    for (std::size_t e = 0; e < x.size(c.target(g)); ++e) {
      Constraint k{g, offset[c.target(g)] + e, offset[c.source(g)] + x.act(g, e)};
      checks[std::max(k.hi, k.lo)].push_back(k);
    }
  }
  std::vector<std::vector<std::size_t>> comps(n);
  for (ObjId o = 0; o < n; ++o) comps[o].assign(x.size(o), 0);
  std::vector<std::vector<bool>> used(n);
  for (ObjId o = 0; o < n; ++o) used[o].assign(y.size(o), false);
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t v) {
    if (stop) return;
    if (v == vars) {
      if (!visit(comps)) stop = true;
      return;
    }
    const auto [o, e] = var_at[v];
    for (std::size_t img = 0; img < y.size(o) && !stop; ++img) {
      if (bijective && used[o][img]) continue;
      comps[o][e] = img;
      bool ok = true;
      for (const auto& k : checks[v]) {
        const auto [ho, he] = var_at[k.hi];
        const auto [lo, le] = var_at[k.lo];
        if (comps[lo][le] != y.act(k.g, comps[ho][he])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (bijective) used[o][img] = true;
      go(v + 1);
      if (bijective) used[o][img] = false;
    }
  };
  go(0);
}

}  // namespace

std::vector<PresheafMap> all_maps(const FinPresheaf& x, const FinPresheaf& y) {
  std::vector<PresheafMap> out;
  search_maps(x, y, false, [&](const auto& comps) {
    out.push_back(PresheafMap::trusted(x, y, comps));
    return true;
  });
  return out;
}

std::optional<PresheafMap> find_isomorphism(const FinPresheaf& x, const FinPresheaf& y) {
  if (x.base()->num_objects() != y.base()->num_objects()) return std::nullopt;
  for (ObjId c = 0; c < x.base()->num_objects(); ++c) {
    if (x.size(c) != y.size(c)) return std::nullopt;
  }
  std::optional<PresheafMap> found;
  search_maps(x, y, true, [&](const auto& comps) {
    found = PresheafMap::trusted(x, y, comps);
    return false;
  });
  return found;
}

bool isomorphic(const FinPresheaf& x, const FinPresheaf& y) {
  return find_isomorphism(x, y).has_value();
}

// --- pointwise (co)limits --------------------------------------------------------

namespace {

void check_diagram(const PresheafDiagram& d) {
  if (d.nodes.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "presheaf diagram has no nodes");
  }
  const auto& base = d.nodes.front().base();
  for (const auto& n : d.nodes) {
    if (!(*n.base() == *base)) {
      throw Error(ErrorCode::PreconditionViolated, "presheaf diagram mixes base categories");
    }
  }
  for (const auto& e : d.edges) {
    if (e.from >= d.nodes.size() || e.to >= d.nodes.size()) {
      throw Error(ErrorCode::PreconditionViolated, "presheaf diagram edge out of range");
    }
  }
}

}  // namespace

Cone presheaf_limit(const PresheafDiagram& d) {
  check_diagram(d);
  const CategoryRef& base = d.nodes.front().base();
  const FinCategory& c = *base;
  const std::size_t k = d.nodes.size();
  // tuples[o] = compatible tuples at object o, lexicographic.
  std::vector<std::vector<std::vector<std::size_t>>> tuples(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    std::vector<std::size_t> cur(k, 0);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == k) {
        tuples[o].push_back(cur);
        return;
      }
      for (std::size_t v = 0; v < d.nodes[i].size(o); ++v) {
        cur[i] = v;
        bool ok = true;
        for (const auto& e : d.edges) {
          if (std::max(e.from, e.to) != i) continue;
          if (e.map.at(o, cur[e.from]) != cur[e.to]) {
            ok = false;
            break;
          }
        }
        if (ok) go(i + 1);
      }
    };
    go(0);
  }
  std::vector<std::vector<std::string>> els(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (const auto& t : tuples[o]) {
      std::string name = "(";
      for (std::size_t i = 0; i < k; ++i) {
        if (i) name += ",";
        name += d.nodes[i].element_name(o, t[i]);
      }
      els[o].push_back(name + ")");
    }
  }
  std::vector<std::vector<std::size_t>> acts(c.num_morphisms());
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const auto& src = tuples[c.source(g)];
    for (const auto& t : tuples[c.target(g)]) {
      std::vector<std::size_t> image(k);
      for (std::size_t i = 0; i < k; ++i) image[i] = d.nodes[i].act(g, t[i]);
      auto it = std::lower_bound(src.begin(), src.end(), image);
      acts[g].push_back(static_cast<std::size_t>(it - src.begin()));
    }
  }
  Cone cone;
  cone.apex = FinPresheaf::trusted(base, std::move(els), std::move(acts), "lim");
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<std::size_t>> comps(c.num_objects());
    for (ObjId o = 0; o < c.num_objects(); ++o) {
      for (const auto& t : tuples[o]) comps[o].push_back(t[i]);
    }
    cone.legs.push_back(PresheafMap::trusted(cone.apex, d.nodes[i], std::move(comps)));
  }
  return cone;
}

Cone presheaf_colimit(const PresheafDiagram& d) {
  check_diagram(d);
  const CategoryRef& base = d.nodes.front().base();
  const FinCategory& c = *base;
  const std::size_t k = d.nodes.size();
  std::vector<std::vector<std::size_t>> label(c.num_objects());
  std::vector<std::vector<std::size_t>> offset(c.num_objects(), std::vector<std::size_t>(k + 1));
  std::vector<std::vector<std::string>> els(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (std::size_t i = 0; i < k; ++i) offset[o][i + 1] = offset[o][i] + d.nodes[i].size(o);
    detail::Partition p(offset[o][k]);
    for (const auto& e : d.edges) {
      for (std::size_t x = 0; x < d.nodes[e.from].size(o); ++x) {
        p.unite(offset[o][e.from] + x, offset[o][e.to] + e.map.at(o, x));
      }
    }
    label[o] = p.labels();
    els[o].resize(p.num_classes());
    std::vector<bool> named(p.num_classes(), false);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t x = 0; x < d.nodes[i].size(o); ++x) {
        const std::size_t l = label[o][offset[o][i] + x];
        if (named[l]) continue;
        named[l] = true;
        els[o][l] = k == 1 ? d.nodes[i].element_name(o, x)
                           : std::to_string(i) + "." + d.nodes[i].element_name(o, x);
      }
    }
  }
  std::vector<std::vector<std::size_t>> acts(c.num_morphisms());
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const ObjId s = c.source(g);
    const ObjId t = c.target(g);
    acts[g].assign(els[t].size(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t x = 0; x < d.nodes[i].size(t); ++x) {
        acts[g][label[t][offset[t][i] + x]] = label[s][offset[s][i] + d.nodes[i].act(g, x)];
      }
    }
  }
  Cone cone;
  cone.apex = FinPresheaf::trusted(base, std::move(els), std::move(acts), "colim");
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<std::size_t>> comps(c.num_objects());
    for (ObjId o = 0; o < c.num_objects(); ++o) {
      for (std::size_t x = 0; x < d.nodes[i].size(o); ++x) {
        comps[o].push_back(label[o][offset[o][i] + x]);
      }
    }
    cone.legs.push_back(PresheafMap::trusted(d.nodes[i], cone.apex, std::move(comps)));
  }
  return cone;
}

PresheafMap factor_through_limit(const Cone& limit, const FinPresheaf& source,
                                 const std::vector<PresheafMap>& legs) {
  const FinCategory& c = *source.base();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t e = 0; e < limit.apex.size(o); ++e) {
      std::vector<std::size_t> t;
      for (const auto& leg : limit.legs) t.push_back(leg.at(o, e));
      index.emplace(std::move(t), e);
    }
    for (std::size_t x = 0; x < source.size(o); ++x) {
      std::vector<std::size_t> t;
      for (const auto& leg : legs) t.push_back(leg.at(o, x));
      auto it = index.find(t);
      if (it == index.end()) {
        throw Error(ErrorCode::PreconditionViolated,
                    "maps do not form a cone over the limit diagram at '" + c.object_name(o) + "'");
      }
      comps[o].push_back(it->second);
    }
  }
  return PresheafMap::trusted(source, limit.apex, std::move(comps));
}

Cone product(const FinPresheaf& x, const FinPresheaf& y) {
  return presheaf_limit(PresheafDiagram{{x, y}, {}});
}

Cone coproduct(const FinPresheaf& x, const FinPresheaf& y) {
  return presheaf_colimit(PresheafDiagram{{x, y}, {}});
}

Cone pullback(const PresheafMap& f, const PresheafMap& g) {
  PresheafDiagram d{{f.source(), g.source(), f.target()}, {{0, 2, f}, {1, 2, g}}};
  return presheaf_limit(d);
}

// --- elements, slices, fibers --------------------------------------------------------

MorId Elements::lift(MorId g, std::size_t x) const { return mor_offset[g] + x; }

Elements category_of_elements(const FinPresheaf& x) {
  const CategoryRef& base = x.base();
  const FinCategory& c = *base;
  Elements el;
  el.presheaf = x;
  el.offset.assign(c.num_objects() + 1, 0);
  for (ObjId o = 0; o < c.num_objects(); ++o) el.offset[o + 1] = el.offset[o] + x.size(o);
  el.mor_offset.assign(c.num_morphisms() + 1, 0);
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    el.mor_offset[g + 1] = el.mor_offset[g] + x.size(c.target(g));
  }
  const std::size_t n = el.offset.back();
  const std::size_t m = el.mor_offset.back();
  std::vector<std::string> objects(n);
  std::vector<ObjId> obj_map(n);
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (std::size_t e = 0; e < x.size(o); ++e) {
      objects[el.offset[o] + e] = "(" + c.object_name(o) + "," + x.element_name(o, e) + ")";
      obj_map[el.offset[o] + e] = o;
    }
  }
  std::vector<Morphism> morphisms(m);
  std::vector<MorId> mor_map(m);
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const ObjId s = c.source(g);
    const ObjId t = c.target(g);
    for (std::size_t e = 0; e < x.size(t); ++e) {
      const ObjId src = el.offset[s] + x.act(g, e);
      const ObjId tgt = el.offset[t] + e;
      std::string name = c.is_identity(g) ? "id_" + objects[tgt]
                                          : "(" + c.morphism_name(g) + "," +
                                                x.element_name(t, e) + ")";
      morphisms[el.mor_offset[g] + e] = {std::move(name), src, tgt};
      mor_map[el.mor_offset[g] + e] = g;
    }
  }
  std::vector<MorId> identities(n);
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (std::size_t e = 0; e < x.size(o); ++e) {
      identities[el.offset[o] + e] = el.mor_offset[c.identity(o)] + e;
    }
  }
  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    for (std::size_t e = 0; e < x.size(c.target(g)); ++e) {
      const MorId outer = el.mor_offset[g] + e;
      for (MorId h : c.arrows_into(c.source(g))) {
        // (g, e) . (h, X(g) e) = (g . h, e)
        const MorId inner = el.mor_offset[h] + x.act(g, e);
        table[outer * m + inner] = el.mor_offset[c.compose(g, h)] + e;
      }
    }
  }
  std::string name = "El(" + (x.name().empty() ? std::string("X") : x.name()) + ")";
  el.category = share(FinCategory::trusted(std::move(name), std::move(objects),
                                           std::move(morphisms), std::move(identities),
                                           std::move(table)));
  el.projection = FinFunctor::trusted(el.category, base, std::move(obj_map), std::move(mor_map),
                                      "p");
  el.offset.pop_back();
  return el;
}

FinPresheaf pullback_of_element(const GlobalElement& a, const PresheafMap& h) {
  const FinPresheaf& d = h.source();
  const FinCategory& c = *d.base();
  std::vector<std::vector<std::size_t>> members(c.num_objects());
  std::vector<std::vector<std::size_t>> pos(c.num_objects());
  std::vector<std::vector<std::string>> els(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    pos[o].assign(d.size(o), npos);
    for (std::size_t x = 0; x < d.size(o); ++x) {
      if (h.at(o, x) == a.family[o]) {
        pos[o][x] = members[o].size();
        members[o].push_back(x);
        els[o].push_back(d.element_name(o, x));
      }
    }
  }
  std::vector<std::vector<std::size_t>> acts(c.num_morphisms());
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    for (std::size_t x : members[c.target(g)]) acts[g].push_back(pos[c.source(g)][d.act(g, x)]);
  }
  return FinPresheaf::trusted(d.base(), std::move(els), std::move(acts), "fiber");
}

FinPresheaf SliceTranslation::to_elements(const PresheafMap& h) const {
  const FinPresheaf& d = h.source();
  const FinCategory& c = *d.base();
  const FinCategory& e = *elements.category;
  std::vector<std::vector<std::string>> els(e.num_objects());
  std::vector<std::vector<std::size_t>> pos(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    pos[o].assign(d.size(o), npos);
    for (std::size_t x = 0; x < d.size(o); ++x) {
      const ObjId obj = elements.object(o, h.at(o, x));
      pos[o][x] = els[obj].size();
      els[obj].push_back(d.element_name(o, x));
    }
  }
  // fiber_members[obj] lists the elements of D over obj in order.
  std::vector<std::vector<std::size_t>> members(e.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (std::size_t x = 0; x < d.size(o); ++x) {
      members[elements.object(o, h.at(o, x))].push_back(x);
    }
  }
  std::vector<std::vector<std::size_t>> acts(e.num_morphisms());
  for (MorId k = 0; k < e.num_morphisms(); ++k) {
    const MorId g = elements.projection.on_morphism(k);
    for (std::size_t x : members[e.target(k)]) acts[k].push_back(pos[c.source(g)][d.act(g, x)]);
  }
  return FinPresheaf::trusted(elements.category, std::move(els), std::move(acts),
                              "fib(" + d.name() + ")");
}

PresheafMap SliceTranslation::from_elements(const FinPresheaf& p) const {
  const FinPresheaf& x = elements.presheaf;
  const FinCategory& c = *x.base();
  std::vector<std::vector<std::string>> els(c.num_objects());
  // start[obj] = index in the total set at base_object(obj) of (x, 0).
  std::vector<std::size_t> start(elements.category->num_objects());
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    for (std::size_t e = 0; e < x.size(o); ++e) {
      const ObjId obj = elements.object(o, e);
      start[obj] = els[o].size();
      for (std::size_t q = 0; q < p.size(obj); ++q) {
        els[o].push_back(x.element_name(o, e) + "/" + p.element_name(obj, q));
        comps[o].push_back(e);
      }
    }
  }
  std::vector<std::vector<std::size_t>> acts(c.num_morphisms());
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    const ObjId t = c.target(g);
    const ObjId s = c.source(g);
    for (std::size_t e = 0; e < x.size(t); ++e) {
      const ObjId obj = elements.object(t, e);
      const MorId k = elements.lift(g, e);
      const ObjId src_obj = elements.object(s, x.act(g, e));
      for (std::size_t q = 0; q < p.size(obj); ++q) acts[g].push_back(start[src_obj] + p.act(k, q));
    }
  }
  FinPresheaf total = FinPresheaf::trusted(x.base(), std::move(els), std::move(acts), "total");
  return PresheafMap::trusted(std::move(total), x, std::move(comps));
}

SliceTranslation slice_as_elements(const FinPresheaf& x) {
  return SliceTranslation{category_of_elements(x)};
}

Check slice_roundtrip(const SliceTranslation& s, const PresheafMap& h) {
  const FinPresheaf p = s.to_elements(h);
  if (Check c = p.check_functoriality(); !c) return Check::fail("fiber presheaf: " + c.certificate);
  const PresheafMap back = s.from_elements(p);
  if (Check c = back.source().check_functoriality(); !c) {
    return Check::fail("total presheaf: " + c.certificate);
  }
  if (Check c = back.check_naturality(); !c) return Check::fail("total map: " + c.certificate);
  const FinPresheaf& d = h.source();
  const FinCategory& c = *d.base();
  // Canonical comparison D -> total: d |-> (h d, position of d in its fiber).
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    std::vector<std::size_t> seen(s.elements.presheaf.size(o), 0);
    std::vector<std::size_t> start(s.elements.presheaf.size(o), 0);
    for (std::size_t e = 1; e < start.size(); ++e) {
      start[e] = start[e - 1] + p.size(s.elements.object(o, e - 1));
    }
    for (std::size_t x = 0; x < d.size(o); ++x) {
      const std::size_t e = h.at(o, x);
      comps[o].push_back(start[e] + seen[e]++);
    }
  }
  const PresheafMap iso = PresheafMap::trusted(d, back.source(), std::move(comps));
  if (Check c = iso.check_naturality(); !c) return Check::fail("comparison: " + c.certificate);
  if (!iso.is_isomorphism()) return Check::fail("comparison is not bijective");
  if (!(compose(back, iso) == h)) return Check::fail("comparison does not lie over X");
  return Check::ok();
}

FinPresheaf restrict(const FinPresheaf& x, const FinFunctor& u) {
  const FinCategory& c = *u.domain();
  std::vector<std::vector<std::string>> els(c.num_objects());
  std::vector<std::vector<std::size_t>> acts(c.num_morphisms());
  for (ObjId o = 0; o < c.num_objects(); ++o) els[o] = x.elements(u.on_object(o));
  for (MorId g = 0; g < c.num_morphisms(); ++g) acts[g] = x.action(u.on_morphism(g));
  std::string name = x.name().empty() ? std::string{} : "u*" + x.name();
  return FinPresheaf::trusted(u.domain(), std::move(els), std::move(acts), std::move(name));
}

PresheafMap restrict(const PresheafMap& m, const FinFunctor& u) {
  const FinCategory& c = *u.domain();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId o = 0; o < c.num_objects(); ++o) comps[o] = m.components()[u.on_object(o)];
  return PresheafMap::trusted(restrict(m.source(), u), restrict(m.target(), u), std::move(comps));
}

}  // namespace toposfactor

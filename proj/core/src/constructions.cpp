#include "toposfactor/constructions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "names.hpp"
#include "partition.hpp"

namespace toposfactor {

// --- comma categories ------------------------------------------------------------

CommaCategory comma(const FinFunctor& f, const FinFunctor& g) {
  const FinCategory& a = *f.domain();
  const FinCategory& b = *g.domain();
  const FinCategory& c = *f.codomain();
  CommaCategory out;
  for (ObjId x = 0; x < a.num_objects(); ++x) {
    for (ObjId y = 0; y < b.num_objects(); ++y) {
      for (MorId h : c.hom(f.on_object(x), g.on_object(y))) out.objects.push_back({x, y, h});
    }
  }
  const std::size_t n = out.objects.size();
  std::vector<std::string> obj_names;
  for (const auto& o : out.objects) {
    obj_names.push_back("(" + a.object_name(o.a) + "," + b.object_name(o.b) + "," +
                        c.morphism_name(o.h) + ")");
  }
  detail::make_unique(obj_names);

  std::vector<Morphism> morphisms;
  std::vector<MorId> left_map;
  std::vector<MorId> right_map;
  std::vector<MorId> identities(n, npos);
  std::map<std::tuple<ObjId, ObjId, MorId, MorId>, MorId> index;
  std::vector<std::string> mor_names;
  for (ObjId s = 0; s < n; ++s) {
    const auto& os = out.objects[s];
    for (ObjId t = 0; t < n; ++t) {
      const auto& ot = out.objects[t];
      for (MorId k : a.hom(os.a, ot.a)) {
        for (MorId l : b.hom(os.b, ot.b)) {
          if (c.compose(g.on_morphism(l), os.h) != c.compose(ot.h, f.on_morphism(k))) continue;
          const MorId id = morphisms.size();
          index.emplace(std::make_tuple(s, t, k, l), id);
          const bool is_id = s == t && a.is_identity(k) && b.is_identity(l);
          if (is_id) identities[s] = id;
          mor_names.push_back(is_id ? "id_" + obj_names[s]
                                    : "(" + a.morphism_name(k) + "," + b.morphism_name(l) + ")");
          morphisms.push_back({{}, s, t});
          left_map.push_back(k);
          right_map.push_back(l);
        }
      }
    }
  }
  detail::make_unique(mor_names);
  for (std::size_t i = 0; i < morphisms.size(); ++i) morphisms[i].name = mor_names[i];
  const std::size_t m = morphisms.size();
  std::vector<MorId> table(m * m, npos);
  for (MorId q = 0; q < m; ++q) {
    for (MorId p = 0; p < m; ++p) {
      if (morphisms[p].target != morphisms[q].source) continue;
      table[q * m + p] = index.at({morphisms[p].source, morphisms[q].target,
                                   a.compose(left_map[q], left_map[p]),
                                   b.compose(right_map[q], right_map[p])});
    }
  }
  std::vector<ObjId> left_obj;
  std::vector<ObjId> right_obj;
  for (const auto& o : out.objects) {
    left_obj.push_back(o.a);
    right_obj.push_back(o.b);
  }
  std::string name = "(" + (f.name().empty() ? std::string("F") : f.name()) + "|" +
                     (g.name().empty() ? std::string("G") : g.name()) + ")";
  out.base = share(FinCategory::trusted(std::move(name), std::move(obj_names), std::move(morphisms),
                                        std::move(identities), std::move(table)));
  out.proj_left = FinFunctor::trusted(out.base, f.domain(), std::move(left_obj),
                                      std::move(left_map), "pl");
  out.proj_right = FinFunctor::trusted(out.base, g.domain(), std::move(right_obj),
                                       std::move(right_map), "pr");
  return out;
}

CommaCategory coslice(ObjId d, const FinFunctor& u) {
  return comma(FinFunctor::constant(fixtures::one(), u.codomain(), d), u);
}

CommaCategory slice(const FinFunctor& u, ObjId d) {
  return comma(u, FinFunctor::constant(fixtures::one(), u.codomain(), d));
}

// --- connected components -----------------------------------------------------------

Components pi0(const FinCategory& c) {
  detail::Partition p(c.num_objects());
  for (MorId f = 0; f < c.num_morphisms(); ++f) p.unite(c.source(f), c.target(f));
  return {p.num_classes(), p.labels()};
}

std::size_t CommaComponents::component_of(ObjId c, MorId h) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), std::make_pair(c, h));
  if (it == objects.end() || *it != std::make_pair(c, h)) return npos;
  return components.label[static_cast<std::size_t>(it - objects.begin())];
}

namespace {

CommaComponents comma_components(const FinFunctor& u, ObjId d, bool under) {
  const FinCategory& c = *u.domain();
  const FinCategory& dd = *u.codomain();
  CommaComponents out;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    const auto& hs = under ? dd.hom(d, u.on_object(o)) : dd.hom(u.on_object(o), d);
    for (MorId h : hs) out.objects.emplace_back(o, h);
  }
  std::sort(out.objects.begin(), out.objects.end());
  detail::Partition p(out.objects.size());
  auto idx = [&](ObjId o, MorId h) {
    return static_cast<std::size_t>(
        std::lower_bound(out.objects.begin(), out.objects.end(), std::make_pair(o, h)) -
        out.objects.begin());
  };
  for (MorId k = 0; k < c.num_morphisms(); ++k) {
    if (c.is_identity(k)) continue;
    const ObjId s = c.source(k);
    const ObjId t = c.target(k);
    const MorId uk = u.on_morphism(k);
    if (under) {
      for (MorId h : dd.hom(d, u.on_object(s))) p.unite(idx(s, h), idx(t, dd.compose(uk, h)));
    } else {
      for (MorId h : dd.hom(u.on_object(t), d)) p.unite(idx(s, dd.compose(h, uk)), idx(t, h));
    }
  }
  out.components = {p.num_classes(), p.labels()};
  return out;
}

Check connected_commas(const FinFunctor& u, bool under) {
  const FinCategory& d = *u.codomain();
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    const auto cc = comma_components(u, o, under);
    const std::string which = under ? d.object_name(o) + "|" + u.name() : u.name() + "|" +
                                                                              d.object_name(o);
    if (cc.components.count == 0) return Check::fail("comma " + which + " is empty");
    if (cc.components.count > 1) {
      return Check::fail("comma " + which + " has " + std::to_string(cc.components.count) +
                         " components");
    }
  }
  return Check::ok();
}

}  // namespace

CommaComponents coslice_components(ObjId d, const FinFunctor& u) {
  return comma_components(u, d, true);
}

CommaComponents slice_components(const FinFunctor& u, ObjId d) {
  return comma_components(u, d, false);
}

// --- cofilteredness, initiality, finality -------------------------------------------------

Check is_cofiltered(const FinCategory& c) {
  if (c.num_objects() == 0) return Check::fail("category is empty");
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    for (ObjId b = a + 1; b < c.num_objects(); ++b) {
      bool found = false;
      for (ObjId k = 0; k < c.num_objects() && !found; ++k) {
        found = !c.hom(k, a).empty() && !c.hom(k, b).empty();
      }
      if (!found) {
        return Check::fail("objects " + c.object_name(a) + ", " + c.object_name(b) +
                           " admit no span");
      }
    }
  }
  for (ObjId i = 0; i < c.num_objects(); ++i) {
    for (ObjId j = 0; j < c.num_objects(); ++j) {
      const auto& h = c.hom(i, j);
      for (std::size_t p = 0; p < h.size(); ++p) {
        for (std::size_t q = p + 1; q < h.size(); ++q) {
          bool found = false;
          for (MorId w : c.arrows_into(i)) {
            if (c.compose(h[p], w) == c.compose(h[q], w)) {
              found = true;
              break;
            }
          }
          if (!found) {
            return Check::fail("parallel pair " + c.morphism_name(h[p]) + ", " +
                               c.morphism_name(h[q]) + " has no equalizing arrow");
          }
        }
      }
    }
  }
  return Check::ok();
}

Check is_initial_functor(const FinFunctor& f) { return connected_commas(f, false); }
Check is_final_functor(const FinFunctor& f) { return connected_commas(f, true); }

namespace {

Check unique_lifts(const FinFunctor& f, bool into) {
  const FinCategory& a = *f.domain();
  const FinCategory& b = *f.codomain();
  for (ObjId x = 0; x < a.num_objects(); ++x) {
    const ObjId fx = f.on_object(x);
    const auto& below = into ? b.arrows_into(fx) : b.arrows_out_of(fx);
    const auto& above = into ? a.arrows_into(x) : a.arrows_out_of(x);
    for (MorId g : below) {
      std::size_t lifts = 0;
      for (MorId k : above) lifts += f.on_morphism(k) == g ? 1 : 0;
      if (lifts != 1) {
        return Check::fail(std::to_string(lifts) + " lifts of " + b.morphism_name(g) + " at " +
                           a.object_name(x));
      }
    }
  }
  return Check::ok();
}

}  // namespace

Check is_discrete_fibration(const FinFunctor& f) { return unique_lifts(f, true); }
Check is_discrete_opfibration(const FinFunctor& f) { return unique_lifts(f, false); }

// --- functor search -----------------------------------------------------------------------

namespace {

struct SearchOptions {
  bool bijective = false;
};

void functor_search(const CategoryRef& cref, const CategoryRef& dref, SearchOptions opt,
                    const std::function<bool(const FinFunctor&)>& visit) {
  const FinCategory& c = *cref;
  const FinCategory& d = *dref;
  const std::size_t n = c.num_objects();
  if (opt.bijective &&
      (n != d.num_objects() || c.num_morphisms() != d.num_morphisms())) {
    return;
  }
  if (n > 0 && d.num_objects() == 0) return;
  std::vector<ObjId> obj(n, 0);
  std::vector<bool> obj_used(d.num_objects(), false);
  std::vector<MorId> mor(c.num_morphisms(), npos);
  std::vector<bool> mor_used(d.num_morphisms(), false);
  std::vector<MorId> vars;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (!c.is_identity(f)) vars.push_back(f);
  }
  std::vector<std::size_t> var_pos(c.num_morphisms(), npos);
  for (std::size_t i = 0; i < vars.size(); ++i) var_pos[vars[i]] = i;
  // For each variable position, the composable pairs whose last-assigned
  // participant is that variable.
  std::vector<std::vector<std::pair<MorId, MorId>>> checks(vars.size());
  for (MorId g : vars) {
    for (MorId f : c.arrows_into(c.source(g))) {
      if (c.is_identity(f)) continue;
      const MorId gf = c.compose(g, f);
      std::size_t last = std::max(var_pos[g], var_pos[f]);
      if (!c.is_identity(gf)) last = std::max(last, var_pos[gf]);
      checks[last].emplace_back(g, f);
    }
  }
  bool stop = false;
  std::function<void(std::size_t)> assign_morphisms = [&](std::size_t v) {
    if (stop) return;
    if (v == vars.size()) {
      if (!visit(FinFunctor::trusted(cref, dref, obj, mor))) stop = true;
      return;
    }
    const MorId f = vars[v];
    for (MorId img : d.hom(obj[c.source(f)], obj[c.target(f)])) {
      if (opt.bijective && (mor_used[img] || d.is_identity(img))) continue;
      mor[f] = img;
      bool ok = true;
      for (const auto& [g, h] : checks[v]) {
        if (mor[c.compose(g, h)] != d.compose(mor[g], mor[h])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (opt.bijective) mor_used[img] = true;
      assign_morphisms(v + 1);
      if (opt.bijective) mor_used[img] = false;
      if (stop) return;
    }
    mor[f] = npos;
  };
  std::function<void(ObjId)> assign_objects = [&](ObjId o) {
    if (stop) return;
    if (o == n) {
      for (ObjId x = 0; x < n; ++x) mor[c.identity(x)] = d.identity(obj[x]);
      assign_morphisms(0);
      return;
    }
    for (ObjId img = 0; img < d.num_objects(); ++img) {
      if (opt.bijective && obj_used[img]) continue;
      obj[o] = img;
      bool ok = true;
      for (ObjId p = 0; p <= o && ok; ++p) {
        const std::size_t ab = c.hom(p, o).size();
        const std::size_t ba = c.hom(o, p).size();
        const std::size_t fab = d.hom(obj[p], img).size();
        const std::size_t fba = d.hom(img, obj[p]).size();
        ok = opt.bijective ? (ab == fab && ba == fba) : ((ab == 0 || fab > 0) && (ba == 0 || fba > 0));
      }
      if (!ok) continue;
      if (opt.bijective) obj_used[img] = true;
      assign_objects(o + 1);
      if (opt.bijective) obj_used[img] = false;
    }
  };
  assign_objects(0);
}

}  // namespace

void for_each_functor(const CategoryRef& c, const CategoryRef& d,
                      const std::function<bool(const FinFunctor&)>& visit) {
  functor_search(c, d, {}, visit);
}

std::vector<FinFunctor> all_functors(const CategoryRef& c, const CategoryRef& d) {
  std::vector<FinFunctor> out;
  for_each_functor(c, d, [&](const FinFunctor& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

namespace {

std::vector<NatTransf> transformations(const FinFunctor& f, const FinFunctor& g, bool iso,
                                       bool first_only) {
  const FinCategory& c = *f.domain();
  const FinCategory& d = *f.codomain();
  const std::size_t n = c.num_objects();
  std::vector<std::vector<MorId>> candidates(n);
  for (ObjId a = 0; a < n; ++a) {
    for (MorId k : d.hom(f.on_object(a), g.on_object(a))) {
      if (!iso || d.is_isomorphism(k)) candidates[a].push_back(k);
    }
  }
  std::vector<std::vector<MorId>> checks(n);
  for (MorId k = 0; k < c.num_morphisms(); ++k) {
    if (!c.is_identity(k)) checks[std::max(c.source(k), c.target(k))].push_back(k);
  }
  std::vector<NatTransf> out;
  std::vector<MorId> comp(n, npos);
  std::function<bool(ObjId)> go = [&](ObjId a) {
    if (a == n) {
      NatTransf t = NatTransf::make(f, g, comp);
      out.push_back(std::move(t));
      return !first_only;
    }
    for (MorId k : candidates[a]) {
      comp[a] = k;
      bool ok = true;
      for (MorId m : checks[a]) {
        if (d.compose(g.on_morphism(m), comp[c.source(m)]) !=
            d.compose(comp[c.target(m)], f.on_morphism(m))) {
          ok = false;
          break;
        }
      }
      if (ok && !go(a + 1)) return false;
    }
    return true;
  };
  go(0);
  return out;
}

}  // namespace

std::vector<NatTransf> all_natural_transformations(const FinFunctor& f, const FinFunctor& g) {
  return transformations(f, g, false, false);
}

std::vector<NatTransf> natural_isomorphisms(const FinFunctor& f, const FinFunctor& g) {
  return transformations(f, g, true, false);
}

std::optional<NatTransf> find_natural_isomorphism(const FinFunctor& f, const FinFunctor& g) {
  auto all = transformations(f, g, true, true);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<FinFunctor> find_isomorphism(const CategoryRef& c, const CategoryRef& d) {
  std::optional<FinFunctor> found;
  functor_search(c, d, {true}, [&](const FinFunctor& f) {
    found = f;
    return false;
  });
  return found;
}

FinCategory skeleton(const FinCategory& c) {
  std::vector<ObjId> keep;
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    bool dup = false;
    for (ObjId b : keep) {
      for (MorId f : c.hom(b, a)) {
        if (c.is_isomorphism(f)) {
          dup = true;
          break;
        }
      }
      if (dup) break;
    }
    if (!dup) keep.push_back(a);
  }
  return full_subcategory(c, keep, c.name() + "|skel");
}

bool equivalent(const CategoryRef& c, const CategoryRef& d) {
  return find_isomorphism(share(skeleton(*c)), share(skeleton(*d))).has_value();
}

bool is_equivalence(const FinFunctor& f) {
  const FinCategory& c = *f.domain();
  const FinCategory& d = *f.codomain();
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    for (ObjId b = 0; b < c.num_objects(); ++b) {
      const auto& h = c.hom(a, b);
      if (h.size() != d.hom(f.on_object(a), f.on_object(b)).size()) return false;
      std::set<MorId> images;
      for (MorId k : h) images.insert(f.on_morphism(k));
      if (images.size() != h.size()) return false;
    }
  }
  for (ObjId y = 0; y < d.num_objects(); ++y) {
    bool hit = false;
    for (ObjId a = 0; a < c.num_objects() && !hit; ++a) {
      for (MorId k : d.hom(f.on_object(a), y)) {
        if (d.is_isomorphism(k)) {
          hit = true;
          break;
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

// --- orthogonal fillers --------------------------------------------------------------------

std::vector<Filler> all_fillers(const Square& sq) {
  const FinCategory& dcat = *sq.r.codomain();
  const FinCategory& acat = *sq.l.domain();
  std::vector<Filler> out;
  for_each_functor(sq.l.codomain(), sq.top.codomain(), [&](const FinFunctor& s) {
    const auto betas = natural_isomorphisms(compose(s, sq.l), sq.top);
    if (betas.empty()) return true;
    const auto gammas = natural_isomorphisms(compose(sq.r, s), sq.bottom);
    for (const auto& gamma : gammas) {
      for (const auto& beta : betas) {
        bool coherent = true;
        for (ObjId a = 0; a < acat.num_objects() && coherent; ++a) {
          coherent = dcat.compose(sq.alpha.component(a), sq.r.on_morphism(beta.component(a))) ==
                     gamma.component(sq.l.on_object(a));
        }
        if (coherent) {
          out.push_back({s, beta, gamma});
          return true;
        }
      }
    }
    return true;
  });
  return out;
}

Filler diagonal_filler(const Square& sq, FillerClasses classes) {
  const bool dual = classes == FillerClasses::InitialOpfibration;
  if (Check c = dual ? is_initial_functor(sq.l) : is_final_functor(sq.l); !c) {
    throw Error(ErrorCode::NoFiller, "left functor is not in the left class: " + c.certificate);
  }
  if (Check c = dual ? is_discrete_opfibration(sq.r) : is_discrete_fibration(sq.r); !c) {
    throw Error(ErrorCode::NoFiller, "right functor is not in the right class: " + c.certificate);
  }
  if (Check c = sq.alpha.check_naturality(); !c) {
    throw Error(ErrorCode::NoFiller, "square witness: " + c.certificate);
  }
  if (!sq.alpha.is_isomorphism()) {
    throw Error(ErrorCode::NoFiller, "square witness is not invertible");
  }
  auto fillers = all_fillers(sq);
  if (fillers.empty()) throw Error(ErrorCode::NoFiller, "no functor fills the square");
  for (std::size_t i = 1; i < fillers.size(); ++i) {
    if (!find_natural_isomorphism(fillers.front().s, fillers[i].s)) {
      throw InvariantViolation("AmbiguousFiller: two non-isomorphic diagonal fillers");
    }
  }
  return fillers.front();
}

// --- cocomma collage --------------------------------------------------------------------

namespace {

bool is_terminal(const FinCategory& c, ObjId t) {
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    if (c.hom(a, t).size() != 1) return false;
  }
  return true;
}

enum class Kind { B, Cross, U, Back };

struct KMor {
  Kind kind;
  std::size_t i1;
  std::size_t i2;
  std::size_t i3;
  friend auto operator<=>(const KMor&, const KMor&) = default;
};

using Triple = std::tuple<MorId, ObjId, MorId>;  // (x : b -> f a, a, y : g a -> c)

}  // namespace

Collage cocomma_collage(const FinFunctor& f, const FinFunctor& g) {
  if (!(*f.domain() == *g.domain())) {
    throw Error(ErrorCode::PreconditionViolated, "collage legs do not share a domain");
  }
  const FinCategory& A = *f.domain();
  const FinCategory& B = *f.codomain();
  const FinCategory& C = *g.codomain();

  bool merge = false;
  ObjId tA = npos;
  ObjId TB = npos;
  ObjId TC = npos;
  if (auto t = A.terminal_object()) {
    tA = *t;
    TB = f.on_object(tA);
    TC = g.on_object(tA);
    merge = is_terminal(B, TB) && is_terminal(C, TC);
  }

  // Cross classes K(b, c).
  const std::size_t nb = B.num_objects();
  const std::size_t nc = C.num_objects();
  std::vector<std::vector<Triple>> triples(nb * nc);
  std::vector<std::map<Triple, std::size_t>> triple_index(nb * nc);
  std::vector<std::vector<std::size_t>> triple_class(nb * nc);
  std::vector<std::vector<Triple>> class_rep(nb * nc);
  for (ObjId b = 0; b < nb; ++b) {
    for (ObjId c = 0; c < nc; ++c) {
      auto& ts = triples[b * nc + c];
      auto& ti = triple_index[b * nc + c];
      for (ObjId a = 0; a < A.num_objects(); ++a) {
        for (MorId x : B.hom(b, f.on_object(a))) {
          for (MorId y : C.hom(g.on_object(a), c)) {
            ti.emplace(Triple{x, a, y}, ts.size());
            ts.emplace_back(x, a, y);
          }
        }
      }
      detail::Partition p(ts.size());
      for (MorId k = 0; k < A.num_morphisms(); ++k) {
        const ObjId a0 = A.source(k);
        const ObjId a1 = A.target(k);
        for (MorId x : B.hom(b, f.on_object(a0))) {
          for (MorId y : C.hom(g.on_object(a1), c)) {
            p.unite(ti.at({B.compose(f.on_morphism(k), x), a1, y}),
                    ti.at({x, a0, C.compose(y, g.on_morphism(k))}));
          }
        }
      }
      auto labels = p.labels();
      auto& reps = class_rep[b * nc + c];
      reps.resize(p.num_classes());
      std::vector<bool> seen(p.num_classes(), false);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!seen[labels[i]]) {
          seen[labels[i]] = true;
          reps[labels[i]] = ts[i];
        }
      }
      triple_class[b * nc + c] = std::move(labels);
    }
  }
  auto cross_class = [&](ObjId b, ObjId c, const Triple& t) {
    return triple_class[b * nc + c][triple_index[b * nc + c].at(t)];
  };
  auto bang_b = [&](ObjId b) { return B.hom(b, TB).front(); };
  auto bang_c = [&](ObjId c) { return C.hom(c, TC).front(); };

  // U(c, c'): C(c, c') plus, when merging, K(TB, c') glued along z' . !_c ~ z' . psi.
  std::vector<std::vector<std::size_t>> u_label(nc * nc);
  std::vector<std::size_t> u_count(nc * nc, 0);
  std::vector<std::vector<std::pair<bool, std::size_t>>> u_rep(nc * nc);  // (is C arrow, index)
  for (ObjId c = 0; c < nc; ++c) {
    for (ObjId c2 = 0; c2 < nc; ++c2) {
      const auto& hc = C.hom(c, c2);
      const std::size_t nk = merge ? class_rep[TB * nc + c2].size() : 0;
      detail::Partition p(hc.size() + nk);
      if (merge) {
        for (MorId z : C.hom(TC, c2)) {
          const MorId w = C.compose(z, bang_c(c));
          const std::size_t wi = static_cast<std::size_t>(
              std::find(hc.begin(), hc.end(), w) - hc.begin());
          p.unite(wi, hc.size() + cross_class(TB, c2, {B.identity(TB), tA, z}));
        }
      }
      auto labels = p.labels();
      auto& reps = u_rep[c * nc + c2];
      reps.resize(p.num_classes());
      std::vector<bool> seen(p.num_classes(), false);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (seen[labels[i]]) continue;
        seen[labels[i]] = true;
        reps[labels[i]] = i < hc.size() ? std::make_pair(true, i) : std::make_pair(false, i - hc.size());
      }
      u_count[c * nc + c2] = p.num_classes();
      u_label[c * nc + c2] = std::move(labels);
    }
  }
  auto u_of_c_arrow = [&](MorId w) {
    const ObjId c = C.source(w);
    const ObjId c2 = C.target(w);
    const auto& hc = C.hom(c, c2);
    return u_label[c * nc + c2][static_cast<std::size_t>(std::find(hc.begin(), hc.end(), w) -
                                                         hc.begin())];
  };
  auto u_of_cross = [&](ObjId c, ObjId c2, std::size_t k) {
    return u_label[c * nc + c2][C.hom(c, c2).size() + k];
  };

  // Objects.
  std::vector<ObjId> cobj(nc, npos);
  std::vector<std::string> obj_names;
  for (ObjId b = 0; b < nb; ++b) obj_names.push_back(B.object_name(b));
  for (ObjId c = 0; c < nc; ++c) {
    if (merge && c == TC) continue;
    cobj[c] = obj_names.size();
    std::string name = C.object_name(c);
    while (std::find(obj_names.begin(), obj_names.end(), name) != obj_names.end()) name += "'";
    obj_names.push_back(name);
  }
  if (merge) cobj[TC] = TB;
  auto live_c = [&](ObjId c) { return !(merge && c == TC); };

  // Morphisms.
  std::vector<KMor> kmors;
  for (MorId m = 0; m < B.num_morphisms(); ++m) kmors.push_back({Kind::B, m, 0, 0});
  for (ObjId b = 0; b < nb; ++b) {
    for (ObjId c = 0; c < nc; ++c) {
      if (!live_c(c)) continue;
      for (std::size_t k = 0; k < class_rep[b * nc + c].size(); ++k) {
        kmors.push_back({Kind::Cross, b, c, k});
      }
    }
  }
  for (ObjId c = 0; c < nc; ++c) {
    for (ObjId c2 = 0; c2 < nc; ++c2) {
      if (!live_c(c) || !live_c(c2)) continue;
      for (std::size_t k = 0; k < u_count[c * nc + c2]; ++k) kmors.push_back({Kind::U, c, c2, k});
    }
  }
  if (merge) {
    for (ObjId c = 0; c < nc; ++c) {
      if (!live_c(c)) continue;
      for (MorId z : B.arrows_out_of(TB)) kmors.push_back({Kind::Back, c, z, 0});
    }
  }
  std::map<KMor, MorId> kindex;
  for (MorId i = 0; i < kmors.size(); ++i) kindex.emplace(kmors[i], i);

  auto cross_name = [&](ObjId b, ObjId c, std::size_t k) {
    const auto& [x, a, y] = class_rep[b * nc + c][k];
    if (B.is_identity(x) && C.is_identity(y)) return "psi_" + A.object_name(a);
    return "[" + B.morphism_name(x) + "|" + A.object_name(a) + "|" + C.morphism_name(y) + "]";
  };
  std::vector<Morphism> morphisms;
  std::vector<std::string> names;
  for (const auto& km : kmors) {
    switch (km.kind) {
      case Kind::B:
        morphisms.push_back({{}, B.source(km.i1), B.target(km.i1)});
        names.push_back(B.morphism_name(km.i1));
        break;
      case Kind::Cross:
        morphisms.push_back({{}, km.i1, cobj[km.i2]});
        names.push_back(cross_name(km.i1, km.i2, km.i3));
        break;
      case Kind::U: {
        morphisms.push_back({{}, cobj[km.i1], cobj[km.i2]});
        const auto [is_c, idx] = u_rep[km.i1 * nc + km.i2][km.i3];
        if (is_c) {
          const MorId w = C.hom(km.i1, km.i2)[idx];
          names.push_back(C.is_identity(w) ? "id_" + obj_names[cobj[km.i1]] : C.morphism_name(w));
        } else {
          names.push_back(cross_name(TB, km.i2, idx) + "^" + C.object_name(km.i1));
        }
        break;
      }
      case Kind::Back:
        morphisms.push_back({{}, cobj[km.i1], B.target(km.i2)});
        names.push_back(B.morphism_name(km.i2) + "^" + C.object_name(km.i1));
        break;
    }
  }
  detail::make_unique(names);
  for (std::size_t i = 0; i < morphisms.size(); ++i) morphisms[i].name = names[i];

  auto cross_id = [&](ObjId b, ObjId c, const Triple& t) {
    return kindex.at({Kind::Cross, b, c, cross_class(b, c, t)});
  };
  auto u_id = [&](ObjId c, ObjId c2, std::size_t cls) { return kindex.at({Kind::U, c, c2, cls}); };

  const std::size_t m = kmors.size();
  std::vector<MorId> table(m * m, npos);
  for (MorId q = 0; q < m; ++q) {
    for (MorId p = 0; p < m; ++p) {
      if (morphisms[p].target != morphisms[q].source) continue;
      const KMor& s = kmors[q];  // second
      const KMor& r = kmors[p];  // first
      MorId res = npos;
      if (s.kind == Kind::B && r.kind == Kind::B) {
        res = kindex.at({Kind::B, B.compose(s.i1, r.i1), 0, 0});
      } else if (s.kind == Kind::Cross && r.kind == Kind::B) {
        const auto& [x, a, y] = class_rep[s.i1 * nc + s.i2][s.i3];
        const ObjId b = B.source(r.i1);
        res = cross_id(b, s.i2, {B.compose(x, r.i1), a, y});
      } else if (s.kind == Kind::U && r.kind == Kind::Cross) {
        const auto& [x, a, y] = class_rep[r.i1 * nc + r.i2][r.i3];
        const auto [is_c, idx] = u_rep[s.i1 * nc + s.i2][s.i3];
        if (is_c) {
          const MorId w = C.hom(s.i1, s.i2)[idx];
          res = cross_id(r.i1, s.i2, {x, a, C.compose(w, y)});
        } else {
          const auto& [x2, a2, y2] = class_rep[TB * nc + s.i2][idx];
          res = cross_id(r.i1, s.i2, {B.compose(x2, bang_b(r.i1)), a2, y2});
        }
      } else if (s.kind == Kind::Back && r.kind == Kind::Cross) {
        res = kindex.at({Kind::B, B.compose(s.i2, bang_b(r.i1)), 0, 0});
      } else if (s.kind == Kind::U && r.kind == Kind::U) {
        const auto [sc, si] = u_rep[s.i1 * nc + s.i2][s.i3];
        const auto [rc, ri] = u_rep[r.i1 * nc + r.i2][r.i3];
        const ObjId c = r.i1;
        const ObjId c2 = s.i2;
        if (sc && rc) {
          res = u_id(c, c2, u_of_c_arrow(C.compose(C.hom(s.i1, s.i2)[si], C.hom(r.i1, r.i2)[ri])));
        } else if (!sc) {
          res = u_id(c, c2, u_of_cross(c, c2, si));
        } else {
          const auto& [x, a, y] = class_rep[TB * nc + r.i2][ri];
          const MorId w = C.hom(s.i1, s.i2)[si];
          res = u_id(c, c2, u_of_cross(c, c2, cross_class(TB, c2, {x, a, C.compose(w, y)})));
        }
      } else if (s.kind == Kind::Back && r.kind == Kind::U) {
        res = kindex.at({Kind::Back, r.i1, s.i2, 0});
      } else if (s.kind == Kind::B && r.kind == Kind::Back) {
        res = kindex.at({Kind::Back, r.i1, B.compose(s.i1, r.i2), 0});
      } else if (s.kind == Kind::Cross && r.kind == Kind::Back) {
        const auto& [x, a, y] = class_rep[s.i1 * nc + s.i2][s.i3];
        res = u_id(r.i1, s.i2, u_of_cross(r.i1, s.i2, cross_class(TB, s.i2, {B.compose(x, r.i2), a, y})));
      }
      table[q * m + p] = res;
    }
  }
  std::vector<MorId> identities;
  for (ObjId b = 0; b < nb; ++b) identities.push_back(kindex.at({Kind::B, B.identity(b), 0, 0}));
  for (ObjId c = 0; c < nc; ++c) {
    if (live_c(c)) identities.push_back(u_id(c, c, u_of_c_arrow(C.identity(c))));
  }

  Collage out;
  out.terminals_merged = merge;
  std::string name = "Coll(" + (f.name().empty() ? std::string("f") : f.name()) + "," +
                     (g.name().empty() ? std::string("g") : g.name()) + ")";
  try {
    out.base = share(FinCategory::from_tables(std::move(name), std::move(obj_names),
                                              std::move(morphisms), std::move(identities),
                                              std::move(table)));
  } catch (const Error& e) {
    throw InvariantViolation(std::string("collage is not a category: ") + e.what());
  }
  const CategoryRef& K = out.base;

  std::vector<MorId> q2_mor;
  for (MorId b = 0; b < B.num_morphisms(); ++b) q2_mor.push_back(kindex.at({Kind::B, b, 0, 0}));
  std::vector<ObjId> q2_obj(nb);
  std::iota(q2_obj.begin(), q2_obj.end(), ObjId{0});
  out.q2 = FinFunctor::trusted(f.codomain(), K, std::move(q2_obj), std::move(q2_mor), "q2");

  std::vector<MorId> q1_mor;
  for (MorId w = 0; w < C.num_morphisms(); ++w) {
    const ObjId c = C.source(w);
    const ObjId c2 = C.target(w);
    if (live_c(c) && live_c(c2)) {
      q1_mor.push_back(u_id(c, c2, u_of_c_arrow(w)));
    } else if (live_c(c)) {  // c2 == TC
      q1_mor.push_back(kindex.at({Kind::Back, c, B.identity(TB), 0}));
    } else if (live_c(c2)) {  // c == TC
      q1_mor.push_back(cross_id(TB, c2, {B.identity(TB), tA, w}));
    } else {
      q1_mor.push_back(kindex.at({Kind::B, B.identity(TB), 0, 0}));
    }
  }
  out.q1 = FinFunctor::trusted(g.codomain(), K, cobj, std::move(q1_mor), "q1");

  for (ObjId a = 0; a < A.num_objects(); ++a) {
    const ObjId fa = f.on_object(a);
    const ObjId ga = g.on_object(a);
    if (live_c(ga)) {
      out.formal_arrows.push_back(cross_id(fa, ga, {B.identity(fa), a, C.identity(ga)}));
    } else {
      out.formal_arrows.push_back(kindex.at({Kind::B, bang_b(fa), 0, 0}));
    }
  }
  if (Check c = out.q1.check_laws(); !c) {
    throw InvariantViolation("collage inclusion q1 is not a functor: " + c.certificate);
  }
  return out;
}

// --- finite limits inside a category ------------------------------------------------------

namespace {

// Cone condition is given by `commutes`; uniqueness of factorizations of
// every other cone through (p1, p2).
template <typename Commutes>
bool universal(const FinCategory& c, ObjId a, ObjId b, MorId p1, MorId p2, Commutes commutes) {
  const ObjId p = c.source(p1);
  for (ObjId q = 0; q < c.num_objects(); ++q) {
    for (MorId q1 : c.hom(q, a)) {
      for (MorId q2 : c.hom(q, b)) {
        if (!commutes(q1, q2)) continue;
        int count = 0;
        for (MorId k : c.hom(q, p)) {
          if (c.compose(p1, k) == q1 && c.compose(p2, k) == q2) ++count;
        }
        if (count != 1) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_pullback(const FinCategory& c, MorId f, MorId g, MorId p1, MorId p2) {
  if (c.source(p1) != c.source(p2) || c.target(p1) != c.source(f) ||
      c.target(p2) != c.source(g) || c.target(f) != c.target(g)) {
    return false;
  }
  if (c.compose(f, p1) != c.compose(g, p2)) return false;
  return universal(c, c.source(f), c.source(g), p1, p2,
                   [&](MorId q1, MorId q2) { return c.compose(f, q1) == c.compose(g, q2); });
}

std::optional<PullbackCone> find_pullback(const FinCategory& c, MorId f, MorId g) {
  if (c.target(f) != c.target(g)) return std::nullopt;
  for (ObjId p = 0; p < c.num_objects(); ++p) {
    for (MorId p1 : c.hom(p, c.source(f))) {
      for (MorId p2 : c.hom(p, c.source(g))) {
        if (is_pullback(c, f, g, p1, p2)) return PullbackCone{p, p1, p2};
      }
    }
  }
  return std::nullopt;
}

bool is_product(const FinCategory& c, ObjId a, ObjId b, MorId p1, MorId p2) {
  if (c.source(p1) != c.source(p2) || c.target(p1) != a || c.target(p2) != b) return false;
  return universal(c, a, b, p1, p2, [](MorId, MorId) { return true; });
}

std::optional<PullbackCone> find_product(const FinCategory& c, ObjId a, ObjId b) {
  for (ObjId p = 0; p < c.num_objects(); ++p) {
    for (MorId p1 : c.hom(p, a)) {
      for (MorId p2 : c.hom(p, b)) {
        if (is_product(c, a, b, p1, p2)) return PullbackCone{p, p1, p2};
      }
    }
  }
  return std::nullopt;
}

}  // namespace toposfactor

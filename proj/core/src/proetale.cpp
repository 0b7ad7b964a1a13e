#include "toposfactor/proetale.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "names.hpp"
#include "partition.hpp"

namespace toposfactor {

CofilteredDiagram CofilteredDiagram::make(FinFunctor diagram, std::string name) {
  if (Check c = is_cofiltered(*diagram.domain()); !c) {
    throw Error(ErrorCode::NotCofiltered, diagram.domain()->name() + ": " + c.certificate);
  }
  CofilteredDiagram out;
  out.diagram_ = std::move(diagram);
  out.name_ = name.empty() ? out.diagram_.name() : std::move(name);
  return out;
}

SliceSystem full_slice_system(const CofilteredDiagram& diag) {
  const FinCategory& c = *diag.target();
  SliceSystem s;
  for (ObjId i = 0; i < diag.index()->num_objects(); ++i) {
    auto into = c.arrows_into(diag.at(i));
    std::sort(into.begin(), into.end());
    s.members.push_back(std::move(into));
  }
  return s;
}

ObjId MarkedOplaxColimit::object_of(ObjId i, MorId h) const {
  OplaxObject key{i, h};
  auto it = std::lower_bound(objects.begin(), objects.end(), key);
  if (it == objects.end() || !(*it == key)) return npos;
  return static_cast<ObjId>(it - objects.begin());
}

namespace {

void unique_names(std::vector<Morphism>& mors) {
  std::vector<std::string> names;
  for (const auto& m : mors) names.push_back(m.name);
  detail::make_unique(names);
  for (std::size_t i = 0; i < mors.size(); ++i) mors[i].name = std::move(names[i]);
}

// Subcategory on the listed objects and morphisms (closed under composition
// and containing identities), with its inclusion.
std::pair<CategoryRef, FinFunctor> subcategory(const CategoryRef& whole,
                                               const std::vector<ObjId>& objects,
                                               const std::vector<MorId>& morphisms,
                                               std::string name) {
  const FinCategory& c = *whole;
  std::vector<std::size_t> obj_pos(c.num_objects(), npos);
  std::vector<std::size_t> mor_pos(c.num_morphisms(), npos);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    obj_pos[objects[k]] = k;
    names.push_back(c.object_name(objects[k]));
  }
  std::vector<Morphism> mors;
  for (std::size_t k = 0; k < morphisms.size(); ++k) {
    const MorId f = morphisms[k];
    mor_pos[f] = k;
    mors.push_back({c.morphism_name(f), obj_pos[c.source(f)], obj_pos[c.target(f)]});
  }
  std::vector<MorId> identities;
  for (ObjId o : objects) identities.push_back(mor_pos[c.identity(o)]);
  const std::size_t m = morphisms.size();
  std::vector<MorId> table(m * m, npos);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      if (c.composable(morphisms[g], morphisms[f])) {
        const std::size_t r = mor_pos[c.compose(morphisms[g], morphisms[f])];
        if (r == npos) throw InvariantViolation("subcategory is not closed under composition");
        table[g * m + f] = r;
      }
    }
  }
  auto sub = share(FinCategory::trusted(std::move(name), std::move(names),
                                                std::move(mors), std::move(identities),
                                                std::move(table)));
  auto inc = FinFunctor::trusted(sub, whole, objects, morphisms, "incl");
  return {sub, inc};
}

}  // namespace

MarkedOplaxColimit build_oplax_colimit(const CofilteredDiagram& diag, const SliceSystem& slices) {
  const FinCategory& ic = *diag.index();
  const FinCategory& c = *diag.target();
  if (slices.members.size() != ic.num_objects()) {
    throw Error(ErrorCode::PreconditionViolated, "one slice system per index object is required");
  }
  MarkedOplaxColimit mol;
  mol.diagram = diag;
  mol.slices = slices;
  for (ObjId i = 0; i < ic.num_objects(); ++i) {
    auto& row = mol.slices.members[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (MorId h : row) {
      if (h >= c.num_morphisms() || c.target(h) != diag.at(i)) {
        throw Error(ErrorCode::PreconditionViolated,
                    "slice over " + ic.object_name(i) + " contains a foreign arrow");
      }
    }
    if (!std::binary_search(row.begin(), row.end(), c.identity(diag.at(i)))) {
      throw Error(ErrorCode::PreconditionViolated,
                  "slice over " + ic.object_name(i) + " misses the identity");
    }
    for (MorId h : row) mol.objects.push_back({i, h});
  }
  // Reindexing closure: pull h in S_j back along u_d for d : i -> j.
  for (MorId d = 0; d < ic.num_morphisms(); ++d) {
    const ObjId i = ic.source(d);
    const ObjId j = ic.target(d);
    for (MorId h : mol.slices.members[j]) {
      bool found = false;
      for (MorId leg : mol.slices.members[i]) {
        for (MorId cover : c.hom(c.source(leg), c.source(h))) {
          if (is_pullback(c, h, diag.along(d), cover, leg)) {
            mol.pullbacks[{d, h}] = {leg, cover};
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        throw Error(ErrorCode::MissingPullback,
                    "(" + ic.morphism_name(d) + ", " + c.morphism_name(h) + ")");
      }
    }
  }
  const std::size_t n = mol.objects.size();
  std::vector<std::string> names;
  for (const auto& o : mol.objects) {
    names.push_back("(" + ic.object_name(o.index) + "," + c.morphism_name(o.h) + ")");
  }
  std::vector<Morphism> mors;
  std::map<std::tuple<ObjId, ObjId, MorId, MorId>, MorId> lookup;
  std::vector<MorId> identities(n, npos);
  for (ObjId x = 0; x < n; ++x) {
    for (ObjId y = 0; y < n; ++y) {
      const auto& [i0, h0] = mol.objects[x];
      const auto& [i1, h1] = mol.objects[y];
      for (MorId d : ic.hom(i0, i1)) {
        for (MorId g : c.hom(c.source(h0), c.source(h1))) {
          if (c.compose(h1, g) != c.compose(diag.along(d), h0)) continue;
          const MorId id = mors.size();
          lookup[{x, y, d, g}] = id;
          mors.push_back({"(" + ic.morphism_name(d) + "," + c.morphism_name(g) + ")", x, y});
          mol.morphisms.push_back({d, g});
          mol.vertical.push_back(ic.is_identity(d));
          mol.cartesian.push_back(is_pullback(c, h1, diag.along(d), g, h0));
          if (x == y && ic.is_identity(d) && c.is_identity(g)) identities[x] = id;
        }
      }
    }
  }
  const std::size_t m = mors.size();
  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (mors[f].target != mors[g].source) continue;
      const auto key = std::make_tuple(mors[f].source, mors[g].target,
                                       ic.compose(mol.morphisms[g].d, mol.morphisms[f].d),
                                       c.compose(mol.morphisms[g].g, mol.morphisms[f].g));
      table[g * m + f] = lookup.at(key);
    }
  }
  unique_names(mors);
  mol.category = share(FinCategory::trusted("Oplax(" + diag.name() + ")", std::move(names),
                                                    std::move(mors), std::move(identities),
                                                    std::move(table)));
  std::vector<ObjId> proj_obj;
  for (const auto& o : mol.objects) proj_obj.push_back(o.index);
  std::vector<MorId> proj_mor;
  for (const auto& f : mol.morphisms) proj_mor.push_back(f.d);
  mol.projection = FinFunctor::trusted(mol.category, diag.index(), std::move(proj_obj),
                                       std::move(proj_mor), "p");
  return mol;
}

Check check_ore(const MarkedOplaxColimit& mol) {
  const FinCategory& k = *mol.category;
  const auto name = [&](MorId f) { return k.morphism_name(f); };
  for (ObjId o = 0; o < k.num_objects(); ++o) {
    if (!mol.cartesian[k.identity(o)]) return Check::fail("identity " + name(k.identity(o)) +
                                                          " is not cartesian");
  }
  for (MorId t = 0; t < k.num_morphisms(); ++t) {
    if (!mol.cartesian[t]) continue;
    for (MorId s : k.arrows_into(k.source(t))) {
      if (mol.cartesian[s] && !mol.cartesian[k.compose(t, s)]) {
        return Check::fail("composite " + name(t) + " . " + name(s) + " is not cartesian");
      }
    }
  }
  // Right Ore condition: f : W -> Y, t : V -> Y cartesian close to
  // f . s' = t . f' with s' cartesian.
  for (MorId t = 0; t < k.num_morphisms(); ++t) {
    if (!mol.cartesian[t]) continue;
    const ObjId y = k.target(t);
    for (MorId f : k.arrows_into(y)) {
      bool closed = false;
      for (MorId s2 : k.arrows_into(k.source(f))) {
        if (!mol.cartesian[s2]) continue;
        for (MorId f2 : k.hom(k.source(s2), k.source(t))) {
          if (k.compose(f, s2) == k.compose(t, f2)) {
            closed = true;
            break;
          }
        }
        if (closed) break;
      }
      if (!closed) {
        return Check::fail("cospan " + name(f) + ", " + name(t) + " has no Ore square");
      }
    }
  }
  // Equalization: s . f = s . g with s cartesian gives f . t = g . t.
  for (MorId s = 0; s < k.num_morphisms(); ++s) {
    if (!mol.cartesian[s]) continue;
    for (ObjId x = 0; x < k.num_objects(); ++x) {
      const auto& par = k.hom(x, k.source(s));
      for (std::size_t p = 0; p < par.size(); ++p) {
        for (std::size_t q = p + 1; q < par.size(); ++q) {
          if (k.compose(s, par[p]) != k.compose(s, par[q])) continue;
          bool equalized = false;
          for (MorId t : k.arrows_into(x)) {
            if (mol.cartesian[t] && k.compose(par[p], t) == k.compose(par[q], t)) {
              equalized = true;
              break;
            }
          }
          if (!equalized) {
            return Check::fail("pair " + name(par[p]) + ", " + name(par[q]) +
                               " coequalized by " + name(s) + " is not equalized");
          }
        }
      }
    }
  }
  return Check::ok();
}

Check check_vertical_cartesian_factorization(const MarkedOplaxColimit& mol) {
  const FinCategory& k = *mol.category;
  for (MorId m = 0; m < k.num_morphisms(); ++m) {
    bool found = false;
    for (MorId v : k.arrows_out_of(k.source(m))) {
      if (!mol.vertical[v]) continue;
      for (MorId c : k.hom(k.target(v), k.target(m))) {
        if (mol.cartesian[c] && k.compose(c, v) == m) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return Check::fail(k.morphism_name(m) + " has no (vertical, cartesian) factorization");
  }
  return Check::ok();
}

// --- localization ------------------------------------------------------------------------

FractionCategory localize(const MarkedOplaxColimit& mol) {
  if (Check ore = check_ore(mol); !ore) throw Error(ErrorCode::OreFailed, ore.certificate);
  const FinCategory& k = *mol.category;
  FractionCategory fc;
  fc.mol = mol;
  std::vector<Span> spans;
  for (MorId s = 0; s < k.num_morphisms(); ++s) {
    if (!mol.cartesian[s]) continue;
    for (MorId f : k.arrows_out_of(k.source(s))) spans.push_back({s, f});
  }
  std::sort(spans.begin(), spans.end());
  std::map<Span, std::size_t> index;
  for (std::size_t i = 0; i < spans.size(); ++i) index[spans[i]] = i;
  detail::Partition classes(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto [s, f] = spans[i];
    for (MorId r : k.arrows_into(k.source(s))) {
      const MorId sr = k.compose(s, r);
      if (mol.cartesian[sr]) classes.unite(i, index.at({sr, k.compose(f, r)}));
    }
  }
  // Number classes by least member; spans are sorted so the least member of
  // a class is its representative.
  const auto labels = classes.labels();
  std::size_t count = 0;
  for (std::size_t l : labels) count = std::max(count, l + 1);
  fc.representative.assign(count, {});
  fc.members.assign(count, {});
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (fc.members[labels[i]].empty()) fc.representative[labels[i]] = spans[i];
    fc.members[labels[i]].push_back(spans[i]);
    fc.class_of[spans[i]] = labels[i];
  }
  // Order morphisms by (source, target, representative) for stable output.
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  const auto key = [&](std::size_t cls) {
    const Span& r = fc.representative[cls];
    return std::make_tuple(k.target(r.back), k.target(r.forth), r);
  };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });
  std::vector<std::size_t> renumber(count);
  for (std::size_t i = 0; i < count; ++i) renumber[order[i]] = i;
  {
    std::vector<Span> rep(count);
    std::vector<std::vector<Span>> mem(count);
    for (std::size_t c = 0; c < count; ++c) {
      rep[renumber[c]] = fc.representative[c];
      mem[renumber[c]] = std::move(fc.members[c]);
    }
    fc.representative = std::move(rep);
    fc.members = std::move(mem);
    for (auto& [span, cls] : fc.class_of) cls = renumber[cls];
  }

  std::vector<std::string> obj_names;
  for (ObjId o = 0; o < k.num_objects(); ++o) obj_names.push_back(k.object_name(o));
  std::vector<Morphism> mors;
  for (const Span& r : fc.representative) {
    std::string name = k.morphism_name(r.forth);
    if (!k.is_identity(r.back)) name += "." + k.morphism_name(r.back) + "^-1";
    mors.push_back({name, k.target(r.back), k.target(r.forth)});
  }
  std::vector<MorId> identities;
  for (ObjId o = 0; o < k.num_objects(); ++o) {
    identities.push_back(fc.class_of.at({k.identity(o), k.identity(o)}));
  }
  // Composition through Ore squares, checked on every pair of members.
  const auto compose_spans = [&](const Span& first, const Span& second, bool all_squares) {
    std::set<MorId> results;
    const auto [s, f] = first;
    const auto [t, g] = second;
    for (MorId s2 : k.arrows_into(k.source(s))) {
      if (!mol.cartesian[s2]) continue;
      for (MorId f2 : k.hom(k.source(s2), k.source(t))) {
        if (k.compose(f, s2) != k.compose(t, f2)) continue;
        results.insert(fc.class_of.at({k.compose(s, s2), k.compose(g, f2)}));
        if (!all_squares) return results;
      }
    }
    return results;
  };
  const std::size_t m = count;
  std::vector<MorId> table(m * m, npos);
  for (MorId b = 0; b < m; ++b) {
    for (MorId a = 0; a < m; ++a) {
      if (mors[a].target != mors[b].source) continue;
      const auto found = compose_spans(fc.representative[a], fc.representative[b], true);
      if (found.size() != 1) {
        throw InvariantViolation("fraction composite depends on the Ore square: " + mors[b].name +
                                 " . " + mors[a].name);
      }
      const MorId result = *found.begin();
      for (const Span& x : fc.members[a]) {
        for (const Span& y : fc.members[b]) {
          const auto other = compose_spans(x, y, false);
          if (other.size() != 1 || *other.begin() != result) {
            throw InvariantViolation("fraction composite depends on representatives: " +
                                     mors[b].name + " . " + mors[a].name);
          }
        }
      }
      table[b * m + a] = result;
    }
  }
  unique_names(mors);
  try {
    fc.category = share(FinCategory::from_tables(
        "Frac(" + mol.diagram.name() + ")", std::move(obj_names), std::move(mors),
        std::move(identities), std::move(table)));
  } catch (const Error& e) {
    throw InvariantViolation(std::string("fraction category is not a category: ") + e.what());
  }
  // Slices and their inclusions.
  const FinCategory& ic = *mol.diagram.index();
  for (ObjId i = 0; i < ic.num_objects(); ++i) {
    std::vector<ObjId> objs;
    for (ObjId o = 0; o < k.num_objects(); ++o) {
      if (mol.objects[o].index == i) objs.push_back(o);
    }
    std::vector<MorId> vert;
    for (MorId f = 0; f < k.num_morphisms(); ++f) {
      if (mol.objects[k.source(f)].index == i && mol.morphisms[f].d == ic.identity(i)) {
        vert.push_back(f);
      }
    }
    auto [slice, inc] = subcategory(mol.category, objs, vert,
                                    "S(" + ic.object_name(i) + ")");
    std::vector<MorId> images;
    for (MorId f : vert) images.push_back(fc.class_of.at({k.identity(k.source(f)), f}));
    fc.slices.push_back(slice);
    fc.inclusions.push_back(FinFunctor::make(slice, fc.category, objs, images,
                                             "q_" + ic.object_name(i)));
    fc.slice_objects.push_back(objs);
  }
  return fc;
}

// --- global elements ---------------------------------------------------------------------

namespace {

struct ProductObject {
  ObjId object;  // in the oplax colimit
  MorId second;  // projection to c
};

std::optional<ProductObject> product_object(const MarkedOplaxColimit& mol, ObjId i, ObjId c) {
  const FinCategory& cat = *mol.diagram.target();
  for (MorId h : mol.slices.members[i]) {
    for (MorId p2 : cat.hom(cat.source(h), c)) {
      if (is_product(cat, mol.diagram.at(i), c, h, p2)) {
        return ProductObject{mol.object_of(i, h), p2};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<PseudoGlobalElement> pseudocolim_global_elements(const FractionCategory& fc, ObjId c) {
  const MarkedOplaxColimit& mol = fc.mol;
  const FinCategory& cat = *mol.diagram.target();
  const FinCategory& k = *mol.category;
  const ObjId i0 = 0;
  const auto prod = product_object(mol, i0, c);
  if (!prod) {
    throw Error(ErrorCode::MissingProduct, "no projection " + cat.object_name(mol.diagram.at(i0)) +
                                               " x " + cat.object_name(c) + " in the slice system");
  }
  const ObjId terminal = mol.object_of(i0, cat.identity(mol.diagram.at(i0)));
  std::vector<PseudoGlobalElement> out;
  for (MorId cls : fc.category->hom(terminal, prod->object)) {
    bool found = false;
    for (const Span& sp : fc.members[cls]) {
      const ObjId w = k.source(sp.back);
      const OplaxObject& wo = mol.objects[w];
      if (!cat.is_identity(wo.h)) continue;
      if (mol.morphisms[sp.back].d != mol.morphisms[sp.forth].d) continue;
      out.push_back({cls, wo.index, cat.compose(prod->second, mol.morphisms[sp.forth].g)});
      found = true;
      break;
    }
    if (!found) {
      throw InvariantViolation("global element " + fc.category->morphism_name(cls) +
                               " has no vertical representative");
    }
  }
  return out;
}

std::size_t ColimitHom::class_of(ObjId i, MorId a) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(i, a));
  if (it == pairs.end() || *it != std::make_pair(i, a)) return npos;
  return label[static_cast<std::size_t>(it - pairs.begin())];
}

ColimitHom colimit_hom(const CofilteredDiagram& diag, ObjId c) {
  const FinCategory& ic = *diag.index();
  const FinCategory& cat = *diag.target();
  ColimitHom out;
  for (ObjId i = 0; i < ic.num_objects(); ++i) {
    for (MorId a : cat.hom(diag.at(i), c)) out.pairs.emplace_back(i, a);
  }
  detail::Partition part(out.pairs.size());
  const auto pos = [&](ObjId i, MorId a) {
    return static_cast<std::size_t>(
        std::lower_bound(out.pairs.begin(), out.pairs.end(), std::make_pair(i, a)) -
        out.pairs.begin());
  };
  for (std::size_t p = 0; p < out.pairs.size(); ++p) {
    const auto [i, a] = out.pairs[p];
    for (MorId e : ic.arrows_into(i)) part.unite(p, pos(ic.source(e), cat.compose(a, diag.along(e))));
  }
  out.label = part.labels();
  out.count = part.num_classes();
  return out;
}

Check canonical_reindexing_initial(const FractionCategory& fc, const CofilteredDiagram& diag) {
  const FinCategory& ic = *diag.index();
  const CategoryRef& cref = diag.target();
  const FinCategory& cat = *cref;
  std::vector<ColimitHom> homs;
  std::vector<std::vector<std::string>> elements(cat.num_objects());
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    homs.push_back(colimit_hom(diag, c));
    for (std::size_t e = 0; e < homs[c].count; ++e) {
      elements[c].push_back("[" + std::to_string(e) + "]");
    }
    for (std::size_t p = 0; p < homs[c].pairs.size(); ++p) {
      const auto [i, a] = homs[c].pairs[p];
      elements[c][homs[c].label[p]] = "[" + ic.object_name(i) + "," + cat.morphism_name(a) + "]";
    }
  }
  // Covariant action of m : c -> c' as a presheaf on C^op.
  std::vector<std::vector<std::size_t>> actions(cat.num_morphisms());
  for (MorId m = 0; m < cat.num_morphisms(); ++m) {
    const ObjId c = cat.source(m);
    actions[m].assign(homs[c].count, npos);
    for (std::size_t p = 0; p < homs[c].pairs.size(); ++p) {
      const auto [i, a] = homs[c].pairs[p];
      actions[m][homs[c].label[p]] = homs[cat.target(m)].class_of(i, cat.compose(m, a));
    }
  }
  const auto cop = share(opposite(cat));
  const FinPresheaf gamma = FinPresheaf::make(cop, std::move(elements), std::move(actions),
                                              "Gamma");
  const Elements el = category_of_elements(gamma);
  const auto g = share(opposite(*el.category));
  std::vector<ObjId> objs;
  for (ObjId i = 0; i < ic.num_objects(); ++i) {
    objs.push_back(el.object(diag.at(i), homs[diag.at(i)].class_of(i, cat.identity(diag.at(i)))));
  }
  std::vector<MorId> mors;
  for (MorId d = 0; d < ic.num_morphisms(); ++d) {
    const ObjId i = ic.source(d);
    mors.push_back(el.lift(diag.along(d), homs[diag.at(i)].class_of(i, cat.identity(diag.at(i)))));
  }
  const FinFunctor tilde = FinFunctor::make(diag.index(), g, std::move(objs), std::move(mors),
                                            "p~");
  // Cross-check the element counts against the fraction category.
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    if (!product_object(fc.mol, 0, c)) continue;
    if (pseudocolim_global_elements(fc, c).size() != homs[c].count) {
      throw InvariantViolation("global elements of " + cat.object_name(c) +
                               " disagree between the fraction category and the colimit");
    }
  }
  Check verdict = is_initial_functor(tilde);
  if (!verdict) throw InvariantViolation("canonical reindexing is not initial: " + verdict.certificate);
  return verdict;
}

// --- pro-objects -------------------------------------------------------------------------

ProObject ProObject::make(FinFunctor diagram) {
  if (Check c = is_cofiltered(*diagram.domain()); !c) {
    throw Error(ErrorCode::NotCofiltered, diagram.domain()->name() + ": " + c.certificate);
  }
  ProObject p;
  p.diagram_ = std::move(diagram);
  return p;
}

ProObject ProObject::singleton(CategoryRef a, ObjId obj) {
  return make(FinFunctor::constant(fixtures::one(), std::move(a), obj));
}

ProHom pro_hom(const ProObject& x, const ProObject& y) {
  if (!(*x.base() == *y.base())) {
    throw Error(ErrorCode::PreconditionViolated, "pro-objects live in different categories");
  }
  const FinCategory& a = *x.base();
  const FinCategory& ic = *x.index();
  const FinCategory& jc = *y.index();
  const FinFunctor& xf = x.diagram();
  const FinFunctor& yf = y.diagram();
  const std::size_t nj = jc.num_objects();
  ProHom out;
  // Odometer over reindexings, then over components.
  std::vector<ObjId> f(nj, 0);
  const auto compatible = [&](const ProMorphism& p) {
    for (MorId d = 0; d < jc.num_morphisms(); ++d) {
      const ObjId j = jc.source(d);
      const ObjId j2 = jc.target(d);
      const MorId left = a.compose(yf.on_morphism(d), p.components[j]);
      bool found = false;
      for (ObjId i = 0; i < ic.num_objects() && !found; ++i) {
        for (MorId u : ic.hom(i, p.reindex[j])) {
          for (MorId u2 : ic.hom(i, p.reindex[j2])) {
            if (a.compose(left, xf.on_morphism(u)) ==
                a.compose(p.components[j2], xf.on_morphism(u2))) {
              found = true;
              break;
            }
          }
          if (found) break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  while (true) {
    std::vector<const std::vector<MorId>*> choices;
    bool empty = false;
    for (ObjId j = 0; j < nj; ++j) {
      choices.push_back(&a.hom(xf.on_object(f[j]), yf.on_object(j)));
      empty |= choices.back()->empty();
    }
    if (!empty) {
      std::vector<std::size_t> pick(nj, 0);
      while (true) {
        ProMorphism p{f, {}};
        for (ObjId j = 0; j < nj; ++j) p.components.push_back((*choices[j])[pick[j]]);
        if (compatible(p)) out.candidates.push_back(std::move(p));
        std::size_t j = 0;
        while (j < nj && ++pick[j] == choices[j]->size()) pick[j++] = 0;
        if (j == nj) break;
      }
    }
    std::size_t j = 0;
    while (j < nj && ++f[j] == ic.num_objects()) f[j++] = 0;
    if (j == nj) break;
  }
  std::sort(out.candidates.begin(), out.candidates.end());
  const auto related = [&](const ProMorphism& p, const ProMorphism& q) {
    for (ObjId j = 0; j < nj; ++j) {
      bool found = false;
      for (ObjId i = 0; i < ic.num_objects() && !found; ++i) {
        for (MorId d : ic.hom(i, p.reindex[j])) {
          for (MorId d2 : ic.hom(i, q.reindex[j])) {
            if (a.compose(p.components[j], xf.on_morphism(d)) ==
                a.compose(q.components[j], xf.on_morphism(d2))) {
              found = true;
              break;
            }
          }
          if (found) break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  detail::Partition part(out.candidates.size());
  for (std::size_t p = 0; p < out.candidates.size(); ++p) {
    for (std::size_t q = p + 1; q < out.candidates.size(); ++q) {
      if (!part.same(p, q) && related(out.candidates[p], out.candidates[q])) part.unite(p, q);
    }
  }
  out.class_of = part.labels();
  out.representatives.resize(part.num_classes());
  std::vector<bool> seen(part.num_classes(), false);
  for (std::size_t p = 0; p < out.candidates.size(); ++p) {
    if (!seen[out.class_of[p]]) {
      seen[out.class_of[p]] = true;
      out.representatives[out.class_of[p]] = out.candidates[p];
    }
  }
  return out;
}

ProObject left_pro_adjoint_on_representables(const FinFunctor& u, const FinPresheaf& f) {
  const CategoryRef& dref = u.codomain();
  const FinCategory& d = *dref;
  const FinCategory& c = *u.domain();
  struct Node {
    ObjId d;
    PresheafMap a;
    std::size_t k;
  };
  std::vector<Node> nodes;
  std::vector<FinPresheaf> reps;
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    reps.push_back(restrict(representable(dref, o), u));
    std::size_t k = 0;
    for (auto& a : all_maps(f, reps.back())) nodes.push_back({o, std::move(a), k++});
  }
  std::vector<std::string> names;
  for (const auto& n : nodes) names.push_back("(" + d.object_name(n.d) + ",a" + std::to_string(n.k) + ")");
  // m : d -> d' acts on u* y(d)(x) = Hom(u x, d) by postcomposition.
  const auto pushes = [&](MorId m, const Node& from, const Node& to) {
    for (ObjId x = 0; x < c.num_objects(); ++x) {
      const auto& src_hom = d.hom(u.on_object(x), from.d);
      const auto& dst_hom = d.hom(u.on_object(x), to.d);
      for (std::size_t v = 0; v < f.size(x); ++v) {
        const MorId image = d.compose(m, src_hom[from.a.at(x, v)]);
        if (dst_hom[to.a.at(x, v)] != image) return false;
      }
    }
    return true;
  };
  std::vector<Morphism> mors;
  std::vector<MorId> base_of;
  std::map<std::tuple<std::size_t, std::size_t, MorId>, MorId> lookup;
  std::vector<MorId> identities(nodes.size(), npos);
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      for (MorId m : d.hom(nodes[p].d, nodes[q].d)) {
        if (!pushes(m, nodes[p], nodes[q])) continue;
        lookup[{p, q, m}] = mors.size();
        if (p == q && d.is_identity(m)) identities[p] = mors.size();
        mors.push_back({d.morphism_name(m) + ":" + names[p] + "->" + names[q], p, q});
        base_of.push_back(m);
      }
    }
  }
  const std::size_t mm = mors.size();
  std::vector<MorId> table(mm * mm, npos);
  for (MorId g = 0; g < mm; ++g) {
    for (MorId h = 0; h < mm; ++h) {
      if (mors[h].target != mors[g].source) continue;
      table[g * mm + h] =
          lookup.at({mors[h].source, mors[g].target, d.compose(base_of[g], base_of[h])});
    }
  }
  std::vector<ObjId> proj;
  for (const auto& n : nodes) proj.push_back(n.d);
  unique_names(mors);
  auto index = share(FinCategory::trusted(f.name() + "|" + u.name(), std::move(names),
                                                  std::move(mors), std::move(identities),
                                                  std::move(table)));
  return ProObject::make(FinFunctor::trusted(index, dref, std::move(proj), std::move(base_of),
                                             "pi_" + f.name()));
}

FaithfulnessReport pro_adjoint_faithful_check(const FractionCategory& fc) {
  const FinCategory& k = *fc.category;
  const MarkedOplaxColimit& mol = fc.mol;
  const FinCategory& cat = *mol.diagram.target();
  std::vector<ObjId> probes;
  for (ObjId i = 0; i < mol.diagram.index()->num_objects(); ++i) {
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      if (auto p = product_object(mol, i, c)) probes.push_back(p->object);
    }
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  FaithfulnessReport report;
  for (ObjId x = 0; x < k.num_objects(); ++x) {
    for (ObjId y = 0; y < k.num_objects(); ++y) {
      const auto& par = k.hom(x, y);
      for (std::size_t p = 0; p < par.size(); ++p) {
        for (std::size_t q = p + 1; q < par.size(); ++q) {
          ++report.pairs_checked;
          bool separated = false;
          for (ObjId probe : probes) {
            for (MorId z : k.hom(y, probe)) {
              if (k.compose(z, par[p]) != k.compose(z, par[q])) {
                separated = true;
                break;
              }
            }
            if (separated) break;
          }
          if (!separated) {
            throw InvariantViolation("left pro-adjoint identifies " + k.morphism_name(par[p]) +
                                     " and " + k.morphism_name(par[q]));
          }
        }
      }
    }
  }
  report.verdict = Check::ok();
  return report;
}

}  // namespace toposfactor

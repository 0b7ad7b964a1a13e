#include "toposfactor/kan.hpp"

#include <algorithm>
#include <map>

#include "partition.hpp"

namespace toposfactor {

// --- left Kan extension ------------------------------------------------------------

std::size_t LanData::class_of_triple(ObjId d, ObjId c, MorId h, std::size_t x) const {
  const auto& ts = triples[d];
  auto it = std::lower_bound(ts.begin(), ts.end(), std::make_tuple(c, h, x));
  return class_of[d][static_cast<std::size_t>(it - ts.begin())];
}

LanData lan_data(const FinPresheaf& x, const FinFunctor& u) {
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  LanData out;
  out.triples.resize(d.num_objects());
  out.class_of.resize(d.num_objects());
  std::vector<std::vector<std::string>> els(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    auto& ts = out.triples[o];
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      for (MorId h : d.hom(o, u.on_object(a))) {
        for (std::size_t e = 0; e < x.size(a); ++e) ts.emplace_back(a, h, e);
      }
    }
    // Triples are generated in sorted order: a, then h (hom lists are sorted), then e.
    auto idx = [&](ObjId a, MorId h, std::size_t e) {
      return static_cast<std::size_t>(
          std::lower_bound(ts.begin(), ts.end(), std::make_tuple(a, h, e)) - ts.begin());
    };
    detail::Partition p(ts.size());
    for (MorId k = 0; k < c.num_morphisms(); ++k) {
      if (c.is_identity(k)) continue;
      const ObjId s = c.source(k);
      const ObjId t = c.target(k);
      for (MorId h : d.hom(o, u.on_object(s))) {
        const MorId uh = d.compose(u.on_morphism(k), h);
        for (std::size_t e = 0; e < x.size(t); ++e) p.unite(idx(s, h, x.act(k, e)), idx(t, uh, e));
      }
    }
    out.class_of[o] = p.labels();
    els[o].resize(p.num_classes());
    std::vector<bool> named(p.num_classes(), false);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::size_t l = out.class_of[o][i];
      if (named[l]) continue;
      named[l] = true;
      const auto& [a, h, e] = ts[i];
      els[o][l] = "[" + c.object_name(a) + "," + d.morphism_name(h) + "," + x.element_name(a, e) +
                  "]";
    }
  }
  std::vector<std::vector<std::size_t>> acts(d.num_morphisms());
  for (MorId g = 0; g < d.num_morphisms(); ++g) {
    const ObjId s = d.source(g);
    const ObjId t = d.target(g);
    acts[g].assign(els[t].size(), 0);
    for (std::size_t i = 0; i < out.triples[t].size(); ++i) {
      const auto& [a, h, e] = out.triples[t][i];
      acts[g][out.class_of[t][i]] = out.class_of_triple(s, a, d.compose(h, g), e);
    }
  }
  std::string name = x.name().empty() ? std::string{} : "Lan " + x.name();
  out.value = FinPresheaf::trusted(u.codomain(), std::move(els), std::move(acts), std::move(name));
  return out;
}

FinPresheaf lan(const FinPresheaf& x, const FinFunctor& u) { return lan_data(x, u).value; }

PresheafMap lan(const PresheafMap& m, const FinFunctor& u) {
  const LanData src = lan_data(m.source(), u);
  const LanData tgt = lan_data(m.target(), u);
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    comps[o].assign(src.value.size(o), 0);
    for (std::size_t i = 0; i < src.triples[o].size(); ++i) {
      const auto& [a, h, e] = src.triples[o][i];
      comps[o][src.class_of[o][i]] = tgt.class_of_triple(o, a, h, m.at(a, e));
    }
  }
  return PresheafMap::trusted(src.value, tgt.value, std::move(comps));
}

// --- right Kan extension ------------------------------------------------------------

RanData ran_data(const FinPresheaf& x, const FinFunctor& u) {
  const FinCategory& d = *u.codomain();
  RanData out;
  out.slice_objects.resize(d.num_objects());
  out.families.resize(d.num_objects());
  std::vector<std::vector<std::string>> els(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    const CommaCategory sl = slice(u, o);
    for (const auto& obj : sl.objects) out.slice_objects[o].emplace_back(obj.a, obj.h);
    out.families[o] = global_elements(restrict(x, sl.proj_left));
    for (const auto& fam : out.families[o]) {
      std::string name = "{";
      for (std::size_t i = 0; i < fam.family.size(); ++i) {
        if (i) name += ",";
        name += x.element_name(out.slice_objects[o][i].first, fam.family[i]);
      }
      els[o].push_back(name + "}");
    }
  }
  std::vector<std::vector<std::size_t>> acts(d.num_morphisms());
  for (MorId g = 0; g < d.num_morphisms(); ++g) {
    const ObjId s = d.source(g);
    const ObjId t = d.target(g);
    const auto& tobjs = out.slice_objects[t];
    for (const auto& fam : out.families[t]) {
      GlobalElement img;
      for (const auto& [a, h] : out.slice_objects[s]) {
        const auto key = std::make_pair(a, d.compose(g, h));
        const auto pos = std::lower_bound(tobjs.begin(), tobjs.end(), key) - tobjs.begin();
        img.family.push_back(fam.family[static_cast<std::size_t>(pos)]);
      }
      const auto& sf = out.families[s];
      acts[g].push_back(static_cast<std::size_t>(std::lower_bound(sf.begin(), sf.end(), img) -
                                                 sf.begin()));
    }
  }
  std::string name = x.name().empty() ? std::string{} : "Ran " + x.name();
  out.value = FinPresheaf::trusted(u.codomain(), std::move(els), std::move(acts), std::move(name));
  return out;
}

FinPresheaf ran(const FinPresheaf& x, const FinFunctor& u) { return ran_data(x, u).value; }

PresheafMap ran(const PresheafMap& m, const FinFunctor& u) {
  const RanData src = ran_data(m.source(), u);
  const RanData tgt = ran_data(m.target(), u);
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    for (const auto& fam : src.families[o]) {
      GlobalElement img;
      for (std::size_t i = 0; i < fam.family.size(); ++i) {
        img.family.push_back(m.at(src.slice_objects[o][i].first, fam.family[i]));
      }
      const auto& tf = tgt.families[o];
      comps[o].push_back(
          static_cast<std::size_t>(std::lower_bound(tf.begin(), tf.end(), img) - tf.begin()));
    }
  }
  return PresheafMap::trusted(src.value, tgt.value, std::move(comps));
}

// --- components presheaf --------------------------------------------------------------

FinPresheaf components_presheaf(const FinFunctor& u) {
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  std::vector<CommaComponents> cc;
  std::vector<std::vector<std::string>> els(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    cc.push_back(coslice_components(o, u));
    els[o].resize(cc.back().components.count);
    std::vector<bool> named(els[o].size(), false);
    for (std::size_t i = 0; i < cc.back().objects.size(); ++i) {
      const std::size_t l = cc.back().components.label[i];
      if (named[l]) continue;
      named[l] = true;
      const auto& [a, h] = cc.back().objects[i];
      els[o][l] = "[" + c.object_name(a) + "," + d.morphism_name(h) + "]";
    }
  }
  std::vector<std::vector<std::size_t>> acts(d.num_morphisms());
  for (MorId g = 0; g < d.num_morphisms(); ++g) {
    const ObjId s = d.source(g);
    const ObjId t = d.target(g);
    acts[g].assign(els[t].size(), 0);
    for (std::size_t i = 0; i < cc[t].objects.size(); ++i) {
      const auto& [a, h] = cc[t].objects[i];
      acts[g][cc[t].components.label[i]] = cc[s].component_of(a, d.compose(h, g));
    }
  }
  return FinPresheaf::trusted(u.codomain(), std::move(els), std::move(acts), "Pi");
}

// --- units and counits -------------------------------------------------------------------

PresheafMap lan_unit(const FinPresheaf& x, const FinFunctor& u) {
  const LanData l = lan_data(x, u);
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    const ObjId ua = u.on_object(a);
    for (std::size_t e = 0; e < x.size(a); ++e) {
      comps[a].push_back(l.class_of_triple(ua, a, d.identity(ua), e));
    }
  }
  return PresheafMap::trusted(x, restrict(l.value, u), std::move(comps));
}

PresheafMap lan_counit(const FinPresheaf& y, const FinFunctor& u) {
  const LanData l = lan_data(restrict(y, u), u);
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    comps[o].assign(l.value.size(o), 0);
    for (std::size_t i = 0; i < l.triples[o].size(); ++i) {
      const auto& [a, h, e] = l.triples[o][i];
      comps[o][l.class_of[o][i]] = y.act(h, e);
    }
  }
  return PresheafMap::trusted(l.value, y, std::move(comps));
}

PresheafMap ran_unit(const FinPresheaf& y, const FinFunctor& u) {
  const RanData r = ran_data(restrict(y, u), u);
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(d.num_objects());
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    for (std::size_t e = 0; e < y.size(o); ++e) {
      GlobalElement fam;
      for (const auto& [a, h] : r.slice_objects[o]) fam.family.push_back(y.act(h, e));
      const auto& fs = r.families[o];
      comps[o].push_back(
          static_cast<std::size_t>(std::lower_bound(fs.begin(), fs.end(), fam) - fs.begin()));
    }
  }
  return PresheafMap::trusted(y, r.value, std::move(comps));
}

PresheafMap ran_counit(const FinPresheaf& x, const FinFunctor& u) {
  const RanData r = ran_data(x, u);
  const FinCategory& c = *u.domain();
  const FinCategory& d = *u.codomain();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    const ObjId ua = u.on_object(a);
    const auto& objs = r.slice_objects[ua];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(objs.begin(), objs.end(), std::make_pair(a, d.identity(ua))) -
        objs.begin());
    for (const auto& fam : r.families[ua]) comps[a].push_back(fam.family[pos]);
  }
  return PresheafMap::trusted(restrict(r.value, u), x, std::move(comps));
}

namespace {

Check is_identity_map(const PresheafMap& m, const std::string& what) {
  if (m.components() == PresheafMap::identity(m.source()).components()) return Check::ok();
  return Check::fail("triangle identity fails: " + what);
}

}  // namespace

AdjunctionWitness unit_counit(const FinFunctor& u, const FinPresheaf& x, const FinPresheaf& y) {
  AdjunctionWitness w;
  w.lan_unit = lan_unit(x, u);
  w.lan_counit = lan_counit(y, u);
  w.ran_unit = ran_unit(y, u);
  w.ran_counit = ran_counit(x, u);
  const FinPresheaf uy = restrict(y, u);
  const Check checks[] = {
      is_identity_map(compose(lan_counit(lan(x, u), u), lan(w.lan_unit, u)),
                      "eps_{Lan X} . Lan(eta_X)"),
      is_identity_map(compose(restrict(w.lan_counit, u), lan_unit(uy, u)),
                      "u*(eps_Y) . eta_{u*Y}"),
      is_identity_map(compose(ran_counit(uy, u), restrict(w.ran_unit, u)),
                      "eps_{u*Y} . u*(eta_Y)"),
      is_identity_map(compose(ran(w.ran_counit, u), ran_unit(ran(x, u), u)),
                      "Ran(eps_X) . eta_{Ran X}"),
  };
  for (const auto& c : checks) {
    if (!c) {
      w.triangles = c;
      return w;
    }
  }
  w.triangles = Check::ok();
  return w;
}

Check is_connected_essential(const FinFunctor& u) {
  const FinCategory& d = *u.codomain();
  for (ObjId o = 0; o < d.num_objects(); ++o) {
    const PresheafMap eps = lan_counit(representable(u.codomain(), o), u);
    if (!eps.is_isomorphism()) {
      return Check::fail("counit of Lan -| u* is not invertible at y(" + d.object_name(o) + ")");
    }
  }
  return Check::ok();
}

PresheafMap lan_transpose(const FinFunctor& u, const FinPresheaf& e, const PresheafMap& phi) {
  return compose(lan_counit(e, u), lan(phi, u));
}

Check frobenius_check(const FinFunctor& u, const PresheafMap& phi, const PresheafMap& b) {
  const FinPresheaf& e = b.target();
  const PresheafMap ub = restrict(b, u);
  const Cone p = pullback(phi, ub);  // nodes: F, u*E', u*E
  const PresheafMap transpose = lan_transpose(u, e, phi);
  const Cone rhs = pullback(transpose, b);  // nodes: Lan F, E', E
  const PresheafMap l0 = lan(p.legs[0], u);
  const PresheafMap l1 = compose(lan_counit(b.source(), u), lan(p.legs[1], u));
  const PresheafMap l2 = compose(transpose, l0);
  const PresheafMap cmp = factor_through_limit(rhs, l0.source(), {l0, l1, l2});
  if (!cmp.is_isomorphism()) {
    const FinCategory& d = *u.codomain();
    for (ObjId o = 0; o < d.num_objects(); ++o) {
      if (cmp.source().size(o) != cmp.target().size(o)) {
        return Check::fail("Frobenius comparison at '" + d.object_name(o) + "': " +
                           std::to_string(cmp.source().size(o)) + " vs " +
                           std::to_string(cmp.target().size(o)) + " elements");
      }
    }
    return Check::fail("Frobenius comparison is not injective");
  }
  return Check::ok();
}

}  // namespace toposfactor

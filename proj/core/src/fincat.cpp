#include "toposfactor/fincat.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace toposfactor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingComposite: return "MissingComposite";
    case ErrorCode::NonAssociative: return "NonAssociative";
    case ErrorCode::BrokenIdentity: return "BrokenIdentity";
    case ErrorCode::IllTypedComposite: return "IllTypedComposite";
    case ErrorCode::UnmappedMorphism: return "UnmappedMorphism";
    case ErrorCode::BrokenComposition: return "BrokenComposition";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::NotNatural: return "NotNatural";
    case ErrorCode::NoFiller: return "NoFiller";
    case ErrorCode::NotFunctorial: return "NotFunctorial";
    case ErrorCode::NotTerminallyConnected: return "NotTerminallyConnected";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotASieve: return "NotASieve";
    case ErrorCode::NotATopology: return "NotATopology";
    case ErrorCode::NoTerminalObject: return "NoTerminalObject";
    case ErrorCode::NotLocalSite: return "NotLocalSite";
    case ErrorCode::NotComorphism: return "NotComorphism";
    case ErrorCode::NotCofiltered: return "NotCofiltered";
    case ErrorCode::MissingPullback: return "MissingPullback";
    case ErrorCode::OreFailed: return "OreFailed";
    case ErrorCode::MissingProduct: return "MissingProduct";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedName: return "UnresolvedName";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

// --- FinCategory -------------------------------------------------------------


FinCategory FinCategory::trusted(std::string name, std::vector<std::string> objects,
                                 std::vector<Morphism> morphisms,
                                 std::vector<MorId> identities,
                                 std::vector<MorId> table) {
  FinCategory c;
  c.name_ = std::move(name);
  c.objects_ = std::move(objects);
  c.morphisms_ = std::move(morphisms);
  c.identities_ = std::move(identities);
  c.table_.resize(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    c.table_[i] = table[i] == npos ? kNoComposite : static_cast<std::uint32_t>(table[i]);
  }
  c.index();
  return c;
}

FinCategory FinCategory::from_tables(std::string name, std::vector<std::string> objects,
                                     std::vector<Morphism> morphisms,
                                     std::vector<MorId> identities,
                                     std::vector<MorId> table) {
  const std::size_t m = morphisms.size();
  if (identities.size() != objects.size() || table.size() != m * m) {
    throw Error(ErrorCode::IllTypedComposite,
                "table dimensions do not match category '" + name + "'");
  }
  for (const auto& f : morphisms) {
    if (f.source >= objects.size() || f.target >= objects.size()) {
      throw Error(ErrorCode::UnknownName, "morphism '" + f.name + "' has an unknown endpoint");
    }
  }
  FinCategory c = trusted(std::move(name), std::move(objects), std::move(morphisms),
                          std::move(identities), std::move(table));
  if (Check laws = c.check_laws(); !laws) {
    const auto& cert = laws.certificate;
    ErrorCode code = ErrorCode::IllTypedComposite;
    if (cert.rfind("NonAssociative", 0) == 0) code = ErrorCode::NonAssociative;
    else if (cert.rfind("BrokenIdentity", 0) == 0) code = ErrorCode::BrokenIdentity;
    else if (cert.rfind("MissingComposite", 0) == 0) code = ErrorCode::MissingComposite;
    throw Error(code, cert.substr(cert.find(':') + 2));
  }
  return c;
}

void FinCategory::index() {
  const std::size_t n = objects_.size();
  homs_.assign(n * n, {});
  into_.assign(n, {});
  out_of_.assign(n, {});
  object_index_.clear();
  morphism_index_.clear();
  for (ObjId a = 0; a < n; ++a) object_index_.emplace(objects_[a], a);
  for (MorId f = 0; f < morphisms_.size(); ++f) {
    const auto& mf = morphisms_[f];
    homs_[mf.source * n + mf.target].push_back(f);
    morphism_index_.emplace(mf.name, f);
  }
  for (ObjId a = 0; a < n; ++a) {
    for (ObjId b = 0; b < n; ++b) {
      for (MorId f : homs_[a * n + b]) into_[b].push_back(f);
      for (MorId f : homs_[b * n + a]) out_of_[b].push_back(f);
    }
  }
  // out_of_ was filled per (b, a) above; rebuild in source-major order.
  for (ObjId a = 0; a < n; ++a) {
    out_of_[a].clear();
    for (ObjId b = 0; b < n; ++b) {
      for (MorId f : homs_[a * n + b]) out_of_[a].push_back(f);
    }
  }
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<MorId> FinCategory::find_morphism(std::string_view name) const {
  auto it = morphism_index_.find(std::string(name));
  if (it == morphism_index_.end()) return std::nullopt;
  return it->second;
}

ObjId FinCategory::object(std::string_view name) const {
  if (auto a = find_object(name)) return *a;
  throw Error(ErrorCode::UnknownName,
              "no object '" + std::string(name) + "' in category '" + name_ + "'");
}

MorId FinCategory::morphism_id(std::string_view name) const {
  if (auto f = find_morphism(name)) return *f;
  throw Error(ErrorCode::UnknownName,
              "no morphism '" + std::string(name) + "' in category '" + name_ + "'");
}

std::optional<MorId> FinCategory::inverse(MorId f) const {
  for (MorId g : hom(target(f), source(f))) {
    if (compose(g, f) == identity(source(f)) && compose(f, g) == identity(target(f))) {
      return g;
    }
  }
  return std::nullopt;
}

bool FinCategory::is_isomorphism(MorId f) const { return inverse(f).has_value(); }

std::optional<ObjId> FinCategory::terminal_object() const {
  for (ObjId t = 0; t < num_objects(); ++t) {
    bool ok = true;
    for (ObjId a = 0; a < num_objects() && ok; ++a) ok = hom(a, t).size() == 1;
    if (ok) return t;
  }
  return std::nullopt;
}

std::optional<ObjId> FinCategory::initial_object() const {
  for (ObjId t = 0; t < num_objects(); ++t) {
    bool ok = true;
    for (ObjId a = 0; a < num_objects() && ok; ++a) ok = hom(t, a).size() == 1;
    if (ok) return t;
  }
  return std::nullopt;
}

Check FinCategory::check_laws() const {
  const std::size_t m = morphisms_.size();
  for (ObjId a = 0; a < objects_.size(); ++a) {
    const MorId id = identities_[a];
    if (id >= m || morphisms_[id].source != a || morphisms_[id].target != a) {
      return Check::fail("BrokenIdentity: identity of '" + objects_[a] + "' is not an endomorphism");
    }
  }
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      const MorId h = compose(g, f);
      if (!composable(g, f)) {
        if (h != npos) {
          return Check::fail("IllTypedComposite: " + morphisms_[g].name + " . " +
                             morphisms_[f].name + " is defined on a non-composable pair");
        }
        continue;
      }
      if (h == npos) {
        return Check::fail("MissingComposite: " + morphisms_[g].name + " . " +
                           morphisms_[f].name);
      }
      if (h >= m || source(h) != source(f) || target(h) != target(g)) {
        return Check::fail("IllTypedComposite: " + morphisms_[g].name + " . " +
                           morphisms_[f].name + " lands outside its hom-set");
      }
    }
  }
  for (MorId f = 0; f < m; ++f) {
    if (compose(identities_[target(f)], f) != f || compose(f, identities_[source(f)]) != f) {
      return Check::fail("BrokenIdentity: " + morphisms_[f].name);
    }
  }
  for (MorId f = 0; f < m; ++f) {
    for (MorId g : out_of_[target(f)]) {
      const MorId gf = compose(g, f);
      for (MorId h : out_of_[target(g)]) {
        if (compose(h, gf) != compose(compose(h, g), f)) {
          return Check::fail("NonAssociative: (" + morphisms_[h].name + ", " +
                             morphisms_[g].name + ", " + morphisms_[f].name + ")");
        }
      }
    }
  }
  return Check::ok();
}

bool operator==(const FinCategory& a, const FinCategory& b) {
  if (a.objects_ != b.objects_ || a.identities_ != b.identities_ || a.table_ != b.table_ ||
      a.morphisms_.size() != b.morphisms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.morphisms_.size(); ++i) {
    const auto& x = a.morphisms_[i];
    const auto& y = b.morphisms_[i];
    if (x.name != y.name || x.source != y.source || x.target != y.target) return false;
  }
  return true;
}

// --- descriptions --------------------------------------------------------------

FinCategory validate_category(const CategoryDescription& raw) {
  std::vector<std::string> objects = raw.objects;
  std::unordered_map<std::string, ObjId> obj_index;
  for (ObjId a = 0; a < objects.size(); ++a) {
    if (!obj_index.emplace(objects[a], a).second) {
      throw Error(ErrorCode::DuplicateName, "object '" + objects[a] + "' declared twice");
    }
  }
  std::vector<Morphism> morphisms;
  std::vector<MorId> identities;
  std::unordered_map<std::string, MorId> mor_index;
  for (ObjId a = 0; a < objects.size(); ++a) {
    identities.push_back(morphisms.size());
    morphisms.push_back({"id_" + objects[a], a, a});
    mor_index.emplace(morphisms.back().name, identities.back());
  }
  auto lookup_object = [&](const std::string& name, const std::string& context) {
    auto it = obj_index.find(name);
    if (it == obj_index.end()) {
      throw Error(ErrorCode::UnknownName, "unknown object '" + name + "' in " + context);
    }
    return it->second;
  };
  for (const auto& decl : raw.morphisms) {
    const ObjId s = lookup_object(decl.source, "morphism '" + decl.name + "'");
    const ObjId t = lookup_object(decl.target, "morphism '" + decl.name + "'");
    if (!mor_index.emplace(decl.name, morphisms.size()).second) {
      throw Error(ErrorCode::DuplicateName, "morphism '" + decl.name + "' declared twice");
    }
    morphisms.push_back({decl.name, s, t});
  }
  const std::size_t m = morphisms.size();
  auto lookup_morphism = [&](const std::string& name) {
    auto it = mor_index.find(name);
    if (it == mor_index.end()) {
      throw Error(ErrorCode::UnknownName, "unknown morphism '" + name + "' in composition");
    }
    return it->second;
  };
  auto is_id = [&](MorId f) { return identities[morphisms[f].source] == f; };

  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (morphisms[f].target != morphisms[g].source) continue;
      if (is_id(g)) table[g * m + f] = f;
      else if (is_id(f)) table[g * m + f] = g;
    }
  }
  for (const auto& decl : raw.compositions) {
    const MorId g = lookup_morphism(decl.second);
    const MorId f = lookup_morphism(decl.first);
    const MorId h = lookup_morphism(decl.result);
    const std::string text = decl.second + " . " + decl.first + " = " + decl.result;
    if (morphisms[f].target != morphisms[g].source) {
      throw Error(ErrorCode::IllTypedComposite, text + " composes a non-composable pair");
    }
    if (morphisms[h].source != morphisms[f].source || morphisms[h].target != morphisms[g].target) {
      throw Error(ErrorCode::IllTypedComposite, text + " lands outside hom(" +
                                                    objects[morphisms[f].source] + ", " +
                                                    objects[morphisms[g].target] + ")");
    }
    MorId& slot = table[g * m + f];
    if (is_id(g) || is_id(f)) {
      if (slot != h) {
        throw Error(ErrorCode::BrokenIdentity, is_id(g) ? decl.first : decl.second);
      }
      continue;
    }
    if (slot != npos && slot != h) {
      throw Error(ErrorCode::IllTypedComposite, text + " conflicts with an earlier entry");
    }
    slot = h;
  }
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (morphisms[f].target != morphisms[g].source || table[g * m + f] != npos) continue;
      std::vector<MorId> candidates;
      for (MorId h = 0; h < m; ++h) {
        if (morphisms[h].source == morphisms[f].source &&
            morphisms[h].target == morphisms[g].target) {
          candidates.push_back(h);
        }
      }
      if (raw.infer_missing && candidates.size() == 1) {
        table[g * m + f] = candidates.front();
      } else {
        throw Error(ErrorCode::MissingComposite,
                    morphisms[g].name + " . " + morphisms[f].name + " (" +
                        std::to_string(candidates.size()) + " candidates)");
      }
    }
  }
  return FinCategory::from_tables(raw.name, std::move(objects), std::move(morphisms),
                                  std::move(identities), std::move(table));
}

FinCategory opposite(const FinCategory& c) {
  const std::size_t n = c.num_objects();
  const std::size_t m = c.num_morphisms();
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<MorId> identities;
  for (ObjId a = 0; a < n; ++a) {
    objects.push_back(c.object_name(a));
    identities.push_back(c.identity(a));
  }
  for (MorId f = 0; f < m; ++f) {
    morphisms.push_back({c.morphism_name(f), c.target(f), c.source(f)});
  }
  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (c.composable(f, g)) table[g * m + f] = c.compose(f, g);
    }
  }
  std::string name = c.name();
  if (name.size() > 3 && name.ends_with("^op")) name.resize(name.size() - 3);
  else name += "^op";
  return FinCategory::trusted(std::move(name), std::move(objects), std::move(morphisms),
                              std::move(identities), std::move(table));
}

FinCategory empty_category(std::string name) {
  return FinCategory::trusted(std::move(name), {}, {}, {}, {});
}

FinCategory discrete_category(std::vector<std::string> names, std::string name) {
  std::vector<Morphism> morphisms;
  std::vector<MorId> identities;
  for (ObjId a = 0; a < names.size(); ++a) {
    identities.push_back(a);
    morphisms.push_back({"id_" + names[a], a, a});
  }
  const std::size_t m = morphisms.size();
  std::vector<MorId> table(m * m, npos);
  for (MorId f = 0; f < m; ++f) table[f * m + f] = f;
  return FinCategory::trusted(std::move(name), std::move(names), std::move(morphisms),
                              std::move(identities), std::move(table));
}

FinCategory full_subcategory(const FinCategory& c, std::span<const ObjId> objects,
                             std::string name) {
  std::vector<std::size_t> local(c.num_objects(), npos);
  std::vector<std::string> names;
  for (ObjId a : objects) {
    local[a] = names.size();
    names.push_back(c.object_name(a));
  }
  std::vector<MorId> remap(c.num_morphisms(), npos);
  std::vector<MorId> kept;
  std::vector<Morphism> morphisms;
  for (ObjId a : objects) {
    for (ObjId b : objects) {
      for (MorId f : c.hom(a, b)) {
        remap[f] = morphisms.size();
        kept.push_back(f);
        morphisms.push_back({c.morphism_name(f), local[a], local[b]});
      }
    }
  }
  std::vector<MorId> identities;
  for (ObjId a : objects) identities.push_back(remap[c.identity(a)]);
  const std::size_t m = morphisms.size();
  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (c.composable(kept[g], kept[f])) table[g * m + f] = remap[c.compose(kept[g], kept[f])];
    }
  }
  if (name.empty()) name = c.name() + "|sub";
  return FinCategory::trusted(std::move(name), std::move(names), std::move(morphisms),
                              std::move(identities), std::move(table));
}

// --- functors ----------------------------------------------------------------

FinFunctor FinFunctor::trusted(CategoryRef domain, CategoryRef codomain,
                               std::vector<ObjId> on_objects, std::vector<MorId> on_morphisms,
                               std::string name) {
  FinFunctor f;
  f.domain_ = std::move(domain);
  f.codomain_ = std::move(codomain);
  f.objects_ = std::move(on_objects);
  f.morphisms_ = std::move(on_morphisms);
  f.name_ = std::move(name);
  return f;
}

FinFunctor FinFunctor::make(CategoryRef domain, CategoryRef codomain,
                            std::vector<ObjId> on_objects, std::vector<MorId> on_morphisms,
                            std::string name) {
  FinFunctor f = trusted(std::move(domain), std::move(codomain), std::move(on_objects),
                         std::move(on_morphisms), std::move(name));
  if (Check laws = f.check_laws(); !laws) {
    const auto& cert = laws.certificate;
    ErrorCode code = ErrorCode::BrokenComposition;
    if (cert.rfind("BrokenIdentity", 0) == 0) code = ErrorCode::BrokenIdentity;
    else if (cert.rfind("UnmappedMorphism", 0) == 0) code = ErrorCode::UnmappedMorphism;
    throw Error(code, cert.substr(cert.find(':') + 2));
  }
  return f;
}

Check FinFunctor::check_laws() const {
  const FinCategory& c = *domain_;
  const FinCategory& d = *codomain_;
  if (objects_.size() != c.num_objects() || morphisms_.size() != c.num_morphisms()) {
    return Check::fail("UnmappedMorphism: mapping does not cover the domain");
  }
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    if (objects_[a] >= d.num_objects()) {
      return Check::fail("UnmappedMorphism: object " + c.object_name(a) + " unmapped");
    }
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    const MorId g = morphisms_[f];
    if (g >= d.num_morphisms()) {
      return Check::fail("UnmappedMorphism: " + c.morphism_name(f));
    }
    if (d.source(g) != objects_[c.source(f)] || d.target(g) != objects_[c.target(f)]) {
      return Check::fail("BrokenComposition: " + c.morphism_name(f) + " |-> " +
                         d.morphism_name(g) + " does not preserve endpoints");
    }
  }
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    if (morphisms_[c.identity(a)] != d.identity(objects_[a])) {
      return Check::fail("BrokenIdentity: " + c.object_name(a));
    }
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    for (MorId g : c.arrows_out_of(c.target(f))) {
      if (morphisms_[c.compose(g, f)] != d.compose(morphisms_[g], morphisms_[f])) {
        return Check::fail("BrokenComposition: (" + c.morphism_name(g) + ", " +
                           c.morphism_name(f) + ")");
      }
    }
  }
  return Check::ok();
}

FinFunctor FinFunctor::identity(CategoryRef c) {
  std::vector<ObjId> objects(c->num_objects());
  std::vector<MorId> morphisms(c->num_morphisms());
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = i;
  for (std::size_t i = 0; i < morphisms.size(); ++i) morphisms[i] = i;
  std::string name = "id_" + c->name();
  return trusted(c, c, std::move(objects), std::move(morphisms), std::move(name));
}

FinFunctor FinFunctor::constant(CategoryRef domain, CategoryRef codomain, ObjId d) {
  std::vector<ObjId> objects(domain->num_objects(), d);
  std::vector<MorId> morphisms(domain->num_morphisms(), codomain->identity(d));
  std::string name = "const_" + codomain->object_name(d);
  return trusted(std::move(domain), std::move(codomain), std::move(objects),
                 std::move(morphisms), std::move(name));
}

FinFunctor FinFunctor::renamed(std::string name) const {
  FinFunctor f = *this;
  f.name_ = std::move(name);
  return f;
}

FinFunctor compose(const FinFunctor& g, const FinFunctor& f) {
  std::vector<ObjId> objects(f.object_map().size());
  std::vector<MorId> morphisms(f.morphism_map().size());
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = g.on_object(f.on_object(i));
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    morphisms[i] = g.on_morphism(f.on_morphism(i));
  }
  std::string name = g.name().empty() || f.name().empty() ? std::string{}
                                                          : g.name() + "." + f.name();
  return FinFunctor::trusted(f.domain(), g.codomain(), std::move(objects),
                             std::move(morphisms), std::move(name));
}

FinFunctor opposite(const FinFunctor& f, CategoryRef dom_op, CategoryRef cod_op) {
  return FinFunctor::trusted(std::move(dom_op), std::move(cod_op), f.object_map(),
                             f.morphism_map(), f.name().empty() ? "" : f.name() + "^op");
}

FinFunctor validate_functor(const FunctorDescription& raw, CategoryRef c, CategoryRef d) {
  std::vector<ObjId> objects(c->num_objects(), npos);
  for (const auto& [from, to] : raw.on_objects) {
    auto a = c->find_object(from);
    if (!a) throw Error(ErrorCode::UnknownName, "no object '" + from + "' in " + c->name());
    auto b = d->find_object(to);
    if (!b) throw Error(ErrorCode::UnknownName, "no object '" + to + "' in " + d->name());
    objects[*a] = *b;
  }
  for (ObjId a = 0; a < c->num_objects(); ++a) {
    if (objects[a] == npos) {
      throw Error(ErrorCode::UnmappedMorphism, "object '" + c->object_name(a) + "' of " +
                                                   c->name() + " is not mapped");
    }
  }
  std::vector<MorId> morphisms(c->num_morphisms(), npos);
  for (const auto& [from, to] : raw.on_morphisms) {
    auto f = c->find_morphism(from);
    if (!f) throw Error(ErrorCode::UnknownName, "no morphism '" + from + "' in " + c->name());
    auto g = d->find_morphism(to);
    if (!g) throw Error(ErrorCode::UnknownName, "no morphism '" + to + "' in " + d->name());
    morphisms[*f] = *g;
  }
  for (MorId f = 0; f < c->num_morphisms(); ++f) {
    if (morphisms[f] != npos) continue;
    if (c->is_identity(f)) {
      morphisms[f] = d->identity(objects[c->source(f)]);
      continue;
    }
    const auto& candidates = d->hom(objects[c->source(f)], objects[c->target(f)]);
    if (candidates.size() != 1) {
      throw Error(ErrorCode::UnmappedMorphism,
                  "morphism '" + c->morphism_name(f) + "' is not mapped and has " +
                      std::to_string(candidates.size()) + " candidate images");
    }
    morphisms[f] = candidates.front();
  }
  return FinFunctor::make(std::move(c), std::move(d), std::move(objects), std::move(morphisms),
                          raw.name);
}

// --- natural transformations -------------------------------------------------

NatTransf NatTransf::make(FinFunctor source, FinFunctor target, std::vector<MorId> components,
                          std::string name) {
  NatTransf t;
  t.source_ = std::move(source);
  t.target_ = std::move(target);
  t.components_ = std::move(components);
  t.name_ = std::move(name);
  if (Check nat = t.check_naturality(); !nat) throw Error(ErrorCode::NotNatural, nat.certificate);
  return t;
}

NatTransf NatTransf::identity(const FinFunctor& f) {
  const FinCategory& d = *f.codomain();
  std::vector<MorId> components;
  for (ObjId a = 0; a < f.domain()->num_objects(); ++a) {
    components.push_back(d.identity(f.on_object(a)));
  }
  NatTransf t;
  t.source_ = f;
  t.target_ = f;
  t.components_ = std::move(components);
  t.name_ = "id";
  return t;
}

Check NatTransf::check_naturality() const {
  const FinCategory& c = *source_.domain();
  const FinCategory& d = *source_.codomain();
  if (components_.size() != c.num_objects()) {
    return Check::fail("component count does not match the domain");
  }
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    const MorId k = components_[a];
    if (k >= d.num_morphisms() || d.source(k) != source_.on_object(a) ||
        d.target(k) != target_.on_object(a)) {
      return Check::fail("component at '" + c.object_name(a) + "' has the wrong type");
    }
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    const MorId lhs = d.compose(target_.on_morphism(f), components_[c.source(f)]);
    const MorId rhs = d.compose(components_[c.target(f)], source_.on_morphism(f));
    if (lhs != rhs) {
      return Check::fail("naturality square at '" + c.morphism_name(f) + "' does not commute");
    }
  }
  return Check::ok();
}

bool NatTransf::is_isomorphism() const {
  const FinCategory& d = *source_.codomain();
  return std::all_of(components_.begin(), components_.end(),
                     [&](MorId k) { return d.is_isomorphism(k); });
}

NatTransf vertical(const NatTransf& beta, const NatTransf& alpha) {
  const FinCategory& d = *alpha.source().codomain();
  std::vector<MorId> components;
  for (ObjId a = 0; a < alpha.components().size(); ++a) {
    components.push_back(d.compose(beta.component(a), alpha.component(a)));
  }
  return NatTransf::make(alpha.source(), beta.target(), std::move(components));
}

NatTransf whisker_left(const FinFunctor& h, const NatTransf& alpha) {
  std::vector<MorId> components;
  for (MorId k : alpha.components()) components.push_back(h.on_morphism(k));
  return NatTransf::make(compose(h, alpha.source()), compose(h, alpha.target()),
                         std::move(components));
}

NatTransf whisker_right(const NatTransf& alpha, const FinFunctor& k) {
  std::vector<MorId> components;
  for (ObjId a = 0; a < k.domain()->num_objects(); ++a) {
    components.push_back(alpha.component(k.on_object(a)));
  }
  return NatTransf::make(compose(alpha.source(), k), compose(alpha.target(), k),
                         std::move(components));
}

// --- fixtures ----------------------------------------------------------------

namespace fixtures {

namespace {
CategoryRef make(CategoryDescription d) { return share(validate_category(d)); }
}  // namespace

CategoryRef one() {
  static const CategoryRef c = make({"One", {"x"}, {}, {}});
  return c;
}

CategoryRef arrow() {
  static const CategoryRef c = make({"Arrow", {"0", "1"}, {{"f", "0", "1"}}, {}});
  return c;
}

CategoryRef par_pair() {
  static const CategoryRef c =
      make({"ParPair", {"0", "1"}, {{"a", "0", "1"}, {"b", "0", "1"}}, {}});
  return c;
}

CategoryRef span() {
  static const CategoryRef c =
      make({"Span", {"s", "a", "b"}, {{"p", "s", "a"}, {"q", "s", "b"}}, {}});
  return c;
}

CategoryRef sq() {
  static const CategoryRef c = make({"Sq",
                                     {"bot", "l", "r", "top"},
                                     {{"bl", "bot", "l"},
                                      {"br", "bot", "r"},
                                      {"lt", "l", "top"},
                                      {"rt", "r", "top"},
                                      {"bt", "bot", "top"}},
                                     {}});
  return c;
}

CategoryRef idem() {
  static const CategoryRef c =
      make({"Idem", {"x"}, {{"e", "x", "x"}}, {{"e", "e", "e"}}});
  return c;
}

CategoryRef z2() {
  static const CategoryRef c =
      make({"Z2", {"x"}, {{"g", "x", "x"}}, {{"g", "g", "id_x"}}});
  return c;
}

std::vector<std::pair<std::string, CategoryRef>> catalog() {
  return {{"One", one()},   {"Arrow", arrow()}, {"ParPair", par_pair()}, {"Span", span()},
          {"Sq", sq()},     {"Idem", idem()},   {"Z2", z2()}};
}

CategoryRef by_name(std::string_view name) {
  for (auto& [n, c] : catalog()) {
    if (n == name) return c;
  }
  throw Error(ErrorCode::UnknownName, "no fixture category '" + std::string(name) + "'");
}

}  // namespace fixtures

}  // namespace toposfactor

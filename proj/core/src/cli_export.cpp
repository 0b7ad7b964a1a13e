#include <set>
#include <sstream>

#include "json.hpp"
#include "names.hpp"
#include "toposfactor/cli.hpp"

namespace toposfactor {

namespace {

bool plain_name(const std::string& s) {
  static const std::set<std::string> keywords{"category", "functor", "nat",    "presheaf",
                                              "topology", "diagram", "objects", "compose",
                                              "cover",    "slice",   "on"};
  if (s.empty() || keywords.count(s)) return false;
  for (unsigned char ch : s) {
    if (!(std::isalnum(ch) || std::string_view("_'#^+*@!?$~").find(static_cast<char>(ch)) !=
                                  std::string_view::npos)) {
      return false;
    }
  }
  return true;
}

std::string q(const std::string& s) {
  if (plain_name(s)) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "\"";
}

// Printable names of a category: distinct object names, identities written as
// id_<object> and all morphism names distinct.
struct NameTable {
  std::vector<std::string> objects;
  std::vector<std::string> morphisms;
};

NameTable printable_names(const FinCategory& c) {
  NameTable t;
  for (ObjId a = 0; a < c.num_objects(); ++a) t.objects.push_back(c.object_name(a));
  detail::make_unique(t.objects);
  std::set<std::string> identity_names;
  for (ObjId a = 0; a < c.num_objects(); ++a) identity_names.insert("id_" + t.objects[a]);
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (c.is_identity(f)) {
      t.morphisms.push_back("id_" + t.objects[c.source(f)]);
    } else {
      std::string n = c.morphism_name(f);
      if (identity_names.count(n)) n += "'";
      t.morphisms.push_back(n);
    }
  }
  // Identities keep their forced names; repeats among the rest get suffixes.
  std::vector<std::string> rest;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (!c.is_identity(f)) rest.push_back(t.morphisms[f]);
  }
  for (const auto& n : identity_names) rest.push_back(n);
  detail::make_unique(rest);
  std::size_t k = 0;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (!c.is_identity(f)) t.morphisms[f] = rest[k++];
  }
  return t;
}

class Printer {
 public:
  explicit Printer(const Workspace& ws) : ws_(ws) {}

  std::string run() {
    for (const auto& [kind, name] : ws_.order()) {
      switch (kind) {
        case DefKind::Category: category(name, *ws_.category(name)); break;
        case DefKind::Functor: functor(name, ws_.functor(name)); break;
        case DefKind::Nat: nat(name, ws_.nat(name)); break;
        case DefKind::Presheaf: presheaf(name, ws_.presheaf(name)); break;
        case DefKind::Topology: topology(name, ws_.topology(name)); break;
        case DefKind::Diagram: diagram(name, ws_.diagram(name)); break;
      }
    }
    return out_.str();
  }

 private:
  // Workspace name of a category, falling back to the fixture catalog.
  std::pair<std::string, const NameTable*> category_ref(const FinCategory& c) {
    for (const auto& [kind, name] : ws_.order()) {
      if (kind == DefKind::Category && *ws_.category(name) == c) return {name, &tables_.at(name)};
    }
    for (const auto& [name, ref] : fixtures::catalog()) {
      if (*ref == c) {
        auto [it, _] = tables_.emplace(name, printable_names(c));
        return {name, &it->second};
      }
    }
    throw Error(ErrorCode::UnresolvedName,
                "category '" + c.name() + "' is not defined in the workspace");
  }

  std::string functor_ref(const FinFunctor& f) {
    for (const auto& [kind, name] : ws_.order()) {
      if (kind == DefKind::Functor && ws_.functor(name) == f) return name;
    }
    throw Error(ErrorCode::UnresolvedName,
                "functor '" + f.name() + "' is not defined in the workspace");
  }

  void category(const std::string& name, const FinCategory& c) {
    const auto& t = tables_.emplace(name, printable_names(c)).first->second;
    out_ << "category " << q(name) << " {\n  objects:";
    for (ObjId a = 0; a < c.num_objects(); ++a) out_ << (a ? ", " : " ") << q(t.objects[a]);
    out_ << "\n";
    for (MorId f = 0; f < c.num_morphisms(); ++f) {
      if (c.is_identity(f)) continue;
      out_ << "  " << q(t.morphisms[f]) << " : " << q(t.objects[c.source(f)]) << " -> "
           << q(t.objects[c.target(f)]) << "\n";
    }
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      if (c.is_identity(g)) continue;
      for (MorId f : c.arrows_into(c.source(g))) {
        if (c.is_identity(f)) continue;
        out_ << "  compose: " << q(t.morphisms[g]) << " . " << q(t.morphisms[f]) << " = "
             << q(t.morphisms[c.compose(g, f)]) << "\n";
      }
    }
    out_ << "}\n\n";
  }

  void mapping_body(const FinFunctor& f, const NameTable& src, const NameTable& tgt) {
    const auto& c = *f.domain();
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      out_ << "  " << q(src.objects[a]) << " |-> " << q(tgt.objects[f.on_object(a)]) << "\n";
    }
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
      if (c.is_identity(m)) continue;
      out_ << "  " << q(src.morphisms[m]) << " |-> " << q(tgt.morphisms[f.on_morphism(m)])
           << "\n";
    }
  }

  void functor(const std::string& name, const FinFunctor& f) {
    auto [cn, ct] = category_ref(*f.domain());
    auto [dn, dt] = category_ref(*f.codomain());
    out_ << "functor " << q(name) << " : " << q(cn) << " -> " << q(dn) << " {\n";
    mapping_body(f, *ct, *dt);
    out_ << "}\n\n";
  }

  void nat(const std::string& name, const NatTransf& n) {
    auto [cn, ct] = category_ref(*n.source().domain());
    auto [dn, dt] = category_ref(*n.source().codomain());
    out_ << "nat " << q(name) << " : " << q(functor_ref(n.source())) << " => "
         << q(functor_ref(n.target())) << " {\n";
    for (ObjId a = 0; a < n.source().domain()->num_objects(); ++a) {
      out_ << "  " << q(ct->objects[a]) << " |-> " << q(dt->morphisms[n.component(a)]) << "\n";
    }
    out_ << "}\n\n";
  }

  void presheaf(const std::string& name, const FinPresheaf& x) {
    auto [cn, ct] = category_ref(*x.base());
    const auto& c = *x.base();
    out_ << "presheaf " << q(name) << " on " << q(cn) << " {\n";
    std::vector<std::vector<std::string>> elements(c.num_objects());
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      elements[a] = x.elements(a);
      detail::make_unique(elements[a]);
      out_ << "  " << q(ct->objects[a]) << " = {";
      for (std::size_t i = 0; i < elements[a].size(); ++i) {
        out_ << (i ? ", " : "") << q(elements[a][i]);
      }
      out_ << "}\n";
    }
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      if (c.is_identity(g) || x.size(c.target(g)) == 0) continue;
      out_ << "  " << q(ct->morphisms[g]) << " :";
      for (std::size_t e = 0; e < x.size(c.target(g)); ++e) {
        out_ << (e ? ", " : " ") << q(elements[c.target(g)][e]) << " |-> "
             << q(elements[c.source(g)][x.act(g, e)]);
      }
      out_ << "\n";
    }
    out_ << "}\n\n";
  }

  void topology(const std::string& name, const GrothendieckTopology& j) {
    auto [cn, ct] = category_ref(*j.base());
    out_ << "topology " << q(name) << " on " << q(cn) << " {\n";
    for (ObjId a = 0; a < j.base()->num_objects(); ++a) {
      for (const auto& s : j.covers(a)) {
        out_ << "  cover " << q(ct->objects[a]) << " = [";
        for (std::size_t i = 0; i < s.arrows.size(); ++i) {
          out_ << (i ? ", " : "") << q(ct->morphisms[s.arrows[i]]);
        }
        out_ << "]\n";
      }
    }
    out_ << "}\n\n";
  }

  void diagram(const std::string& name, const DiagramDef& d) {
    const auto& f = d.diagram.functor();
    auto [in, it] = category_ref(*f.domain());
    auto [cn, ct] = category_ref(*f.codomain());
    out_ << "diagram " << q(name) << " : " << q(in) << " -> " << q(cn) << " {\n";
    mapping_body(f, *it, *ct);
    for (ObjId i = 0; i < f.domain()->num_objects(); ++i) {
      out_ << "  slice " << q(it->objects[i]) << " = [";
      const auto& members = d.slices.members[i];
      for (std::size_t k = 0; k < members.size(); ++k) {
        out_ << (k ? ", " : "") << q(ct->morphisms[members[k]]);
      }
      out_ << "]\n";
    }
    out_ << "}\n\n";
  }

  const Workspace& ws_;
  std::map<std::string, NameTable> tables_;
  std::ostringstream out_;
};

std::string dq(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "\"";
}

// Indecomposable non-identity morphisms, then further morphisms in id order
// until everything is generated under composition.
std::vector<MorId> generators(const FinCategory& c) {
  const std::size_t n = c.num_morphisms();
  std::vector<bool> chosen(n, false);
  for (MorId f = 0; f < n; ++f) {
    if (c.is_identity(f)) continue;
    bool decomposes = false;
    for (MorId b : c.arrows_out_of(c.source(f))) {
      if (c.is_identity(b) || b == f) continue;
      for (MorId a : c.hom(c.target(b), c.target(f))) {
        if (!c.is_identity(a) && a != f && c.compose(a, b) == f) {
          decomposes = true;
          break;
        }
      }
      if (decomposes) break;
    }
    chosen[f] = !decomposes;
  }
  auto closure = [&] {
    std::vector<bool> in(n, false);
    for (MorId f = 0; f < n; ++f) in[f] = chosen[f] || c.is_identity(f);
    for (bool grew = true; grew;) {
      grew = false;
      for (MorId g = 0; g < n; ++g) {
        if (!in[g]) continue;
        for (MorId f : c.arrows_into(c.source(g))) {
          if (!in[f]) continue;
          const MorId h = c.compose(g, f);
          if (!in[h]) in[h] = grew = true;
        }
      }
    }
    return in;
  };
  auto in = closure();
  for (MorId f = 0; f < n; ++f) {
    if (!in[f]) {
      chosen[f] = true;
      in = closure();
    }
  }
  std::vector<MorId> out;
  for (MorId f = 0; f < n; ++f) {
    if (chosen[f]) out.push_back(f);
  }
  return out;
}

void dot_nodes(std::ostringstream& out, const FinCategory& c, const std::string& prefix,
               const std::string& indent) {
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    out << indent << dq(prefix + std::to_string(a)) << " [label=" << dq(c.object_name(a))
        << "];\n";
  }
}

}  // namespace

std::string print_workspace(const Workspace& ws) { return Printer(ws).run(); }

std::string export_dot(const FinCategory& c) {
  std::ostringstream out;
  out << "digraph " << dq(c.name()) << " {\n  rankdir=LR;\n  node [shape=plaintext];\n";
  dot_nodes(out, c, "o", "  ");
  for (MorId f : generators(c)) {
    out << "  " << dq("o" + std::to_string(c.source(f))) << " -> "
        << dq("o" + std::to_string(c.target(f))) << " [label=" << dq(c.morphism_name(f))
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const MarkedOplaxColimit& mol) {
  const auto& c = *mol.category;
  std::ostringstream out;
  out << "digraph " << dq(c.name()) << " {\n  rankdir=LR;\n  node [shape=box];\n";
  dot_nodes(out, c, "o", "  ");
  for (MorId f : generators(c)) {
    std::string style;
    if (mol.cartesian[f] && mol.vertical[f]) {
      style = ", style=\"bold,dashed\"";
    } else if (mol.cartesian[f]) {
      style = ", style=bold";
    } else if (mol.vertical[f]) {
      style = ", style=dashed";
    }
    out << "  " << dq("o" + std::to_string(c.source(f))) << " -> "
        << dq("o" + std::to_string(c.target(f))) << " [label=" << dq(c.morphism_name(f)) << style
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const FinFunctor& f) {
  const auto& c = *f.domain();
  const auto& d = *f.codomain();
  std::ostringstream out;
  out << "digraph " << dq(f.name()) << " {\n  rankdir=LR;\n  node [shape=plaintext];\n";
  auto cluster = [&](const FinCategory& k, const std::string& prefix, int idx) {
    out << "  subgraph cluster_" << idx << " {\n    label=" << dq(k.name()) << ";\n";
    dot_nodes(out, k, prefix, "    ");
    for (MorId m : generators(k)) {
      out << "    " << dq(prefix + std::to_string(k.source(m))) << " -> "
          << dq(prefix + std::to_string(k.target(m))) << " [label=" << dq(k.morphism_name(m))
          << "];\n";
    }
    out << "  }\n";
  };
  cluster(c, "a", 0);
  cluster(d, "b", 1);
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    out << "  " << dq("a" + std::to_string(a)) << " -> "
        << dq("b" + std::to_string(f.on_object(a))) << " [style=dotted, arrowhead=open];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["verdict"] = r.verdict ? nlohmann::ordered_json(*r.verdict) : nlohmann::ordered_json();
  j["certificate"] = r.certificate;
  j["data"] = nlohmann::ordered_json::parse(r.data_json);
  return j.dump(2) + "\n";
}

std::string export_text(const Report& r) {
  std::ostringstream out;
  out << r.command << ": ";
  if (r.verdict) {
    out << (*r.verdict ? "true" : "false");
  } else {
    out << "done";
  }
  out << "\n";
  if (!r.certificate.empty()) out << "  certificate: " << r.certificate << "\n";
  for (const auto& line : r.lines) out << "  " << line << "\n";
  return out.str();
}

}  // namespace toposfactor

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "toposfactor/cli.hpp"
#include "toposfactor/universe.hpp"

namespace toposfactor {

using json = nlohmann::ordered_json;

namespace {

json category_json(const FinCategory& c) {
  json j;
  j["name"] = c.name();
  j["objects"] = json::array();
  for (ObjId a = 0; a < c.num_objects(); ++a) j["objects"].push_back(c.object_name(a));
  j["morphisms"] = json::array();
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    j["morphisms"].push_back({{"name", c.morphism_name(f)},
                              {"source", c.object_name(c.source(f))},
                              {"target", c.object_name(c.target(f))},
                              {"identity", c.is_identity(f)}});
  }
  j["compositions"] = json::array();
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    for (MorId f : c.arrows_into(c.source(g))) {
      if (c.is_identity(f)) continue;
      j["compositions"].push_back(
          {c.morphism_name(g), c.morphism_name(f), c.morphism_name(c.compose(g, f))});
    }
  }
  return j;
}

json functor_json(const FinFunctor& f) {
  json j;
  j["name"] = f.name();
  j["domain"] = f.domain()->name();
  j["codomain"] = f.codomain()->name();
  json objs = json::object();
  for (ObjId a = 0; a < f.domain()->num_objects(); ++a) {
    objs[f.domain()->object_name(a)] = f.codomain()->object_name(f.on_object(a));
  }
  json mors = json::object();
  for (MorId m = 0; m < f.domain()->num_morphisms(); ++m) {
    mors[f.domain()->morphism_name(m)] = f.codomain()->morphism_name(f.on_morphism(m));
  }
  j["objects"] = objs;
  j["morphisms"] = mors;
  return j;
}

json presheaf_json(const FinPresheaf& x) {
  const auto& c = *x.base();
  json j;
  j["name"] = x.name();
  j["base"] = c.name();
  json els = json::object();
  for (ObjId a = 0; a < c.num_objects(); ++a) els[c.object_name(a)] = x.elements(a);
  j["elements"] = els;
  json acts = json::object();
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    json m = json::object();
    for (std::size_t e = 0; e < x.size(c.target(g)); ++e) {
      m[x.element_name(c.target(g), e)] = x.element_name(c.source(g), x.act(g, e));
    }
    acts[c.morphism_name(g)] = m;
  }
  j["actions"] = acts;
  return j;
}

json global_element_json(const FinPresheaf& x, const GlobalElement& a) {
  json j = json::object();
  for (ObjId c = 0; c < x.base()->num_objects(); ++c) {
    j[x.base()->object_name(c)] = x.element_name(c, a.family[c]);
  }
  return j;
}

std::string global_element_text(const FinPresheaf& x, const GlobalElement& a) {
  std::string s = "(";
  for (ObjId c = 0; c < x.base()->num_objects(); ++c) {
    if (c) s += ", ";
    s += x.base()->object_name(c) + "=" + x.element_name(c, a.family[c]);
  }
  return s + ")";
}

json topology_json(const GrothendieckTopology& j) {
  const auto& c = *j.base();
  json out = json::object();
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    json covers = json::array();
    for (const auto& s : j.covers(a)) {
      json arrows = json::array();
      for (MorId f : s.arrows) arrows.push_back(c.morphism_name(f));
      covers.push_back(arrows);
    }
    out[c.object_name(a)] = covers;
  }
  return out;
}

bool is_workspace_path(const std::string& arg) {
  auto ends = [&](std::string_view ext) {
    return arg.size() > ext.size() && arg.compare(arg.size() - ext.size(), ext.size(), ext) == 0;
  };
  return ends(".cat") || ends(".diag");
}

class Dispatcher {
 public:
  Dispatcher(const Workspace& ws, const CliOptions& o, std::vector<std::string> names)
      : ws_(ws), opt_(o), names_(std::move(names)) {}

  Report run() {
    report_.command = opt_.command;
    for (const auto& n : names_) report_.command += " " + n;
    if (!opt_.checks.empty()) {
      report_.command += " --check ";
      for (std::size_t i = 0; i < opt_.checks.size(); ++i) {
        report_.command += (i ? "," : "") + opt_.checks[i];
      }
    }
    const std::string& cmd = opt_.command;
    if (cmd == "print") return print();
    if (cmd == "export") return export_value();
    if (cmd == "check") return check();
    if (cmd == "factor") return factor();
    if (cmd == "lift") return lift();
    if (cmd == "transport") return transport();
    if (cmd == "kan") return kan();
    if (cmd == "pi") return pi();
    if (cmd == "sheafify") return sheafify_cmd();
    if (cmd == "saturate") return saturate_cmd();
    if (cmd == "tc") return tc();
    if (cmd == "proetale") return proetale();
    if (cmd == "sweep") return sweep();
    throw Error(ErrorCode::UnknownCommand, "unknown command '" + cmd + "'");
  }

 private:
  // The k-th positional name, or the unique definition of the kind.
  std::string name(std::size_t k, DefKind kind) const {
    if (k < names_.size()) return names_[k];
    return ws_.only(kind);
  }
  const std::string& word(std::size_t k, const std::string& what) const {
    if (k >= names_.size()) throw Error(ErrorCode::PreconditionViolated, "missing " + what);
    return names_[k];
  }

  void verdict(const Check& c) {
    report_.verdict = c.holds;
    report_.certificate = c.certificate;
  }

  Report finish(json data) {
    report_.data_json = data.dump();
    return std::move(report_);
  }

  Report print() {
    const std::string text = print_workspace(ws_);
    report_.lines.push_back(std::to_string(ws_.order().size()) + " definitions");
    json data;
    data["dsl"] = text;
    return finish(data);
  }

  Report export_value() {
    const std::string& n = word(0, "name to export");
    json data;
    if (ws_.has(DefKind::Functor, n)) {
      const auto& f = ws_.functor(n);
      report_.dot = export_dot(f);
      data["functor"] = functor_json(f);
    } else if (ws_.has(DefKind::Presheaf, n)) {
      data["presheaf"] = presheaf_json(ws_.presheaf(n));
    } else if (ws_.has(DefKind::Topology, n)) {
      data["topology"] = topology_json(ws_.topology(n));
    } else if (ws_.has(DefKind::Diagram, n)) {
      const auto& d = ws_.diagram(n);
      report_.dot = export_dot(d.diagram.functor());
      data["diagram"] = functor_json(d.diagram.functor());
    } else {
      auto c = ws_.category(n);
      report_.dot = export_dot(*c);
      data["category"] = category_json(*c);
    }
    report_.lines.push_back("exported " + n);
    return finish(data);
  }

  Report check() {
    const std::string& prop = word(0, "property to check");
    json data;
    data["property"] = prop;
    if (prop == "final" || prop == "initial" || prop == "tc" || prop == "dfib" ||
        prop == "dopfib" || prop == "equivalence" || prop == "eta" || prop == "lifts") {
      const auto& f = ws_.functor(name(1, DefKind::Functor));
      report_.dot = export_dot(f);
      if (prop == "final") verdict(is_final_functor(f));
      if (prop == "initial") verdict(is_initial_functor(f));
      if (prop == "tc") verdict(is_terminally_connected_essential(f));
      if (prop == "dfib") verdict(is_discrete_fibration(f));
      if (prop == "dopfib") verdict(is_discrete_opfibration(f));
      if (prop == "equivalence") {
        report_.verdict = is_equivalence(f);
      }
      if (prop == "eta") {
        verdict(names_.size() > 2 ? eta_orthogonal_check(f, ws_.presheaf(names_[2]))
                                  : eta_orthogonal(f));
      }
      if (prop == "lifts") verdict(lifts_global_elements(f));
      data["functor"] = f.name();
    } else if (prop == "cofiltered") {
      auto c = ws_.category(name(1, DefKind::Category));
      report_.dot = export_dot(*c);
      verdict(is_cofiltered(*c));
    } else if (prop == "sheaf") {
      const auto& x = ws_.presheaf(name(1, DefKind::Presheaf));
      verdict(is_sheaf(x, ws_.topology(name(2, DefKind::Topology))));
    } else if (prop == "subcanonical") {
      report_.verdict = is_subcanonical(ws_.topology(name(1, DefKind::Topology)));
    } else if (prop == "local") {
      report_.verdict = is_local_site(ws_.topology(name(1, DefKind::Topology)));
    } else if (prop == "cofinal") {
      const auto& f = ws_.functor(name(1, DefKind::Functor));
      verdict(is_J_cofinal(f, ws_.topology(name(2, DefKind::Topology))));
    } else if (prop == "topology") {
      verdict(ws_.topology(name(1, DefKind::Topology)).check_axioms());
    } else {
      throw Error(ErrorCode::UnknownCommand, "unknown property '" + prop + "'");
    }
    report_.lines.push_back(prop + " = " + (report_.verdict.value_or(false) ? "true" : "false"));
    return finish(data);
  }

  Report factor() {
    const std::string& kind = word(0, "factorization kind");
    if (kind != "comprehensive") {
      throw Error(ErrorCode::UnknownCommand, "unknown factorization '" + kind + "'");
    }
    const auto& u = ws_.functor(name(1, DefKind::Functor));
    const auto fac = comprehensive_factorize(u);
    report_.verdict = true;
    report_.dot = export_dot(*fac.mid);
    json data;
    data["mid"] = category_json(*fac.mid);
    data["left"] = functor_json(fac.left);
    data["right"] = functor_json(fac.right);
    data["pi"] = presheaf_json(fac.pi);
    report_.lines.push_back("mid has " + std::to_string(fac.mid->num_objects()) + " objects, " +
                            std::to_string(fac.mid->num_morphisms()) + " morphisms");
    report_.lines.push_back("left final, right a discrete fibration, right . left = u");
    return finish(data);
  }

  Report lift() {
    const auto& u = ws_.functor(name(0, DefKind::Functor));
    const auto& e = ws_.presheaf(name(1, DefKind::Presheaf));
    const auto restricted = restrict(e, u);
    json rows = json::array();
    for (const auto& a : global_elements(restricted)) {
      const auto b = lift_global_element(u, e, a);
      rows.push_back({{"restricted", global_element_json(restricted, a)},
                      {"lift", global_element_json(e, b)}});
      report_.lines.push_back(global_element_text(restricted, a) + " |-> " +
                              global_element_text(e, b));
    }
    report_.verdict = true;
    json data;
    data["lifts"] = rows;
    return finish(data);
  }

  Report transport() {
    const auto& phi = ws_.nat(name(0, DefKind::Nat));
    const auto& e = ws_.presheaf(name(1, DefKind::Presheaf));
    const auto t = transport_elements(phi, e);
    const auto src = restrict(e, phi.target());
    const auto tgt = restrict(e, phi.source());
    json rows = json::array();
    for (std::size_t i = 0; i < t.source_elements.size(); ++i) {
      const auto& a = t.source_elements[i];
      const auto& b = t.target_elements[t.element_map[i]];
      rows.push_back({{"from", global_element_json(src, a)}, {"to", global_element_json(tgt, b)}});
      report_.lines.push_back(global_element_text(src, a) + " |-> " +
                              global_element_text(tgt, b));
    }
    report_.verdict = true;
    json data;
    data["transport"] = rows;
    return finish(data);
  }

  Report kan() {
    const std::string& side = word(0, "lan or ran");
    const auto& u = ws_.functor(name(1, DefKind::Functor));
    const auto& x = ws_.presheaf(name(2, DefKind::Presheaf));
    FinPresheaf value;
    if (side == "lan") {
      value = lan(x, u);
    } else if (side == "ran") {
      value = ran(x, u);
    } else {
      throw Error(ErrorCode::UnknownCommand, "unknown Kan extension '" + side + "'");
    }
    for (ObjId d = 0; d < value.base()->num_objects(); ++d) {
      report_.lines.push_back(value.base()->object_name(d) + ": " +
                              std::to_string(value.size(d)) + " elements");
    }
    json data;
    data["value"] = presheaf_json(value);
    return finish(data);
  }

  Report pi() {
    const auto& u = ws_.functor(name(0, DefKind::Functor));
    const auto p = components_presheaf(u);
    bool terminal = true;
    for (ObjId d = 0; d < p.base()->num_objects(); ++d) {
      terminal = terminal && p.size(d) == 1;
      report_.lines.push_back(p.base()->object_name(d) + ": " + std::to_string(p.size(d)) +
                              " components");
    }
    report_.verdict = terminal;
    json data;
    data["pi"] = presheaf_json(p);
    return finish(data);
  }

  Report sheafify_cmd() {
    const auto& x = ws_.presheaf(name(0, DefKind::Presheaf));
    const auto& j = ws_.topology(name(1, DefKind::Topology));
    const auto s = sheafify(x, j);
    for (ObjId d = 0; d < x.base()->num_objects(); ++d) {
      report_.lines.push_back(x.base()->object_name(d) + ": " + std::to_string(x.size(d)) +
                              " -> " + std::to_string(s.sheaf.size(d)));
    }
    report_.verdict = s.unit.is_isomorphism();
    json data;
    data["sheaf"] = presheaf_json(s.sheaf);
    json unit = json::object();
    for (ObjId d = 0; d < x.base()->num_objects(); ++d) {
      json m = json::object();
      for (std::size_t e = 0; e < x.size(d); ++e) {
        m[x.element_name(d, e)] = s.sheaf.element_name(d, s.unit.at(d, e));
      }
      unit[x.base()->object_name(d)] = m;
    }
    data["unit"] = unit;
    data["already_sheaf"] = *report_.verdict;
    return finish(data);
  }

  Report saturate_cmd() {
    const auto& j = ws_.topology(name(0, DefKind::Topology));
    const auto& c = *j.base();
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      report_.lines.push_back(c.object_name(a) + ": " + std::to_string(j.covers(a).size()) +
                              " covering sieves");
    }
    verdict(j.check_axioms());
    json data;
    data["covers"] = topology_json(j);
    data["subcanonical"] = is_subcanonical(j);
    return finish(data);
  }

  Report tc() {
    const std::string& how = word(0, "local or comorphism");
    SiteMorphismData m;
    m.f = ws_.functor(word(1, "functor"));
    m.domain_topology = ws_.topology(word(2, "domain topology"));
    m.codomain_topology = ws_.topology(word(3, "codomain topology"));
    TcVerdict v;
    if (how == "local") {
      m.role = SiteRole::Morphism;
      v = tc_by_local_site(m);
    } else if (how == "comorphism") {
      m.role = SiteRole::Comorphism;
      v = comorphism_tc(m);
    } else {
      throw Error(ErrorCode::UnknownCommand, "unknown tc criterion '" + how + "'");
    }
    if (v.kind != TcKind::Inconclusive) report_.verdict = v.kind == TcKind::TerminallyConnected;
    report_.certificate = v.certificate;
    report_.lines.push_back("verdict: " + to_string(v.kind));
    json data;
    data["kind"] = to_string(v.kind);
    return finish(data);
  }

  Report proetale() {
    const std::string& sub = word(0, "proetale subcommand");
    if (sub != "build") throw Error(ErrorCode::UnknownCommand, "unknown proetale '" + sub + "'");
    const auto& def = ws_.diagram(name(1, DefKind::Diagram));
    const auto mol = build_oplax_colimit(def.diagram, def.slices);
    report_.dot = export_dot(mol);
    json data;
    data["objects"] = mol.category->num_objects();
    data["morphisms"] = mol.category->num_morphisms();
    std::size_t cart = 0;
    for (bool b : mol.cartesian) cart += b ? 1 : 0;
    data["cartesian"] = cart;
    report_.lines.push_back("oplax colimit: " + std::to_string(mol.category->num_objects()) +
                            " objects, " + std::to_string(mol.category->num_morphisms()) +
                            " morphisms, " + std::to_string(cart) + " cartesian");
    json checks = json::object();
    bool all = true;
    std::optional<FractionCategory> fc;
    auto fractions = [&]() -> const FractionCategory& {
      if (!fc) fc = localize(mol);
      return *fc;
    };
    for (const auto& name : opt_.checks) {
      Check c;
      if (name == "ore") {
        c = check_ore(mol);
      } else if (name == "factorization") {
        c = check_vertical_cartesian_factorization(mol);
      } else if (name == "reindexing") {
        c = canonical_reindexing_initial(fractions(), def.diagram);
      } else if (name == "faithful") {
        c = pro_adjoint_faithful_check(fractions()).verdict;
      } else {
        throw Error(ErrorCode::UnknownCommand, "unknown check '" + name + "'");
      }
      checks[name] = {{"verdict", c.holds}, {"certificate", c.certificate}};
      report_.lines.push_back(name + " = " + (c.holds ? "true" : "false") +
                              (c.holds ? "" : " (" + c.certificate + ")"));
      if (!c.holds && report_.certificate.empty()) report_.certificate = name + ": " + c.certificate;
      all = all && c.holds;
    }
    if (fc) {
      data["fraction_morphisms"] = fc->category->num_morphisms();
    }
    data["checks"] = checks;
    report_.verdict = all;
    return finish(data);
  }

  Report sweep() {
    const std::string& what = word(0, "sweep kind");
    const auto bounds = bounds_from_env();
    const std::uint64_t seed = opt_.seed.value_or(1);
    const std::size_t sample = names_.size() > 1 ? std::stoul(names_[1]) : 2000;
    std::mt19937_64 rng(seed);
    const auto universe = enumerate_categories(bounds);
    std::size_t visited = 0;
    std::string failure;
    auto visit = [&](const FinFunctor& u) {
      if (!failure.empty()) return;
      ++visited;
      if (what == "factor") {
        comprehensive_factorize(u);
      } else if (what == "tc") {
        const bool a = is_terminally_connected_essential(u).holds;
        const bool b = is_final_functor(u).holds;
        const bool c = is_J_cofinal(u, trivial_topology(u.codomain())).holds;
        if (a != b || b != c) failure = "criteria disagree on " + u.name();
      } else if (what == "eta") {
        const bool a = is_terminally_connected_essential(u).holds;
        if (a != eta_orthogonal(u).holds) failure = "eta disagrees on " + u.name();
      } else {
        throw Error(ErrorCode::UnknownCommand, "unknown sweep '" + what + "'");
      }
    };
    for (std::size_t s = 0; s < sample && failure.empty(); ++s) {
      const auto& c = universe[rng() % universe.size()];
      const auto& d = universe[rng() % universe.size()];
      if (auto u = random_functor(rng, c, d)) visit(*u);
    }
    report_.verdict = failure.empty();
    report_.certificate = failure;
    report_.lines.push_back(std::to_string(universe.size()) + " categories, " +
                            std::to_string(visited) + " sampled functors");
    json data;
    data["categories"] = universe.size();
    data["functors"] = visited;
    data["seed"] = seed;
    return finish(data);
  }

  const Workspace& ws_;
  const CliOptions& opt_;
  std::vector<std::string> names_;
  Report report_;
};

int exit_code_for_load(const Error& e) {
  return e.code() == ErrorCode::PreconditionViolated ? 1 : 2;
}

}  // namespace

Report run_command(const Workspace& ws, const CliOptions& options) {
  std::vector<std::string> names;
  for (const auto& a : options.args) {
    if (!is_workspace_path(a)) names.push_back(a);
  }
  return Dispatcher(ws, options, std::move(names)).run();
}

std::string usage() {
  return "usage: toposfactor <command> [names] [--emit json|dot] [--out path] [--seed N]\n"
         "\n"
         "Arguments ending in .cat or .diag are loaded as workspace files.\n"
         "\n"
         "commands:\n"
         "  print                              workspace as DSL text\n"
         "  export NAME                        category, functor, presheaf, topology, diagram\n"
         "  check final|initial|tc|dfib|dopfib|equivalence|lifts F\n"
         "  check eta F [E]                    eta-orthogonality (all test presheaves if no E)\n"
         "  check cofiltered C | sheaf E J | subcanonical J | local J | cofinal F J | topology J\n"
         "  factor comprehensive F             final + discrete fibration factorization\n"
         "  lift F E                           lift every global element of F* E\n"
         "  transport N E                      transport global elements along a 2-cell\n"
         "  kan lan|ran F X                    Kan extension of a presheaf\n"
         "  pi F                               presheaf of components\n"
         "  sheafify E J | saturate J\n"
         "  tc local|comorphism F J K          terminal connectedness through sites\n"
         "  proetale build [D] [--check ore,factorization,reindexing,faithful]\n"
         "  sweep factor|tc|eta [COUNT]        random universe sample (TOPOSFACTOR_MAXOBJ)\n";
}

CliResult run_cli(const CliOptions& options) {
  CliResult result;
  if (options.emit != "" && options.emit != "json" && options.emit != "dot") {
    result.exit_code = 1;
    result.error = "PreconditionViolated: --emit must be json or dot\n";
    return result;
  }
  std::vector<std::string> paths;
  for (const auto& a : options.args) {
    if (is_workspace_path(a)) paths.push_back(a);
  }
  Workspace ws;
  try {
    ws = load_workspace(paths);
  } catch (const Error& e) {
    result.exit_code = exit_code_for_load(e);
    result.error = std::string(e.what()) + "\n";
    return result;
  }
  try {
    const auto start = std::chrono::steady_clock::now();
    Report report = run_command(ws, options);
    const auto ms = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - start).count();
    if (options.command == "print" && options.emit.empty()) {
      result.output = json::parse(report.data_json)["dsl"].get<std::string>();
    } else if (options.emit == "json") {
      result.output = export_json(report);
    } else if (options.emit == "dot") {
      if (report.dot.empty()) {
        throw Error(ErrorCode::PreconditionViolated,
                    "command '" + options.command + "' produces no graph");
      }
      result.output = report.dot;
    } else {
      result.output = export_text(report);
    }
    if (!options.out.empty()) {
      std::ofstream out(options.out, std::ios::binary);
      if (!out) throw Error(ErrorCode::PreconditionViolated, "cannot write '" + options.out + "'");
      out << result.output;
      result.output.clear();
    }
    result.error = "time: " + std::to_string(static_cast<long long>(ms)) + " ms\n";
  } catch (const Error& e) {
    result.exit_code = 1;
    result.error = std::string(e.what()) + "\n";
    result.output.clear();
  } catch (const InvariantViolation& e) {
    result.exit_code = 3;
    result.error = std::string("InvariantViolation: ") + e.what() + "\n";
    result.output.clear();
  }
  return result;
}

}  // namespace toposfactor

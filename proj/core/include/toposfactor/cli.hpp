#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toposfactor/factorization.hpp"
#include "toposfactor/fincat.hpp"
#include "toposfactor/presheaf.hpp"
#include "toposfactor/proetale.hpp"
#include "toposfactor/sites.hpp"

namespace toposfactor {

struct Provenance {
  std::string file;
  std::size_t line = 0;
};

struct DiagramDef {
  CofilteredDiagram diagram;
  SliceSystem slices;
};

enum class DefKind { Category, Functor, Nat, Presheaf, Topology, Diagram };
std::string_view to_string(DefKind k);

// Named values parsed from .cat / .diag files. Lookups of categories fall
// back to the fixture catalog when the name is not defined.
class Workspace {
 public:
  CategoryRef category(const std::string& name) const;
  const FinFunctor& functor(const std::string& name) const;
  const NatTransf& nat(const std::string& name) const;
  const FinPresheaf& presheaf(const std::string& name) const;
  const GrothendieckTopology& topology(const std::string& name) const;
  const DiagramDef& diagram(const std::string& name) const;

  bool has(DefKind kind, const std::string& name) const;
  // The unique definition of the kind, for commands that omit the name.
  std::string only(DefKind kind) const;
  const Provenance& provenance(DefKind kind, const std::string& name) const;
  // Definitions in the order they were added.
  const std::vector<std::pair<DefKind, std::string>>& order() const noexcept { return order_; }

  // Errors: DuplicateName.
  void add(const std::string& name, CategoryRef c, Provenance p = {});
  void add(const std::string& name, FinFunctor f, Provenance p = {});
  void add(const std::string& name, NatTransf n, Provenance p = {});
  void add(const std::string& name, FinPresheaf x, Provenance p = {});
  void add(const std::string& name, GrothendieckTopology j, Provenance p = {});
  void add(const std::string& name, DiagramDef d, Provenance p = {});

 private:
  void record(DefKind kind, const std::string& name, Provenance p);

  std::map<std::string, CategoryRef> categories_;
  std::map<std::string, FinFunctor> functors_;
  std::map<std::string, NatTransf> nats_;
  std::map<std::string, FinPresheaf> presheaves_;
  std::map<std::string, GrothendieckTopology> topologies_;
  std::map<std::string, DiagramDef> diagrams_;
  std::map<std::pair<DefKind, std::string>, Provenance> provenance_;
  std::vector<std::pair<DefKind, std::string>> order_;
};

// Parses DSL text into `ws`. Diagnostics carry file:line:column and the
// expected tokens. Errors: SyntaxError, UnresolvedName, DuplicateName and the
// validation errors of the constructed values.
void parse_into(Workspace& ws, std::string_view text, const std::string& file = "<input>");
Workspace parse_workspace(std::string_view text, const std::string& file = "<input>");
Workspace load_workspace(const std::vector<std::string>& paths);

// DSL text that parses back to isomorphic values.
std::string print_workspace(const Workspace& ws);

// --- exporters ---------------------------------------------------------------------------

std::string export_dot(const FinCategory& c);
// Marked morphisms are drawn bold (cartesian) or dashed (vertical).
std::string export_dot(const MarkedOplaxColimit& mol);
std::string export_dot(const FinFunctor& f);

// --- reports and commands ---------------------------------------------------------------

struct Report {
  std::string command;
  std::optional<bool> verdict;
  std::string certificate;
  std::string data_json = "{}";  // command-specific payload, a JSON object
  std::string dot;                // graph of the constructed or inspected value
  std::vector<std::string> lines; // human-readable summary
};

std::string export_json(const Report& r);
std::string export_text(const Report& r);

struct CliOptions {
  std::string command;
  std::vector<std::string> args;  // names and .cat/.diag paths
  std::string emit;               // "", "json" or "dot"
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> checks;
};

struct CliResult {
  int exit_code = 0;  // 0 computed, 1 precondition error, 2 parse error
  std::string output;
  std::string error;
};

// Dispatches a command. Never throws for input problems; they are mapped to
// exit codes. Errors: UnknownCommand (exit 1).
CliResult run_cli(const CliOptions& options);

// Builds the report for a command against an already loaded workspace.
Report run_command(const Workspace& ws, const CliOptions& options);

std::string usage();

}  // namespace toposfactor

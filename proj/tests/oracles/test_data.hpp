#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "toposfactor/cli.hpp"

namespace testdata {

inline std::string root() { return TOPOSFACTOR_TEST_DATA; }

struct DiagramFixture {
  std::string file;
  toposfactor::DiagramDef def;
};

// Every valid diagram fixture, ordered by file name.
inline std::vector<DiagramFixture> diagram_fixtures() {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(root() + "/diagrams")) {
    if (entry.path().extension() == ".diag") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<DiagramFixture> out;
  for (const auto& f : files) {
    auto ws = toposfactor::load_workspace({f});
    out.push_back({std::filesystem::path(f).filename().string(),
                   ws.diagram(ws.only(toposfactor::DefKind::Diagram))});
  }
  return out;
}

}  // namespace testdata

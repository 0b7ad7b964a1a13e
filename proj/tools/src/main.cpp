#include <iostream>

#include "CLI11.hpp"
#include "toposfactor/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite category, presheaf and site computations", "toposfactor"};
  app.footer(toposfactor::usage());
  toposfactor::CliOptions options;
  std::uint64_t seed = 0;
  std::string checks;
  app.add_option("command", options.command, "command to run")->required();
  app.add_option("names", options.args, "names and .cat/.diag workspace files");
  app.add_option("--emit", options.emit, "export format")->check(CLI::IsMember({"json", "dot"}));
  app.add_option("--out", options.out, "write the export to this path");
  auto* seed_opt = app.add_option("--seed", seed, "random seed for sampling commands");
  app.add_option("--check", checks, "comma separated checks (proetale build)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*seed_opt) options.seed = seed;
  std::string item;
  for (char ch : checks + ",") {
    if (ch == ',') {
      if (!item.empty()) options.checks.push_back(item);
      item.clear();
    } else {
      item.push_back(ch);
    }
  }

  const auto result = toposfactor::run_cli(options);
  std::cout << result.output;
  std::cerr << result.error;
  return result.exit_code;
}

#include <gtest/gtest.h>

#include "json.hpp"

#include "oracles/test_data.hpp"
#include "toposfactor/cli.hpp"

using namespace toposfactor;

namespace {

std::string basic() { return testdata::root() + "/basic.cat"; }
std::string invalid(const std::string& f) { return testdata::root() + "/invalid/" + f; }

CliResult run(std::string command, std::vector<std::string> args, std::string emit = "") {
  CliOptions o;
  o.command = std::move(command);
  o.args = std::move(args);
  o.emit = std::move(emit);
  return run_cli(o);
}

ErrorCode parse_error(std::string_view text) {
  try {
    parse_workspace(text, "t.cat");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::UnknownCommand;
}

}  // namespace

TEST(Parse, CategoryFunctorAndPresheaf) {
  const auto ws = parse_workspace(R"(
    category C { objects: a, b ; f, g : a -> b }
    functor F : Arrow -> C { 0 |-> a ; 1 |-> b ; f |-> g }
    presheaf P on C { a = {x} ; b = {y, z} }
  )");
  const auto& c = *ws.category("C");
  EXPECT_EQ(c.num_morphisms(), 4u);
  EXPECT_EQ(ws.functor("F").on_morphism(fixtures::arrow()->morphism_id("f")), c.morphism_id("g"));
  EXPECT_EQ(ws.presheaf("P").size(1), 2u);
}

TEST(Parse, FixtureNamesResolve) {
  const auto ws = parse_workspace("functor s : One -> Sq { x |-> top }");
  EXPECT_EQ(ws.functor("s").codomain()->name(), "Sq");
}

TEST(Parse, DiagnosticsCarryPositions) {
  try {
    parse_workspace("category C {\n  objects: a\n  f : a => a\n}", "t.cat");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("t.cat:3:"), std::string::npos) << e.what();
  }
}

TEST(Parse, ErrorKinds) {
  EXPECT_EQ(parse_error("category C { objects: a"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("functor F : One -> Nowhere { x |-> y }"), ErrorCode::UnresolvedName);
  EXPECT_EQ(parse_error("category C { objects: a } category C { objects: b }"),
            ErrorCode::DuplicateName);
  EXPECT_EQ(parse_error("category C { objects: a, b ; f, g : a -> b ; h : b -> b }"),
            ErrorCode::MissingComposite);
  EXPECT_EQ(parse_error("category C { objects: a, b ; f, g : a -> b ; h : b -> a }"),
            ErrorCode::NonAssociative);
  EXPECT_EQ(parse_error("functor F : ParPair -> Arrow { 0 |-> 1 ; 1 |-> 0 }"),
            ErrorCode::UnmappedMorphism);
}

TEST(Print, RoundTripsTheBasicWorkspace) {
  const auto ws = load_workspace({basic()});
  const auto printed = print_workspace(ws);
  const auto again = parse_workspace(printed, "printed.cat");
  EXPECT_EQ(print_workspace(again), printed);
  EXPECT_TRUE(*again.category("Chain3") == *ws.category("Chain3"));
  EXPECT_EQ(again.functor("u"), ws.functor("u"));
  EXPECT_TRUE(isomorphic(again.presheaf("F"), ws.presheaf("F")));
  EXPECT_TRUE(again.topology("J") == ws.topology("J"));
}

TEST(Print, RoundTripsDiagramFixtures) {
  for (const auto& fx : testdata::diagram_fixtures()) {
    auto ws = load_workspace({testdata::root() + "/diagrams/" + fx.file});
    const auto printed = print_workspace(ws);
    const auto again = parse_workspace(printed, fx.file);
    EXPECT_EQ(print_workspace(again), printed) << fx.file;
  }
}

TEST(Cli, VerdictsAndExitCodes) {
  auto r = run("check", {"final", "v", basic()});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("true"), std::string::npos);
  r = run("check", {"final", "w", basic()});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("false"), std::string::npos);
  EXPECT_EQ(run("check", {"final", "nope", basic()}).exit_code, 1);
  EXPECT_EQ(run("frobnicate", {basic()}).exit_code, 1);
  EXPECT_EQ(run("lift", {"w", "E", basic()}).exit_code, 1);
  EXPECT_EQ(run("check", {"final", "v", testdata::root() + "/missing.cat"}).exit_code, 1);
}

TEST(Cli, InvalidFixtures) {
  EXPECT_EQ(run("print", {invalid("syntax_error.cat")}).exit_code, 2);
  EXPECT_EQ(run("print", {invalid("unresolved.cat")}).exit_code, 2);
  EXPECT_EQ(run("print", {invalid("duplicate.cat")}).exit_code, 2);
  EXPECT_EQ(run("print", {invalid("not_cofiltered.diag")}).exit_code, 2);
  EXPECT_EQ(run("proetale", {"build", invalid("missing_pullback.diag")}).exit_code, 1);
  EXPECT_EQ(run("proetale", {"build", invalid("missing_identity.diag")}).exit_code, 1);
  const auto r = run("print", {invalid("syntax_error.cat")});
  EXPECT_NE(r.error.find("syntax_error.cat:3:16"), std::string::npos) << r.error;
}

TEST(Cli, JsonExport) {
  const auto r = run("check", {"tc", "u", basic()}, "json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j.at("command"), "check tc u");
  EXPECT_TRUE(j.at("verdict").is_boolean());
  EXPECT_TRUE(j.at("data").is_object());
}

TEST(Cli, DotExport) {
  auto r = run("factor", {"comprehensive", "u", basic()}, "dot");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output.rfind("digraph", 0), 0u);
  r = run("proetale", {"build", testdata::root() + "/diagrams/arrow_sq_corner.diag"}, "dot");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("bold"), std::string::npos);
  EXPECT_EQ(run("check", {"subcanonical", "J", basic()}, "dot").exit_code, 1);
}

TEST(Cli, SweepDependsOnlyOnTheSeed) {
  CliOptions o;
  o.command = "sweep";
  o.args = {"tc", "30"};
  o.emit = "json";
  o.seed = 12;
  const auto a = run_cli(o);
  const auto b = run_cli(o);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
}

// Copyright 2026 The qrv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <random>

#include "qrv/json_io.hpp"
#include "qrv/lang.hpp"
#include "qrv/parser.hpp"

using namespace qrv;

namespace {

std::string corpus(const std::string& name) {
  return std::string(QRV_CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("parse_program: coin game structure") {
  Program prog = parse_program(read_text_file(corpus("rqmc.qrp")));
  REQUIRE(prog.var_decls.size() == 1);
  REQUIRE(prog.var_decls[0].name == "q");
  REQUIRE(prog.var_decls[0].dim == 2);
  REQUIRE(prog.procs.size() == 2);
  REQUIRE(prog.procs[0].name == "Alice");
  REQUIRE(prog.procs[1].name == "Bob");
  const auto& alice = std::get<CaseS>(prog.procs[0].body->node);
  REQUIRE(alice.meas == "M");
  REQUIRE(alice.arms.size() == 3);
  REQUIRE(std::holds_alternative<UnitS>(alice.arms[0].body->node));
  REQUIRE(std::holds_alternative<CallS>(alice.arms[1].body->node));
  REQUIRE(std::holds_alternative<BottomS>(alice.arms[2].body->node));
  const auto& main_seq = std::get<SeqS>(prog.main->node);
  REQUIRE(std::holds_alternative<InitS>(main_seq.first->node));
  REQUIRE(std::holds_alternative<CallS>(main_seq.second->node));
}

TEST_CASE("parse_program: bare skip and deferred name resolution") {
  Program prog = parse_program(":: skip");
  REQUIRE(prog.var_decls.empty());
  REQUIRE(std::holds_alternative<SkipS>(prog.main->node));

  // One-armed case over a two-outcome measurement parses fine; the
  // completeness check belongs to typecheck.
  Program partial = parse_program(
      "var q : bool\n:: case M [q] { 0 -> skip }");
  REQUIRE_NOTHROW(partial);
  partial.measurements["M"][0] = Mat::Identity(2, 2) * std::sqrt(0.5);
  partial.measurements["M"][1] = Mat::Identity(2, 2) * std::sqrt(0.5);
  REQUIRE_THROWS_MATCHES(typecheck(partial), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::MissingArm;
                         }));
}

TEST_CASE("parse_program: syntax errors carry positions") {
  try {
    parse_program("var q : bool\n:: call Alice(");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::SyntaxError);
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
  }
  REQUIRE_THROWS_AS(parse_program(""), Error);
  REQUIRE_THROWS_AS(parse_program(":: skip extra"), Error);
  REQUIRE_THROWS_AS(parse_program(":: local q ; skip ; release p"), Error);
}

TEST_CASE("round-trip: parse of pretty_print is the identity on the corpus") {
  namespace fs = std::filesystem;
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(corpus(""))) {
    if (entry.path().extension() != ".qrp") continue;
    ++seen;
    Program prog = parse_program(read_text_file(entry.path().string()));
    Program again = parse_program(pretty_print(prog));
    REQUIRE(prog.var_decls.size() == again.var_decls.size());
    REQUIRE(prog.procs.size() == again.procs.size());
    for (std::size_t i = 0; i < prog.procs.size(); ++i) {
      REQUIRE(prog.procs[i].name == again.procs[i].name);
      REQUIRE(prog.procs[i].formals == again.procs[i].formals);
      REQUIRE(stmt_equal(prog.procs[i].body, again.procs[i].body));
    }
    REQUIRE(stmt_equal(prog.main, again.main));
  }
  REQUIRE(seen >= 1);
}

TEST_CASE("parser never crashes on arbitrary bytes") {
  std::mt19937_64 rng(42);
  std::string charset =
      "abqp01 \n;:=|<>{}[]()*->,procvarcaseendskipbotlocalreleasecall\x01\xff";
  for (int it = 0; it < 500; ++it) {
    std::string input;
    const int len = static_cast<int>(rng() % 160);
    for (int i = 0; i < len; ++i) input.push_back(charset[rng() % charset.size()]);
    try {
      (void)parse_program(input);
    } catch (const Error&) {
      // Every failure must surface as a structured error.
    }
  }
  SUCCEED("no crash on fuzz inputs");
}

TEST_CASE("matrix literals round-trip through JSON") {
  Mat m(2, 2);
  m << cd(0.25, -1), cd(0, 2), cd(3, 0), cd(-0.5, 0.125);
  Mat back = mat_from_json(mat_to_json(m));
  REQUIRE(max_abs_diff(m, back) < 1e-12);

  // Bare numbers are accepted as real entries.
  json j = json::array({json::array({1, 0}), json::array({0, 1})});
  REQUIRE_THROWS_AS(mat_from_json(json::array()), Error);
}

TEST_CASE("bindings load into the program environment") {
  Program prog = parse_program(read_text_file(corpus("rqmc.qrp")));
  load_bindings(prog, read_json_file(corpus("rqmc.bindings.json")));
  REQUIRE(prog.unitaries.count("H") == 1);
  REQUIRE(prog.measurements.at("M").size() == 3);
  REQUIRE(prog.predicates.count("plus") == 1);
  REQUIRE_NOTHROW(typecheck(prog));

  json round = bindings_to_json(prog);
  Program again = parse_program(read_text_file(corpus("rqmc.qrp")));
  load_bindings(again, round);
  REQUIRE(max_abs_diff(prog.unitaries.at("H"), again.unitaries.at("H")) <
          1e-12);
}

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

#include "qrv/json_io.hpp"
#include "qrv/lang.hpp"
#include "qrv/parser.hpp"

using namespace qrv;

namespace {

std::string corpus(const std::string& name) {
  return std::string(QRV_CORPUS_DIR) + "/" + name;
}

Program load_coin_game() {
  Program prog = parse_program(read_text_file(corpus("rqmc.qrp")));
  load_bindings(prog, read_json_file(corpus("rqmc.bindings.json")));
  return prog;
}

bool kind_is(const Error& e, ErrorKind k) { return e.kind() == k; }

}  // namespace

TEST_CASE("typecheck accepts the coin game and rejects broken bindings") {
  Program prog = load_coin_game();
  REQUIRE_NOTHROW(typecheck(prog));
  REQUIRE_NOTHROW(typecheck(typecheck(prog)));  // idempotent

  SECTION("a lone projector is not a complete measurement") {
    Program bad = prog;
    bad.measurements["M"].erase(1);
    bad.measurements["M"].erase(2);
    REQUIRE_THROWS_MATCHES(typecheck(bad), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::IncompleteMeasurement);
                           }));
  }
  SECTION("non-unitary binding") {
    Program bad = prog;
    bad.unitaries["H"](0, 0) = cd(2, 0);
    REQUIRE_THROWS_MATCHES(typecheck(bad), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::NonUnitary);
                           }));
  }
  SECTION("missing case arm") {
    Program bad = prog;
    bad.procs[0].body = parse_statement("case M [q] { 0 -> skip 1 -> skip }");
    REQUIRE_THROWS_MATCHES(typecheck(bad), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::MissingArm);
                           }));
  }
  SECTION("arity mismatch on call") {
    Program bad = prog;
    bad.main = parse_statement("call Alice(q)");
    REQUIRE_THROWS_MATCHES(typecheck(bad), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::ArityMismatch);
                           }));
  }
  SECTION("unknown names") {
    Program bad = prog;
    bad.main = parse_statement("[q] *= Nope");
    REQUIRE_THROWS_MATCHES(typecheck(bad), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::UnknownName);
                           }));
  }
}

TEST_CASE("typecheck verifies parameter lists componentwise") {
  Program prog;
  prog.var_decls = {{"a", VarKind::Boolean, 2},
                    {"b", VarKind::Integer, 4},
                    {"c", VarKind::Integer, 4}};
  prog.procs.push_back({"p", {"a", "b"}, stmt_skip()});
  prog.main = stmt_call("p", {"a", "c"});
  REQUIRE_NOTHROW(typecheck(prog));  // c matches b componentwise
  prog.main = stmt_call("p", {"c", "b"});  // c is int[4], formal a is bool
  REQUIRE_THROWS_MATCHES(typecheck(prog), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return kind_is(e, ErrorKind::TypeMismatch);
                         }));
}

TEST_CASE("substitute_vars renames free occurrences") {
  Program prog;
  prog.var_decls = {{"q", VarKind::Boolean, 2}, {"p", VarKind::Boolean, 2}};
  auto s = stmt_init("q");
  auto t = substitute_vars(prog, s, {{"q", "p"}});
  REQUIRE(stmt_equal(t, stmt_init("p")));

  // A map not touching the statement gives back an equal statement.
  auto u = substitute_vars(prog, s, {{"x", "y"}});
  REQUIRE(stmt_equal(u, s));

  // A swap composed with itself cancels on capture-free statements.
  auto body = parse_statement("q :=|0> ; [q p] *= U ; call f(q)");
  auto fwd = substitute_vars(prog, body, {{"q", "p"}, {"p", "q"}});
  auto back = substitute_vars(prog, fwd, {{"q", "p"}, {"p", "q"}});
  REQUIRE(stmt_equal(back, body));
}

TEST_CASE("substitute_vars avoids capture by local binders") {
  Program prog;
  prog.var_decls = {{"q", VarKind::Boolean, 2},
                    {"p", VarKind::Boolean, 2},
                    {"r", VarKind::Boolean, 2}};
  // local p binds p; renaming q -> p must not capture.
  auto s = parse_statement("local p ; [p q] *= U ; release p");
  auto t = substitute_vars(prog, s, {{"q", "p"}});
  const auto& loc = std::get<LocalS>(t->node);
  REQUIRE(loc.vars.size() == 1);
  REQUIRE(loc.vars[0] != "p");
  const auto& unit = std::get<UnitS>(loc.body->node);
  REQUIRE(unit.vars == std::vector<std::string>{loc.vars[0], "p"});

  // A binder shadows the substitution domain.
  auto shadow = substitute_vars(prog, s, {{"p", "r"}});
  REQUIRE(stmt_equal(shadow, s));
}

TEST_CASE("fresh_vars supplies typed reserved names") {
  auto f1 = fresh_vars({{"q", 2}}, {"q"});
  REQUIRE(f1.size() == 1);
  REQUIRE(f1[0].substr(0, 2) == "$r");

  auto f2 = fresh_vars({{"q", 16}, {"p", 2}}, {f1[0]});
  REQUIRE(f2.size() == 2);
  REQUIRE(f2[0] != f2[1]);
  // Dimensions ride along with the name.
  Program prog;
  REQUIRE(prog.reg(f2[0]).dim == 16);
  REQUIRE(prog.reg(f2[1]).dim == 2);
}

TEST_CASE("unroll: base case, self-loop, one-step expansion") {
  Program prog = load_coin_game();

  REQUIRE(stmt_equal(unroll(prog, "Alice", 0), stmt_bottom()));

  // A procedure that only calls itself unrolls to skip; (skip; bot).
  Program loop;
  loop.procs.push_back({"P", {}, stmt_call("P", {})});
  loop.main = stmt_call("P", {});
  auto two = unroll(loop, "P", 2);
  REQUIRE(stmt_equal(
      two, stmt_seq(stmt_skip(), stmt_seq(stmt_skip(), stmt_bottom()))));

  // One-step unrolling of the countdown procedure.
  Program toy;
  toy.var_decls = {{"q", VarKind::Integer, 16}};
  toy.procs.push_back(
      {"toy", {},
       parse_statement("case M [q] { 0 -> skip 1 -> [q] *= Um1 ; call toy() ; "
                       "[q] *= Up1 }")});
  auto once = unroll(toy, "toy", 1);
  // The call becomes (skip; bot) in place.
  auto expect = stmt_case(
      "M", {"q"},
      {{0, stmt_skip()},
       {1, stmt_seq(stmt_unit({"q"}, "Um1"),
                    stmt_seq(stmt_seq(stmt_skip(), stmt_bottom()),
                             stmt_unit({"q"}, "Up1")))}});
  REQUIRE(stmt_equal(once, expect));

  // Unrolled bodies are ground at every depth.
  for (int k = 0; k <= 5; ++k) {
    REQUIRE_FALSE(contains_call(unroll(prog, "Alice", k)));
    REQUIRE_FALSE(contains_call(unroll(prog, "Bob", k)));
    REQUIRE_FALSE(contains_call(unroll(toy, "toy", k)));
  }
}

TEST_CASE("unroll substitutes actuals for formals") {
  Program prog;
  prog.var_decls = {{"y", VarKind::Boolean, 2}, {"z", VarKind::Boolean, 2}};
  prog.procs.push_back({"p", {"y"}, stmt_init("y")});
  auto s = unroll(prog, "p", 1, {"z"});
  REQUIRE(stmt_equal(s, stmt_init("z")));
}

TEST_CASE("state_footprint includes globals referenced by callees") {
  Program prog = load_coin_game();
  auto fp = state_footprint(prog, prog.main);
  REQUIRE(fp.size() == 1);
  REQUIRE(fp[0].name == "q");

  auto fp2 = state_footprint(prog, stmt_call("Alice", {}));
  REQUIRE(fp2.size() == 1);
  REQUIRE(fp2[0].name == "q");
}

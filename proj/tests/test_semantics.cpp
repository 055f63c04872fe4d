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
#include "qrv/semantics.hpp"
#include "support/random_programs.hpp"

using namespace qrv;

namespace {

std::string corpus(const std::string& name) {
  return std::string(QRV_CORPUS_DIR) + "/" + name;
}

Program load_coin_game() {
  Program prog = parse_program(read_text_file(corpus("rqmc.qrp")));
  load_bindings(prog, read_json_file(corpus("rqmc.bindings.json")));
  typecheck(prog);
  return prog;
}

const Regs Q{{"q", 2}};

ComplexMatrix ket0() { return ComplexMatrix::ket_bra(Q, 0, 0); }

ComplexMatrix plus_proj() {
  Mat m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return ComplexMatrix(Q, m);
}

SuperOp alice_closed_form(const Program& prog) {
  SuperOp hh = scale(1.0 / 3.0, SuperOp(Q, {prog.unitaries.at("H")}));
  SuperOp hx = scale(1.0 / 3.0, SuperOp(Q, {prog.unitaries.at("HX")}));
  return add(hh, hx);
}

}  // namespace

TEST_CASE("step: skip, bottom, and measurement branching") {
  Program prog = load_coin_game();

  auto skip_succ = step(prog, Config{stmt_skip(), ket0()});
  REQUIRE(skip_succ.size() == 1);
  REQUIRE_FALSE(skip_succ[0].first.has_value());
  REQUIRE(skip_succ[0].second.terminal());
  REQUIRE(max_abs_diff(skip_succ[0].second.state, ket0()) < 1e-12);

  auto bot_succ = step(prog, Config{stmt_bottom(), ket0()});
  REQUIRE(bot_succ.size() == 1);
  REQUIRE(bot_succ[0].second.terminal());
  REQUIRE(bot_succ[0].second.state.trace().real() < 1e-15);

  // Alice's measurement splits |0><0| into weights 1/4, 1/2, 1/4.
  auto case_succ = step(prog, Config{prog.procs[0].body, ket0()});
  REQUIRE(case_succ.size() == 3);
  REQUIRE(case_succ[0].first == Label(0));
  REQUIRE(case_succ[1].first == Label(1));
  REQUIRE(case_succ[2].first == Label(2));
  REQUIRE(std::abs(case_succ[0].second.state.trace().real() - 0.25) < 1e-12);
  REQUIRE(std::abs(case_succ[1].second.state.trace().real() - 0.5) < 1e-12);
  REQUIRE(std::abs(case_succ[2].second.state.trace().real() - 0.25) < 1e-12);
}

TEST_CASE("replay: the winning two-round run lands on (1/16)|+><+|") {
  Program prog = load_coin_game();
  std::vector<Label> labels{std::nullopt, std::nullopt, 1,          std::nullopt,
                            0,            std::nullopt, 0,          std::nullopt};
  Config final_config = replay_trace(prog, prog.main, ket0(), labels);
  REQUIRE(final_config.terminal());
  REQUIRE(max_abs_diff(final_config.state, plus_proj().scaled(1.0 / 16.0)) <=
          1e-12);

  // An inapplicable label falls into the bottom configuration.
  Config stuck = replay_trace(prog, prog.main, ket0(), {Label(7)});
  REQUIRE(stuck.stuck);
}

TEST_CASE("explore: single traces and geometric tails") {
  Program prog = load_coin_game();

  auto just_skip = explore(prog, stmt_skip(), ket0());
  REQUIRE(just_skip.traces.size() == 1);
  REQUIRE_FALSE(just_skip.truncated);
  REQUIRE(max_abs_diff(just_skip.output_sum, ket0()) < 1e-12);

  ExploreLimits limits;
  limits.max_steps = 200;
  auto game = explore(prog, prog.main, ket0(), limits);
  auto third = ComplexMatrix::identity(Q).scaled(1.0 / 3.0);
  REQUIRE(max_abs_diff(game.output_sum, third) < 1e-6 + game.lost_mass);

  // The 1/16 winning trace is among the enumerated ones.
  bool found = false;
  std::vector<Label> want{std::nullopt, std::nullopt, 1,          std::nullopt,
                          0,            std::nullopt, 0,          std::nullopt};
  for (const auto& t : game.traces)
    if (t.labels == want) {
      found = true;
      REQUIRE(max_abs_diff(t.final_config.state,
                           plus_proj().scaled(1.0 / 16.0)) < 1e-12);
    }
  REQUIRE(found);
}

TEST_CASE("explore: case-free programs yield at most one trace") {
  Rng rng(42);
  Regs ab{{"a", 2}, {"b", 2}};
  int seen = 0;
  for (int it = 0; it < 60 && seen < 8; ++it) {
    Program prog = testing::random_program(rng, 2);
    std::function<bool(const StmtPtr&)> has_case = [&](const StmtPtr& s) {
      return std::visit(
          [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CaseS>) {
              return true;
            } else if constexpr (std::is_same_v<T, SeqS>) {
              return has_case(n.first) || has_case(n.second);
            } else if constexpr (std::is_same_v<T, LocalS>) {
              return has_case(n.body);
            } else {
              return false;
            }
          },
          s->node);
    };
    if (has_case(prog.main)) continue;
    ++seen;
    ComplexMatrix rho(ab, rng.pdop(4));
    auto res = explore(prog, prog.main, rho, {1000, 1e-300});
    REQUIRE(res.traces.size() <= 1);  // a bottom leaf zeroes the only branch
  }
  REQUIRE(seen > 0);
}

TEST_CASE("trace values never increase along a run") {
  Program prog = load_coin_game();
  ExploreLimits limits;
  limits.max_steps = 40;
  auto game = explore(prog, prog.main, ket0(), limits);
  REQUIRE(!game.traces.empty());
  for (const auto& t : game.traces) {
    Config c{prog.main, ket0()};
    double mass = c.state.trace().real();
    for (const auto& l : t.labels) {
      c = step_replay(prog, c, l);
      REQUIRE_FALSE(c.stuck);
      const double next = c.state.trace().real();
      REQUIRE(next <= mass + 1e-12);
      mass = next;
    }
  }
}

TEST_CASE("denote: bottom, the first player's fixed point, local identity") {
  Program prog = load_coin_game();

  REQUIRE(choi_equal(denote(prog, stmt_bottom(), Q), SuperOp::zero(Q), 1e-12));

  DenoteStats stats;
  SuperOp alice = denote(prog, stmt_call("Alice", {}), Q, {}, &stats);
  REQUIRE(choi_equal(alice, alice_closed_form(prog), 1e-6));
  REQUIRE(stats.max_call_iterations <= 30);

  // local p; skip; release p denotes the identity.
  Program with_p = prog;
  with_p.var_decls.push_back({"p", VarKind::Boolean, 2});
  auto loc = stmt_local({"p"}, stmt_skip());
  REQUIRE(choi_equal(denote(with_p, loc, Q), SuperOp::identity(Q), 1e-12));
}

TEST_CASE("denote: whole game sends any unit state to I/3") {
  Program prog = load_coin_game();
  SuperOp game = denote(prog, prog.main, Q);
  Rng rng(42);
  for (int i = 0; i < 5; ++i) {
    ComplexMatrix rho(Q, rng.pdop(2));
    REQUIRE(max_abs_diff(apply(game, rho),
                         ComplexMatrix::identity(Q).scaled(1.0 / 3.0)) < 1e-6);
  }
}

TEST_CASE("denote: unrolling approximants are monotone") {
  Program prog = load_coin_game();
  for (const char* proc : {"Alice", "Bob"}) {
    SuperOp prev = denote(prog, unroll(prog, proc, 0), Q);
    for (int k = 1; k <= 5; ++k) {
      SuperOp cur = denote(prog, unroll(prog, proc, k), Q);
      REQUIRE(qop_leq(prev, cur));
      prev = cur;
    }
  }
}

TEST_CASE("denote: procedure denotations are fixed points of the body map") {
  Program prog = load_coin_game();
  SuperOp alice = denote(prog, stmt_call("Alice", {}), Q);
  SuperOp bob = denote(prog, stmt_call("Bob", {}), Q);

  // Replace each call by a parameter hole bound to the computed
  // denotation; the body must reproduce the procedure's denotation.
  auto alice_body =
      stmt_case("M", {"q"},
                {{0, stmt_unit({"q"}, "H")},
                 {1, stmt_param_hole("wb", {"q"})},
                 {2, stmt_bottom()}});
  DenoteOptions opts;
  opts.params.emplace("wb", bob);
  SuperOp via_hole = denote(prog, alice_body, Q, opts);
  REQUIRE(choi_equal(via_hole, alice, 2e-6));

  auto bob_body = stmt_case(
      "MP", {"q"},
      {{0, stmt_param_hole("wa", {"q"})}, {1, stmt_unit({"q"}, "HX")}});
  DenoteOptions opts2;
  opts2.params.emplace("wa", alice);
  REQUIRE(choi_equal(denote(prog, bob_body, Q, opts2), bob, 2e-6));

  REQUIRE_THROWS_MATCHES(
      denote(prog, alice_body, Q), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::UnboundParam;
      }));
}

TEST_CASE("agreement: game within 1e-6, skip exact") {
  Program prog = load_coin_game();
  ExploreLimits limits;
  limits.max_steps = 200;
  auto report = check_sem_agreement(prog, prog.main, ket0(), limits);
  REQUIRE(report.max_dev < 1e-6 + report.lost_mass);

  auto exact = check_sem_agreement(prog, stmt_skip(), ket0());
  REQUIRE(exact.max_dev == 0.0);
}

TEST_CASE("agreement: exhaustive path enumeration matches denotation") {
  Rng rng(42);
  Regs ab{{"a", 2}, {"b", 2}};
  for (int checked = 0; checked < 50; ++checked) {
    Program prog = testing::random_program(rng, 3);
    ComplexMatrix rho(ab, rng.pdop(4));
    auto report = check_sem_agreement(prog, prog.main, rho, {4000, 1e-300});
    REQUIRE_FALSE(report.truncated);
    REQUIRE(report.max_dev < 1e-8);
  }
}

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
#include "qrv/transformers.hpp"
#include "qrv/verifier.hpp"

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
const Regs QD4{{"d", 4}};

ComplexMatrix ketbra(const Regs& r, std::int64_t i, std::int64_t j) {
  return ComplexMatrix::ket_bra(r, i, j);
}

ComplexMatrix plus_proj() {
  Mat m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return ComplexMatrix(Q, m);
}

// sum_i <i|X|i> |i><i|: measure in the computational basis, then ask X.
Pqpt diagonal_of_variable(const Regs& regs) {
  std::vector<Mat> kraus;
  const std::int64_t d = total_dim(regs);
  for (std::int64_t i = 0; i < d; ++i) {
    Mat k = Mat::Zero(d, d);
    k(i, i) = 1;
    kraus.push_back(std::move(k));
  }
  return Pqpt({PqptFactor{regs, "X"}}, SuperOp(regs, std::move(kraus)),
              SuperOp::zero(regs));
}

}  // namespace

TEST_CASE("eval: bare variables, diagonal sandwiches, literals") {
  Pqpt x = Pqpt::variable("X", Q);
  Assignment v{{"X", ketbra(Q, 0, 0).entries()}};
  REQUIRE(max_abs_diff(eval_pqpt(x, v), ketbra(Q, 0, 0)) < 1e-12);

  // The diagonal-projection term evaluated at |n><n| gives back |n><n|.
  Regs d16{{"q", 16}};
  Pqpt diag = diagonal_of_variable(d16);
  for (std::int64_t n : {0, 5, 15}) {
    Assignment vn{{"X", ComplexMatrix::ket_bra(d16, n, n).entries()}};
    REQUIRE(max_abs_diff(eval_pqpt(diag, vn),
                         ComplexMatrix::ket_bra(d16, n, n)) < 1e-12);
  }

  Pqpt lit = Pqpt::literal(plus_proj());
  REQUIRE(lit.params().empty());
  REQUIRE(max_abs_diff(eval_pqpt(lit), plus_proj()) < 1e-10);

  REQUIRE_THROWS_MATCHES(eval_pqpt(x, {}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::MissingAssignment;
                         }));
}

TEST_CASE("every constructed term evaluates to a quantum predicate") {
  Rng rng(42);
  for (int it = 0; it < 30; ++it) {
    const double w = rng.uniform(0.1, 0.9);
    Pqpt p({PqptFactor{Q, "X"}}, rng.superop(Q, 2, w),
           rng.superop(Q, 2, 1.0 - w));
    for (int k = 0; k < 5; ++k) {
      Assignment v{{"X", rng.qpred(2)}};
      REQUIRE(is_qpred(eval_pqpt(p, v)));
    }
  }
  // A Kraus pair exceeding the identity is rejected at construction.
  REQUIRE_THROWS_MATCHES(
      Pqpt({PqptFactor{Q, "X"}}, SuperOp::identity(Q), SuperOp::identity(Q)),
      Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::NotTraceNonIncreasing;
      }));
}

TEST_CASE("subst: literals collapse parameters, identity is neutral") {
  Regs d16{{"q", 16}};
  Pqpt diag = diagonal_of_variable(d16);
  const std::int64_t n = 7;
  Pqpt lit = Pqpt::literal(ComplexMatrix::ket_bra(d16, n, n));
  Pqpt out = subst_pqpt(diag, {{"X", lit}});
  REQUIRE(out.params().empty());
  REQUIRE(max_abs_diff(eval_pqpt(out), ComplexMatrix::ket_bra(d16, n, n)) <
          1e-10);

  Pqpt x = Pqpt::variable("X", Q);
  Pqpt same = subst_pqpt(x, {{"X", x}});
  REQUIRE(pqpt_equal(same, x, 1e-10));
}

TEST_CASE("subst: semantics commutes with evaluation") {
  Rng rng(43);
  Regs r{{"q", 2}};
  for (int it = 0; it < 20; ++it) {
    const double w = rng.uniform(0.2, 0.8);
    Pqpt p({PqptFactor{r, "X"}}, rng.superop(r, 2, w),
           rng.superop(r, 1, 1.0 - w));
    const double wq = rng.uniform(0.2, 0.8);
    Pqpt q({PqptFactor{r, "Y"}}, rng.superop(r, 2, wq),
           rng.superop(r, 1, 1.0 - wq));
    Pqpt composed = subst_pqpt(p, {{"X", q}});
    for (int k = 0; k < 4; ++k) {
      Assignment v{{"Y", rng.qpred(2)}};
      ComplexMatrix direct = eval_pqpt(composed, v);
      Assignment via{{"X", eval_pqpt(q, v).entries()}};
      REQUIRE(max_abs_diff(direct, eval_pqpt(p, via)) < 1e-9);
    }
  }
}

TEST_CASE("subst: counter-shift substitution from the search derivation") {
  // A' = sum_{i>=1} A_{ii} |i-1><i-1| as E*(A) with shift Kraus operators.
  std::vector<Mat> shift;
  for (std::int64_t k = 1; k < 4; ++k) {
    Mat m = Mat::Zero(4, 4);
    m(k, k - 1) = 1;  // |k><k-1|
    shift.push_back(std::move(m));
  }
  Pqpt a_shift({PqptFactor{QD4, "A"}}, SuperOp(QD4, std::move(shift)),
               SuperOp::zero(QD4));
  // Target with two parameters: A (x) B, E the identity.
  Regs s2{{"s", 2}};
  Regs joint{QD4[0], s2[0]};
  Pqpt target({PqptFactor{QD4, "A"}, PqptFactor{s2, "B"}},
              SuperOp::identity(joint), SuperOp::zero(joint));
  Pqpt out = subst_pqpt(target, {{"A", a_shift}});
  Rng rng(7);
  Assignment v{{"A", rng.qpred(4)}, {"B", rng.qpred(2)}};
  ComplexMatrix got = eval_pqpt(out, v);
  // Oracle: build the expected matrix directly.
  Mat expect = Mat::Zero(8, 8);
  for (std::int64_t i = 1; i < 4; ++i)
    expect.block(2 * (i - 1), 2 * (i - 1), 2, 2) = v["A"](i, i) * v["B"];
  REQUIRE(max_abs_diff(got.entries(), expect) < 1e-10);

  // With two or more parameters the substituend must have a zero F part.
  Pqpt bad({PqptFactor{QD4, "A"}}, scale(0.5, SuperOp::identity(QD4)),
           scale(0.5, SuperOp::identity(QD4)));
  REQUIRE_THROWS_MATCHES(
      subst_pqpt(target, {{"A", bad}}), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::SideConditionViolated;
      }));
}

TEST_CASE("conjunction: literals tensor, shared registers clash") {
  Regs p{{"p", 2}};
  Pqpt a = Pqpt::literal(ketbra(Q, 0, 0));
  Pqpt b = Pqpt::literal(ComplexMatrix(p, plus_proj().entries()));
  Pqpt both = pqpt_conj(a, b);
  REQUIRE(max_abs_diff(
              eval_pqpt(both),
              tensor(ketbra(Q, 0, 0),
                     ComplexMatrix(p, plus_proj().entries()))) < 1e-10);

  REQUIRE_THROWS_MATCHES(
      pqpt_conj(a, Pqpt::literal(ketbra(Q, 1, 1))), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::SideConditionViolated;
      }));

  // Parameterized (x) constant keeps the parameter.
  Pqpt x = Pqpt::variable("X", Q);
  Pqpt mixed = pqpt_conj(x, b);
  REQUIRE(mixed.params() == std::set<std::string>{"X"});
  Assignment v{{"X", ketbra(Q, 1, 1).entries()}};
  REQUIRE(max_abs_diff(eval_pqpt(mixed, v),
                       tensor(ketbra(Q, 1, 1),
                              ComplexMatrix(p, plus_proj().entries()))) <
          1e-10);
}

TEST_CASE("disjunction: the measured-case precondition form") {
  Program prog = load_coin_game();
  std::vector<SuperOp> selections;
  for (int m : {0, 1, 2})
    selections.push_back(SuperOp(Q, {prog.measurements.at("M").at(m)}));
  std::vector<Pqpt> branches{Pqpt::literal(ketbra(Q, 0, 0)),
                             Pqpt::literal(plus_proj()),
                             Pqpt::literal(ComplexMatrix::zero(Q))};
  Pqpt pre = pqpt_disj(selections, branches);
  // sum_m M_m^dag P_m M_m with scaled-identity operators.
  ComplexMatrix expect = ketbra(Q, 0, 0).scaled(0.25).plus(
      plus_proj().scaled(0.5));
  REQUIRE(max_abs_diff(eval_pqpt(pre), expect) < 1e-10);

  // Selections that jointly exceed the identity are rejected.
  std::vector<SuperOp> too_big{SuperOp::identity(Q), SuperOp::identity(Q)};
  std::vector<Pqpt> two{branches[0], branches[1]};
  REQUIRE_THROWS_MATCHES(
      pqpt_disj(too_big, two), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::SideConditionViolated;
      }));
}

TEST_CASE("order: diagonal-component comparisons decide via comparable parts") {
  // <0|X|0> |0><0|  below  <0|X|0>|0><0| + <1|X|1>|1><1|.
  Mat k0 = Mat::Zero(2, 2);
  k0(0, 0) = 1;
  Mat k1 = Mat::Zero(2, 2);
  k1(1, 1) = 1;
  Pqpt lhs({PqptFactor{Q, "X"}}, SuperOp(Q, {k0}), SuperOp::zero(Q));
  Pqpt rhs({PqptFactor{Q, "X"}}, SuperOp(Q, {k0, k1}), SuperOp::zero(Q));
  OrderFormula f{lhs, rhs, OrderRel::Leq};
  Verdict v = pqpt_order(f);
  REQUIRE(v.status == Status::Valid);
  REQUIRE_FALSE(v.sampled);

  OrderFormula rev{rhs, lhs, OrderRel::Leq};
  REQUIRE(pqpt_order(rev).status == Status::Invalid);
}

TEST_CASE("order: basis-change equality of sandwiches") {
  // H|0><0| X |0><0|H written two ways: Kraus |0><0|H versus |0><+|.
  Mat h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  Mat lhs_k = ketbra(Q, 0, 0).entries() * h;
  Mat rhs_k = Mat::Zero(2, 2);
  rhs_k(0, 0) = s;
  rhs_k(0, 1) = s;  // |0><+|
  Pqpt lhs({PqptFactor{Q, "X"}}, SuperOp(Q, {lhs_k}), SuperOp::zero(Q));
  Pqpt rhs({PqptFactor{Q, "X"}}, SuperOp(Q, {rhs_k}), SuperOp::zero(Q));
  OrderFormula f{lhs, rhs, OrderRel::Eq};
  REQUIRE(pqpt_order(f).status == Status::Valid);
}

TEST_CASE("order: plain operator comparisons and witnesses") {
  Pqpt eye = Pqpt::literal(ComplexMatrix::identity(Q));
  Pqpt p0 = Pqpt::literal(ketbra(Q, 0, 0));
  OrderFormula f{eye, p0, OrderRel::Leq};
  Verdict v = pqpt_order(f);
  REQUIRE(v.status == Status::Invalid);
  REQUIRE(v.witness.has_value());
  REQUIRE(v.witness->eigenvalue < -0.9);
  REQUIRE(is_psd(v.witness->state));

  REQUIRE_THROWS_MATCHES(
      pqpt_order({Pqpt::variable("X", Q), p0, OrderRel::Leq}), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::IllegitimateFormula;
      }));
}

TEST_CASE("order: sampling refutes, never confirms") {
  Mat h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  // E parts rotate to different bases: neither dominates.
  Pqpt lhs({PqptFactor{Q, "X"}}, scale(0.5, SuperOp(Q, {h})),
           SuperOp::zero(Q));
  Pqpt rhs({PqptFactor{Q, "X"}}, scale(0.5, SuperOp::identity(Q)),
           SuperOp::zero(Q));
  Verdict v = pqpt_order({lhs, rhs, OrderRel::Leq}, 32, 42);
  // X := |+><+| gives lhs = |0><0|/2 vs rhs = |+><+|/2: refutable.
  REQUIRE(v.status == Status::Invalid);
  REQUIRE(v.sampled);
  REQUIRE(v.witness.has_value());

  // A true formula with incomparable-looking construction still decides
  // via the additive characterization when the difference is CP.
  Pqpt small({PqptFactor{Q, "X"}}, scale(0.25, SuperOp(Q, {h})),
             SuperOp::zero(Q));
  Pqpt big({PqptFactor{Q, "X"}},
           add(scale(0.25, SuperOp(Q, {h})), scale(0.5, SuperOp::identity(Q)),
               false),
           SuperOp::zero(Q));
  Verdict u = pqpt_order({small, big, OrderRel::Leq}, 32, 42);
  REQUIRE(u.status == Status::Valid);
}

TEST_CASE("fwp and fwlp: bottom, unitaries, the first player") {
  Program prog = load_coin_game();
  Pqpt post = Pqpt::literal(plus_proj());

  Pqpt wp_bot = fwp(prog, stmt_bottom(), post);
  REQUIRE(max_abs_diff(eval_pqpt(wp_bot), ComplexMatrix::zero(Q)) < 1e-12);
  Pqpt wlp_bot = fwlp(prog, stmt_bottom(), post);
  REQUIRE(max_abs_diff(eval_pqpt(wlp_bot), ComplexMatrix::identity(Q)) <
          1e-12);

  // fwp(q *= H, |+><+|) = |0><0|.
  Pqpt wp_h = fwp(prog, stmt_unit({"q"}, "H"), post);
  REQUIRE(max_abs_diff(eval_pqpt(wp_h), ketbra(Q, 0, 0)) < 1e-10);

  // fwp(call Alice, |+><+|) = (|0><0| + |1><1|)/3.
  Pqpt wp_alice = fwp(prog, stmt_call("Alice", {}), post);
  ComplexMatrix expect = ComplexMatrix::identity(Q).scaled(1.0 / 3.0);
  REQUIRE(max_abs_diff(eval_pqpt(wp_alice), expect) < 1e-6);
}

TEST_CASE("fwp pads postconditions on fewer registers") {
  Program prog = load_coin_game();
  prog.var_decls.push_back({"p", VarKind::Boolean, 2});
  Regs p{{"p", 2}};
  // Statement touches p, postcondition lives on q only.
  Pqpt post = Pqpt::literal(ketbra(Q, 0, 0));
  Pqpt wp = fwp(prog, stmt_unit({"p"}, "H"), post);
  REQUIRE(wp.vars().size() == 2);
  ComplexMatrix v = eval_pqpt(wp);
  REQUIRE(max_abs_diff(
              v, tensor(ketbra(Q, 0, 0), ComplexMatrix::identity(p))) < 1e-10);
}

TEST_CASE("duality: fwlp is the complement of fwp on complements") {
  Program prog = load_coin_game();
  Rng rng(42);
  std::vector<StmtPtr> statements{
      stmt_skip(),
      stmt_bottom(),
      stmt_init("q"),
      stmt_unit({"q"}, "H"),
      prog.procs[0].body,
      prog.main,
      stmt_call("Bob", {}),
  };
  for (const auto& s : statements) {
    for (int it = 0; it < 20; ++it) {
      ComplexMatrix qpred(Q, rng.qpred(2));
      Pqpt post = Pqpt::literal(qpred);
      Pqpt post_c = Pqpt::literal(ComplexMatrix::identity(Q).minus(qpred));
      ComplexMatrix lhs = eval_pqpt(fwlp(prog, s, post));
      ComplexMatrix rhs = ComplexMatrix::identity(Q).minus(
          eval_pqpt(fwp(prog, s, post_c)));
      REQUIRE(max_abs_diff(lhs, rhs) < 1e-7);
    }
  }
}

TEST_CASE("wp soundness and wlp characterization against the semantics") {
  Program prog = load_coin_game();
  Rng rng(43);
  std::vector<StmtPtr> statements{stmt_unit({"q"}, "HX"), prog.procs[1].body,
                                  prog.main};
  for (const auto& s : statements) {
    SuperOp sem = denote(prog, s, Q);
    for (int it = 0; it < 10; ++it) {
      ComplexMatrix qpred(Q, rng.qpred(2));
      ComplexMatrix rho(Q, rng.pdop(2));
      ComplexMatrix out = apply(sem, rho);
      const double wp_val =
          (eval_pqpt(fwp(prog, s, Pqpt::literal(qpred))).entries() *
           rho.entries())
              .trace()
              .real();
      const double direct = (qpred.entries() * out.entries()).trace().real();
      REQUIRE(std::abs(wp_val - direct) < 1e-7);

      const double wlp_val =
          (eval_pqpt(fwlp(prog, s, Pqpt::literal(qpred))).entries() *
           rho.entries())
              .trace()
              .real();
      const double expected =
          direct + rho.trace().real() - out.trace().real();
      REQUIRE(std::abs(wlp_val - expected) < 1e-7);
    }
  }
}

TEST_CASE("approximants of the weakest precondition grow monotonically") {
  Program prog = load_coin_game();
  Pqpt post = Pqpt::literal(plus_proj());
  Pqpt prev = fwp(prog, unroll(prog, "Alice", 0), post);
  for (int k = 1; k <= 5; ++k) {
    Pqpt cur = fwp(prog, unroll(prog, "Alice", k), post);
    Verdict v = pqpt_order({prev, cur, OrderRel::Leq});
    REQUIRE(v.status == Status::Valid);
    prev = cur;
  }
}

TEST_CASE("limit_pqpt: constants, geometric weights, almost-sure termination") {
  Pqpt constant = Pqpt::literal(plus_proj());
  auto same = limit_pqpt([&](std::int64_t) { return constant; },
                         LimitMode::Upper);
  REQUIRE(same.iterations == 1);
  REQUIRE(pqpt_equal(same.value, constant, 1e-9));

  // Coin-game weights: sum_{k>=1, 2k-1<=n} 4^{-k} on |0><0| plus the even
  // counterpart on |1><1| converge to I/3.
  auto coin = [&](std::int64_t n) {
    double a = 0, b = 0;
    for (std::int64_t k = 1; 2 * k - 1 <= n; ++k) a += std::pow(0.25, k);
    for (std::int64_t k = 1; 2 * k <= n; ++k) b += std::pow(0.25, k);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return Pqpt::literal(ComplexMatrix(Q, m));
  };
  auto lim = limit_pqpt(coin, LimitMode::Upper);
  REQUIRE(max_abs_diff(eval_pqpt(lim.value),
                       ComplexMatrix::identity(Q).scaled(1.0 / 3.0)) < 1e-7);

  // P_n = (1 - 2^{-n}) I climbs to the identity.
  auto as_term = [&](std::int64_t n) {
    return Pqpt::literal(
        ComplexMatrix::identity(Q).scaled(1.0 - std::pow(0.5, n)));
  };
  auto one = limit_pqpt(as_term, LimitMode::Upper);
  REQUIRE(max_abs_diff(eval_pqpt(one.value), ComplexMatrix::identity(Q)) <
          1e-6);

  // Alternating sequences are not monotone.
  REQUIRE_THROWS_MATCHES(
      limit_pqpt(
          [&](std::int64_t n) {
            return Pqpt::literal(
                ComplexMatrix::identity(Q).scaled(n % 2 ? 0.5 : 0.25));
          },
          LimitMode::Upper),
      Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.kind() == ErrorKind::NotMonotone;
      }));
}

TEST_CASE("assertion JSON round-trips") {
  Program prog = load_coin_game();
  json lit = {{"literal", "I"}, {"vars", {"q"}}};
  Pqpt eye = pqpt_from_json(lit, prog);
  REQUIRE(max_abs_diff(eval_pqpt(eye), ComplexMatrix::identity(Q)) < 1e-10);

  json named = {{"named", "plus"}, {"vars", {"q"}}};
  REQUIRE(max_abs_diff(eval_pqpt(pqpt_from_json(named, prog)), plus_proj()) <
          1e-10);

  Pqpt x = Pqpt::variable("X", Q);
  Pqpt back = pqpt_from_json(pqpt_to_json(x), prog);
  REQUIRE(pqpt_equal(x, back, 1e-9));

  json scaled = {{"scale", "1/3"}, {"of", lit}};
  REQUIRE(max_abs_diff(eval_pqpt(pqpt_from_json(scaled, prog)),
                       ComplexMatrix::identity(Q).scaled(1.0 / 3.0)) < 1e-10);

  json sum = {{"sum", {named, {{"named", "minus"}, {"vars", {"q"}}}}}};
  REQUIRE(max_abs_diff(eval_pqpt(pqpt_from_json(sum, prog)),
                       ComplexMatrix::identity(Q)) < 1e-10);
}

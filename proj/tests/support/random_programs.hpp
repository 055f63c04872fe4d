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

#ifndef QRV_TESTS_RANDOM_PROGRAMS_HPP
#define QRV_TESTS_RANDOM_PROGRAMS_HPP

#include <functional>

#include "qrv/ast.hpp"
#include "qrv/random.hpp"

namespace qrv::testing {

// Complete measurement with n outcomes: random operators whitened so the
// gram matrices sum to the identity.
inline std::map<int, Mat> random_measurement(Rng& rng, std::int64_t dim,
                                             int outcomes) {
  std::vector<Mat> ops;
  for (int i = 0; i < outcomes; ++i) ops.push_back(rng.gaussian_matrix(dim, dim));
  Mat gram = Mat::Zero(dim, dim);
  for (const auto& op : ops) gram += op.adjoint() * op;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  Mat inv_sqrt = es.operatorInverseSqrt();
  std::map<int, Mat> out;
  for (int i = 0; i < outcomes; ++i) out[i] = ops[i] * inv_sqrt;
  return out;
}

// Non-recursive programs over two qubits (plus one local scratch qubit),
// nesting depth bounded by `depth`. Exhaustive path enumeration stays cheap,
// which makes them the oracle for the semantics-agreement checks.
inline Program random_program(Rng& rng, int depth = 3) {
  Program prog;
  prog.var_decls = {{"a", VarKind::Boolean, 2},
                    {"b", VarKind::Boolean, 2},
                    {"l", VarKind::Boolean, 2}};
  prog.unitaries["UA"] = rng.unitary(2);
  prog.unitaries["UB"] = rng.unitary(2);
  prog.unitaries["UAB"] = rng.unitary(4);
  prog.measurements["MA"] = random_measurement(rng, 2, 2);
  prog.measurements["MAB"] = random_measurement(rng, 4, 3);

  std::function<StmtPtr(int, bool)> gen = [&](int d, bool allow_local) -> StmtPtr {
    const std::int64_t leaf = rng.uniform_int(0, 5);
    if (d <= 0 || rng.uniform() < 0.25) {
      switch (leaf) {
        case 0: return stmt_skip();
        case 1: return stmt_bottom();
        case 2: return stmt_init("a");
        case 3: return stmt_init("b");
        case 4: return stmt_unit({"a"}, "UA");
        default: return stmt_unit({"a", "b"}, "UAB");
      }
    }
    switch (rng.uniform_int(0, 3)) {
      case 0:
        return stmt_seq(gen(d - 1, allow_local), gen(d - 1, allow_local));
      case 1: {
        std::vector<CaseArm> arms;
        for (int m = 0; m < 2; ++m) arms.push_back({m, gen(d - 1, allow_local)});
        return stmt_case("MA", {"a"}, std::move(arms));
      }
      case 2: {
        std::vector<CaseArm> arms;
        for (int m = 0; m < 3; ++m) arms.push_back({m, gen(d - 1, allow_local)});
        return stmt_case("MAB", {"a", "b"}, std::move(arms));
      }
      default:
        if (allow_local)
          return stmt_local({"l"}, stmt_seq(stmt_unit({"l"}, "UB"),
                                            gen(d - 1, false)));
        return stmt_seq(gen(d - 1, false), gen(d - 1, false));
    }
  };
  prog.main = gen(depth, true);
  return prog;
}

}  // namespace qrv::testing

#endif  // QRV_TESTS_RANDOM_PROGRAMS_HPP

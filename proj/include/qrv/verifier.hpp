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

#ifndef QRV_VERIFIER_HPP
#define QRV_VERIFIER_HPP

#include "qrv/transformers.hpp"

namespace qrv {

enum class Mode { Partial, Total, Exact };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Partial: return "partial";
    case Mode::Total: return "total";
    case Mode::Exact: return "exact";
  }
  return "partial";
}

struct HoareTriple {
  Pqpt pre;
  StmtPtr stmt;
  Pqpt post;
  Mode mode = Mode::Partial;
};

struct CheckOptions {
  Tolerances tol;
  std::int64_t order_samples = 64;
  std::uint64_t seed = 42;
};

namespace detail {

inline Verdict check_against(const Program& prog, const HoareTriple& t,
                             Fxp kind, OrderRel rel, const CheckOptions& opts) {
  if (t.pre.params() != t.post.params())
    fail(ErrorKind::IllegitimateFormula,
         "pre- and postcondition must carry the same parameters");
  DenoteOptions dopts;
  dopts.tol = opts.tol;
  DenoteStats stats;
  Pqpt bound = precondition(prog, t.stmt, t.post, kind, dopts, &stats);
  Pqpt pre = t.pre;
  if (pre.vars().size() != bound.vars().size()) {
    Regs extra;
    for (const auto& r : bound.vars())
      if (!contains_reg(pre.vars(), r.name)) extra.push_back(r);
    pre = pre.padded(extra, opts.tol);
  }
  OrderFormula f;
  f.lhs = std::move(pre);
  f.rhs = std::move(bound);
  f.relation = rel;
  // Computed fixed points sit a convergence residual below the true limit,
  // so the comparison runs with that much slack.
  Verdict v = pqpt_order(f, opts.order_samples, opts.seed, opts.tol,
                         opts.tol.limit_slack());
  v.iterations = stats.max_call_iterations;
  return v;
}

}  // namespace detail

// Partial correctness: pre below the weakest liberal precondition.
inline Verdict check_partial(const Program& prog, const HoareTriple& t,
                             const CheckOptions& opts = {}) {
  return detail::check_against(prog, t, Fxp::Wlp, OrderRel::Leq, opts);
}

// Total correctness: pre below the weakest precondition.
inline Verdict check_total(const Program& prog, const HoareTriple& t,
                           const CheckOptions& opts = {}) {
  return detail::check_against(prog, t, Fxp::Wp, OrderRel::Leq, opts);
}

// Exact probabilistic correctness: pre equal to the weakest precondition.
inline Verdict check_exact(const Program& prog, const HoareTriple& t,
                           const CheckOptions& opts = {}) {
  return detail::check_against(prog, t, Fxp::Wp, OrderRel::Eq, opts);
}

inline Verdict check_triple(const Program& prog, const HoareTriple& t,
                            const CheckOptions& opts = {}) {
  switch (t.mode) {
    case Mode::Partial: return check_partial(prog, t, opts);
    case Mode::Total: return check_total(prog, t, opts);
    case Mode::Exact: return check_exact(prog, t, opts);
  }
  fail(ErrorKind::BadInput, "unknown triple mode");
}

struct ProbResult {
  double delta = 0.0;
  bool exact = false;
  std::int64_t iterations = 0;
};

// Probability bound for landing in `post` from states in the range of the
// projector `pre`. When the weakest precondition restricted to that range
// is a multiple of the projector, the probability is exact; otherwise the
// largest eigenvalue of the restriction is an upper bound.
inline ProbResult prob_query(const Program& prog, const ComplexMatrix& pre_proj,
                             const StmtPtr& s, const ComplexMatrix& post_pred,
                             const CheckOptions& opts = {}) {
  DenoteOptions dopts;
  dopts.tol = opts.tol;
  DenoteStats stats;
  Pqpt wp = fwp(prog, s, Pqpt::literal(post_pred, opts.tol), dopts, &stats);
  ComplexMatrix r = eval_pqpt(wp);
  ComplexMatrix proj = embed(pre_proj, r.vars());
  ComplexMatrix restricted = proj.times(r).times(proj);
  const double rank = proj.trace().real();
  ProbResult out;
  out.iterations = stats.max_call_iterations;
  if (rank <= 0.5) fail(ErrorKind::BadInput, "precondition projector is zero");
  const double delta = restricted.trace().real() / rank;
  if (max_abs_diff(restricted, proj.scaled(delta)) <= opts.tol.limit_slack()) {
    out.delta = delta;
    out.exact = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(restricted.entries(),
                                        Eigen::EigenvaluesOnly);
  out.delta = es.eigenvalues().maxCoeff();
  out.exact = false;
  return out;
}

}  // namespace qrv

#endif  // QRV_VERIFIER_HPP

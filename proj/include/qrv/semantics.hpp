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

#ifndef QRV_SEMANTICS_HPP
#define QRV_SEMANTICS_HPP

#include <deque>
#include <functional>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrv/lang.hpp"
#include "qrv/parser.hpp"
#include "qrv/superop.hpp"

namespace qrv {

// Transition label: an outcome for measurement steps, epsilon otherwise.
using Label = std::optional<int>;

inline std::string label_text(const Label& l) {
  return l ? std::to_string(*l) : "eps";
}

// A configuration <S, rho>. A null statement is the empty statement E, i.e.
// rho is a final output. `stuck` marks the failure configuration reached by
// replaying an inapplicable label.
struct Config {
  StmtPtr stmt;
  ComplexMatrix state;
  bool stuck = false;

  bool terminal() const { return !stuck && stmt == nullptr; }
  bool live() const { return !stuck && stmt != nullptr; }
};

namespace detail {

inline SuperOp init_channel(const Reg& q) {
  std::vector<Mat> kraus;
  Mat basis = Mat::Identity(q.dim, q.dim);
  for (std::int64_t i = 0; i < q.dim; ++i) {
    Mat k = Mat::Zero(q.dim, q.dim);
    k.col(i) = basis.col(0);  // |0><i|
    kraus.push_back(std::move(k));
  }
  return SuperOp(Regs{q}, std::move(kraus));
}

inline SuperOp measurement_channel(const Mat& op, const Regs& regs) {
  return SuperOp(regs, {op});
}

}  // namespace detail

// One-step successors of a live configuration, in deterministic order. Case
// statements produce one successor per declared outcome, labelled by it;
// every other applicable rule yields a single epsilon successor.
inline std::vector<std::pair<Label, Config>> step(const Program& prog,
                                                  const Config& c) {
  if (!c.live()) fail(ErrorKind::IllTyped, "step on a non-live configuration");
  std::vector<std::pair<Label, Config>> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BottomS>) {
          out.push_back({std::nullopt,
                         Config{nullptr, ComplexMatrix::zero(c.state.vars())}});
        } else if constexpr (std::is_same_v<T, SkipS>) {
          out.push_back({std::nullopt, Config{nullptr, c.state}});
        } else if constexpr (std::is_same_v<T, InitS>) {
          auto rho = apply(detail::init_channel(prog.reg(n.var)), c.state);
          out.push_back({std::nullopt, Config{nullptr, std::move(rho)}});
        } else if constexpr (std::is_same_v<T, UnitS>) {
          auto it = prog.unitaries.find(n.op);
          if (it == prog.unitaries.end())
            fail(ErrorKind::IllTyped, "unbound unitary " + n.op);
          Regs regs = prog.regs_of(n.vars);
          auto rho = apply(SuperOp(regs, {it->second}), c.state);
          out.push_back({std::nullopt, Config{nullptr, std::move(rho)}});
        } else if constexpr (std::is_same_v<T, SeqS>) {
          for (auto& [l, succ] : step(prog, Config{n.first, c.state})) {
            StmtPtr rest = succ.stmt ? stmt_seq(succ.stmt, n.second) : n.second;
            out.push_back({l, Config{std::move(rest), std::move(succ.state)}});
          }
        } else if constexpr (std::is_same_v<T, CaseS>) {
          auto it = prog.measurements.find(n.meas);
          if (it == prog.measurements.end())
            fail(ErrorKind::IllTyped, "unbound measurement " + n.meas);
          Regs regs = prog.regs_of(n.vars);
          for (const auto& arm : n.arms) {
            auto op = it->second.find(arm.outcome);
            if (op == it->second.end())
              fail(ErrorKind::IllTyped, "arm without a declared outcome");
            auto rho =
                apply(detail::measurement_channel(op->second, regs), c.state);
            out.push_back({arm.outcome, Config{arm.body, std::move(rho)}});
          }
        } else if constexpr (std::is_same_v<T, LocalS>) {
          std::set<std::string> used;
          collect_all_names(n.body, used);
          for (const auto& r : c.state.vars()) used.insert(r.name);
          for (const auto& v : n.vars) used.insert(v);
          Regs templates;
          for (const auto& v : n.vars) templates.push_back(prog.reg(v));
          auto fresh = fresh_vars(templates, used);
          std::map<std::string, std::string> map;
          for (std::size_t i = 0; i < n.vars.size(); ++i)
            map[n.vars[i]] = fresh[i];
          Regs fresh_regs;
          for (std::size_t i = 0; i < fresh.size(); ++i)
            fresh_regs.push_back(Reg{fresh[i], templates[i].dim});
          auto rho = apply(SuperOp::prepare_zero(c.state.vars(), fresh_regs),
                           c.state);
          StmtPtr body = substitute_vars(prog, n.body, map);
          out.push_back({std::nullopt,
                         Config{stmt_seq(body, stmt_release(fresh)),
                                std::move(rho)}});
        } else if constexpr (std::is_same_v<T, CallS>) {
          const ProcDecl* decl = prog.find_proc(n.proc);
          if (!decl) fail(ErrorKind::IllTyped, "undeclared procedure " + n.proc);
          std::map<std::string, std::string> map;
          for (std::size_t i = 0; i < n.actuals.size(); ++i)
            if (decl->formals[i] != n.actuals[i])
              map[decl->formals[i]] = n.actuals[i];
          out.push_back({std::nullopt,
                         Config{substitute_vars(prog, decl->body, map),
                                c.state}});
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          auto rho = partial_trace(c.state, n.vars);
          out.push_back({std::nullopt, Config{nullptr, std::move(rho)}});
        } else {
          static_assert(std::is_same_v<T, ParamHoleS>);
          fail(ErrorKind::IllTyped, "parameter holes have no transitions");
        }
      },
      c.stmt->node);
  return out;
}

// Label-directed stepping. A label no successor carries lands in the stuck
// configuration; this is the only way to reach it from well-typed programs.
inline Config step_replay(const Program& prog, const Config& c, const Label& l) {
  for (auto& [lab, succ] : step(prog, c))
    if (lab == l) return succ;
  Config bottom;
  bottom.stuck = true;
  bottom.state = c.state;
  return bottom;
}

inline Config replay_trace(const Program& prog, const StmtPtr& s,
                           const ComplexMatrix& rho,
                           const std::vector<Label>& labels) {
  Config c{s, rho};
  for (const auto& l : labels) {
    if (!c.live()) {
      Config bottom;
      bottom.stuck = true;
      bottom.state = c.state;
      return bottom;
    }
    c = step_replay(prog, c, l);
  }
  return c;
}

struct Trace {
  std::vector<Label> labels;
  Config final_config;
  double trace_value() const { return final_config.state.trace().real(); }
};

struct ExploreLimits {
  std::int64_t max_steps = 10000;
  double prune_trace = 1e-12;
};

struct ExploreResult {
  std::vector<Trace> traces;
  ComplexMatrix output_sum;
  bool truncated = false;
  double lost_mass = 0.0;
};

// Breadth-first enumeration of the multi-step transition relation. Branches
// whose trace falls below prune_trace are dropped (and reported); live
// branches at the step bound are likewise reported as truncation.
inline ExploreResult explore(const Program& prog, const StmtPtr& s,
                             const ComplexMatrix& rho,
                             const ExploreLimits& limits = {}) {
  ExploreResult result;
  result.output_sum = ComplexMatrix::zero(rho.vars());

  std::deque<std::pair<std::vector<Label>, Config>> queue;
  queue.push_back({{}, Config{s, rho}});
  while (!queue.empty()) {
    auto [labels, config] = std::move(queue.front());
    queue.pop_front();
    if (static_cast<std::int64_t>(labels.size()) >= limits.max_steps) {
      result.truncated = true;
      result.lost_mass += config.state.trace().real();
      continue;
    }
    for (auto& [l, succ] : step(prog, config)) {
      auto next_labels = labels;
      next_labels.push_back(l);
      const double mass = succ.state.trace().real();
      if (mass < limits.prune_trace) {
        if (mass > 1e-15) {
          result.truncated = true;
          result.lost_mass += mass;
        }
        continue;
      }
      if (succ.terminal()) {
        result.output_sum =
            result.output_sum.plus(embed(succ.state, rho.vars()));
        result.traces.push_back({std::move(next_labels), std::move(succ)});
      } else {
        queue.push_back({std::move(next_labels), std::move(succ)});
      }
    }
  }
  return result;
}

struct DenoteOptions {
  Tolerances tol;
  std::map<std::string, SuperOp> params;  // bindings for parameter holes
};

struct DenoteStats {
  std::int64_t max_call_iterations = 0;
};

namespace detail {

inline SuperOp lift_square(const Regs& sub, const std::vector<Mat>& kraus,
                           const Regs& ctx) {
  std::vector<Mat> lifted;
  lifted.reserve(kraus.size());
  for (const auto& k : kraus)
    lifted.push_back(embed(ComplexMatrix(sub, k), ctx).entries());
  return SuperOp(ctx, std::move(lifted));
}

inline SuperOp denote_impl(const Program& prog, const StmtPtr& s,
                           const Regs& ctx, const DenoteOptions& opts,
                           DenoteStats* stats,
                           std::map<std::pair<const Stmt*, std::string>,
                                    SuperOp>& memo);

inline std::string ctx_key(const Regs& ctx) {
  std::string key;
  for (const auto& r : ctx) key += r.name + ",";
  return key;
}

inline SuperOp denote_node(const Program& prog, const StmtPtr& s,
                           const Regs& ctx, const DenoteOptions& opts,
                           DenoteStats* stats,
                           std::map<std::pair<const Stmt*, std::string>,
                                    SuperOp>& memo) {
  return std::visit(
      [&](const auto& n) -> SuperOp {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BottomS>) {
          return SuperOp::zero(ctx);
        } else if constexpr (std::is_same_v<T, SkipS>) {
          return SuperOp::identity(ctx);
        } else if constexpr (std::is_same_v<T, InitS>) {
          auto chan = init_channel(prog.reg(n.var));
          return lift_square(chan.in_vars(), chan.kraus(), ctx);
        } else if constexpr (std::is_same_v<T, UnitS>) {
          auto it = prog.unitaries.find(n.op);
          if (it == prog.unitaries.end())
            fail(ErrorKind::IllTyped, "unbound unitary " + n.op);
          return lift_square(prog.regs_of(n.vars), {it->second}, ctx);
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return compose(denote_impl(prog, n.first, ctx, opts, stats, memo),
                         denote_impl(prog, n.second, ctx, opts, stats, memo));
        } else if constexpr (std::is_same_v<T, CaseS>) {
          auto it = prog.measurements.find(n.meas);
          if (it == prog.measurements.end())
            fail(ErrorKind::IllTyped, "unbound measurement " + n.meas);
          Regs regs = prog.regs_of(n.vars);
          SuperOp acc = SuperOp::zero(ctx);
          for (const auto& arm : n.arms) {
            auto op = it->second.find(arm.outcome);
            if (op == it->second.end())
              fail(ErrorKind::IllTyped, "arm without a declared outcome");
            SuperOp meas = lift_square(regs, {op->second}, ctx);
            SuperOp branch = compose(
                meas, denote_impl(prog, arm.body, ctx, opts, stats, memo));
            acc = add(acc, branch, /*check=*/false);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, LocalS>) {
          // Work over the block's own free registers; nested blocks would
          // otherwise compound the context dimension.
          {
            auto frees = free_vars(s);
            Regs sub;
            for (const auto& r : ctx)
              if (std::find(frees.begin(), frees.end(), r.name) != frees.end())
                sub.push_back(r);
            if (sub.size() < ctx.size()) {
              SuperOp narrow = denote_impl(prog, s, sub, opts, stats, memo);
              return lift_square(sub, narrow.canonicalized().kraus(), ctx);
            }
          }
          std::set<std::string> used;
          collect_all_names(n.body, used);
          for (const auto& r : ctx) used.insert(r.name);
          for (const auto& v : n.vars) used.insert(v);
          Regs templates;
          for (const auto& v : n.vars) templates.push_back(prog.reg(v));
          auto fresh = fresh_vars(templates, used);
          std::map<std::string, std::string> map;
          Regs fresh_regs;
          for (std::size_t i = 0; i < n.vars.size(); ++i) {
            map[n.vars[i]] = fresh[i];
            fresh_regs.push_back(Reg{fresh[i], templates[i].dim});
          }
          Regs inner_ctx = ctx;
          inner_ctx.insert(inner_ctx.end(), fresh_regs.begin(),
                           fresh_regs.end());
          StmtPtr body = substitute_vars(prog, n.body, map);
          SuperOp inner = denote_impl(prog, body, inner_ctx, opts, stats, memo);
          SuperOp prep = SuperOp::prepare_zero(ctx, fresh_regs);
          SuperOp tr = SuperOp::trace_out(ctx, fresh_regs);
          return compose(compose(prep, inner), tr);
        } else if constexpr (std::is_same_v<T, CallS>) {
          // The fixed point runs over the call's own registers and lifts
          // into the wider context afterwards. Approximants share subtrees
          // across depths; keeping one unroll cache and one memo makes
          // each iteration incremental.
          Regs sub = state_footprint(prog, s);
          for (auto& r : sub)
            if (!contains_reg(ctx, r.name))
              fail(ErrorKind::UnknownVariable,
                   "call touches register " + r.name + " outside the context");
          UnrollCache unroll_cache;
          std::map<std::pair<const Stmt*, std::string>, SuperOp> iter_memo;
          auto res = lub_sequence(
              [&](std::int64_t k) {
                StmtPtr ground = unroll(prog, n.proc, k, n.actuals,
                                        &unroll_cache);
                return denote_impl(prog, ground, sub, opts, stats, iter_memo);
              },
              opts.tol.fix_tol, opts.tol.max_iter, opts.tol);
          if (stats)
            stats->max_call_iterations =
                std::max(stats->max_call_iterations, res.iterations);
          return lift_square(sub, res.value.canonicalized().kraus(), ctx);
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          fail(ErrorKind::IllTyped,
               "release outside a local block has no denotation");
        } else {
          static_assert(std::is_same_v<T, ParamHoleS>);
          auto it = opts.params.find(n.name);
          if (it == opts.params.end())
            fail(ErrorKind::UnboundParam, "parameter " + n.name + " unbound");
          const SuperOp& bound = it->second;
          if (!bound.square())
            fail(ErrorKind::UnboundParam, "parameter " + n.name +
                                              " must be a square operation");
          return lift_square(bound.in_vars(), bound.kraus(), ctx);
        }
      },
      s->node);
}

inline SuperOp denote_impl(const Program& prog, const StmtPtr& s,
                           const Regs& ctx, const DenoteOptions& opts,
                           DenoteStats* stats,
                           std::map<std::pair<const Stmt*, std::string>,
                                    SuperOp>& memo) {
  auto key = std::make_pair(s.get(), ctx_key(ctx));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  SuperOp value = denote_node(prog, s, ctx, opts, stats, memo);
  memo.emplace(std::move(key), value);
  return value;
}

}  // namespace detail

// Compositional denotation of a statement as a quantum operation over the
// register context. Calls are resolved by iterating syntactic approximations
// to their least upper bound; local blocks prepare, run and trace out fresh
// registers.
inline SuperOp denote(const Program& prog, const StmtPtr& s, const Regs& ctx,
                      const DenoteOptions& opts = {},
                      DenoteStats* stats = nullptr) {
  std::map<std::pair<const Stmt*, std::string>, SuperOp> memo;
  return detail::denote_impl(prog, s, ctx, opts, stats, memo);
}

inline SuperOp denote(const Program& prog, const StmtPtr& s,
                      const DenoteOptions& opts = {},
                      DenoteStats* stats = nullptr) {
  return denote(prog, s, state_footprint(prog, s), opts, stats);
}

struct AgreementReport {
  double max_dev = 0.0;
  bool truncated = false;
  double lost_mass = 0.0;
};

// Largest elementwise gap between the denotational output and the summed
// operational outputs; the caller judges it against tolerance plus whatever
// slack the reported truncation warrants.
inline AgreementReport check_sem_agreement(const Program& prog, const StmtPtr& s,
                                           const ComplexMatrix& rho,
                                           const ExploreLimits& limits = {},
                                           const DenoteOptions& opts = {}) {
  SuperOp sem = denote(prog, s, rho.vars(), opts);
  ComplexMatrix denoted = apply(sem, rho);
  ExploreResult ops = explore(prog, s, rho, limits);
  AgreementReport report;
  report.max_dev = max_abs_diff(denoted, ops.output_sum);
  report.truncated = ops.truncated;
  report.lost_mass = ops.lost_mass;
  return report;
}

}  // namespace qrv

#endif  // QRV_SEMANTICS_HPP

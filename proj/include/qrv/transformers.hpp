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

#ifndef QRV_TRANSFORMERS_HPP
#define QRV_TRANSFORMERS_HPP

#include "qrv/pqpt.hpp"
#include "qrv/semantics.hpp"

namespace qrv {

enum class Fxp { Wp, Wlp };

namespace detail {

// Pulls a predicate term back through a channel: E and F compose with the
// channel, the base is untouched.
inline Pqpt pull_through(const Pqpt& p, const SuperOp& chan,
                         const Tolerances& tol) {
  return Pqpt(p.base(), compose(chan, p.e_part()), compose(chan, p.f_part()),
              tol);
}

// Liberal correction for a possibly diverging channel: adds the embedding
// of I - chan*(I) to the F side.
inline Pqpt add_nontermination(const Pqpt& p, const SuperOp& chan,
                               const Tolerances& tol) {
  ComplexMatrix survives =
      apply(dual(chan), ComplexMatrix::identity(p.vars()));
  ComplexMatrix leak = ComplexMatrix::identity(p.vars()).minus(survives);
  if (leak.entries().cwiseAbs().maxCoeff() <= tol.tol_eq) return p;
  Pqpt embedded = Pqpt::literal(leak, tol);
  SuperOp f = add(p.f_part(), embedded.f_part(), /*check=*/false);
  return Pqpt(p.base(), p.e_part(), std::move(f), tol);
}

inline Pqpt fxp_impl(const Program& prog, const StmtPtr& s, const Pqpt& post,
                     Fxp kind, const DenoteOptions& opts, DenoteStats* stats) {
  return std::visit(
      [&](const auto& n) -> Pqpt {
        using T = std::decay_t<decltype(n)>;
        const Tolerances& tol = opts.tol;
        if constexpr (std::is_same_v<T, BottomS>) {
          return kind == Fxp::Wp ? post.zero_like() : post.identity_like();
        } else if constexpr (std::is_same_v<T, SkipS>) {
          return post;
        } else if constexpr (std::is_same_v<T, InitS>) {
          auto chan = init_channel(prog.reg(n.var));
          return pull_through(post,
                              lift_square(chan.in_vars(), chan.kraus(),
                                          post.vars()),
                              tol);
        } else if constexpr (std::is_same_v<T, UnitS>) {
          auto it = prog.unitaries.find(n.op);
          if (it == prog.unitaries.end())
            fail(ErrorKind::IllTyped, "unbound unitary " + n.op);
          return pull_through(
              post, lift_square(prog.regs_of(n.vars), {it->second}, post.vars()),
              tol);
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return fxp_impl(prog, n.first,
                          fxp_impl(prog, n.second, post, kind, opts, stats),
                          kind, opts, stats);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          auto it = prog.measurements.find(n.meas);
          if (it == prog.measurements.end())
            fail(ErrorKind::IllTyped, "unbound measurement " + n.meas);
          Regs regs = prog.regs_of(n.vars);
          std::vector<SuperOp> selections;
          std::vector<Pqpt> branches;
          for (const auto& arm : n.arms) {
            auto op = it->second.find(arm.outcome);
            if (op == it->second.end())
              fail(ErrorKind::IllTyped, "arm without a declared outcome");
            selections.push_back(lift_square(regs, {op->second}, post.vars()));
            branches.push_back(
                fxp_impl(prog, arm.body, post, kind, opts, stats));
          }
          return pqpt_disj(selections, branches, tol);
        } else if constexpr (std::is_same_v<T, LocalS>) {
          std::set<std::string> used;
          collect_all_names(n.body, used);
          for (const auto& r : post.vars()) used.insert(r.name);
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
          Pqpt wide = post.padded(fresh_regs, tol);
          Pqpt inner = fxp_impl(prog, substitute_vars(prog, n.body, map), wide,
                                kind, opts, stats);
          // <0_r| inner |0_r>: fold the preparation into both Kraus sides;
          // the trailing identity factor on the fresh registers folds into
          // a partial trace on the output side.
          SuperOp prep = SuperOp::prepare_zero(post.vars(), fresh_regs);
          SuperOp tr = SuperOp::trace_out(post.vars(), fresh_regs);
          SuperOp e_new = compose(compose(prep, inner.e_part()), tr);
          SuperOp f_new = compose(compose(prep, inner.f_part()), tr);
          auto base = inner.base();
          base.pop_back();  // the identity factor the padding appended
          return Pqpt(std::move(base), std::move(e_new), std::move(f_new), tol);
        } else if constexpr (std::is_same_v<T, CallS>) {
          SuperOp chan = denote(prog, s, post.vars(), opts, stats);
          Pqpt pulled = pull_through(post, chan, tol);
          return kind == Fxp::Wp ? pulled
                                 : add_nontermination(pulled, chan, tol);
        } else if constexpr (std::is_same_v<T, ParamHoleS>) {
          auto it = opts.params.find(n.name);
          if (it == opts.params.end())
            fail(ErrorKind::UnboundParam, "parameter " + n.name + " unbound");
          SuperOp chan =
              lift_square(it->second.in_vars(), it->second.kraus(), post.vars());
          Pqpt pulled = pull_through(post, chan, tol);
          return kind == Fxp::Wp ? pulled
                                 : add_nontermination(pulled, chan, tol);
        } else {
          fail(ErrorKind::IllTyped,
               "statement outside the precondition fragment");
        }
      },
      s->node);
}

}  // namespace detail

// Formal weakest (liberal) precondition of a statement with respect to a
// postcondition term. The postcondition is first padded with identity
// factors for any program registers it does not mention; calls contribute
// their fixed-point denotation, and only bottom and calls distinguish the
// liberal transformer from the strict one.
inline Pqpt precondition(const Program& prog, const StmtPtr& s,
                         const Pqpt& post, Fxp kind,
                         const DenoteOptions& opts = {},
                         DenoteStats* stats = nullptr) {
  Regs ctx = post.vars();
  for (const auto& r : state_footprint(prog, s))
    if (!contains_reg(ctx, r.name)) ctx.push_back(r);
  Pqpt padded = post;
  if (ctx.size() != post.vars().size()) {
    Regs extra;
    for (const auto& r : ctx)
      if (!contains_reg(post.vars(), r.name)) extra.push_back(r);
    padded = post.padded(extra, opts.tol);
  }
  return detail::fxp_impl(prog, s, padded, kind, opts, stats);
}

inline Pqpt fwp(const Program& prog, const StmtPtr& s, const Pqpt& post,
                const DenoteOptions& opts = {}, DenoteStats* stats = nullptr) {
  return precondition(prog, s, post, Fxp::Wp, opts, stats);
}

inline Pqpt fwlp(const Program& prog, const StmtPtr& s, const Pqpt& post,
                 const DenoteOptions& opts = {}, DenoteStats* stats = nullptr) {
  return precondition(prog, s, post, Fxp::Wlp, opts, stats);
}

}  // namespace qrv

#endif  // QRV_TRANSFORMERS_HPP

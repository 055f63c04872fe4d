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

#ifndef QRV_LANG_HPP
#define QRV_LANG_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qrv/ast.hpp"

namespace qrv {

// Fresh registers live in a reserved namespace the parser cannot produce.
// The dimension rides along in the name so later lookups stay self-contained.
inline std::vector<std::string> fresh_vars(const Regs& templates,
                                           const std::set<std::string>& used) {
  std::vector<std::string> out;
  std::int64_t counter = 0;
  for (const auto& t : templates) {
    std::string name;
    for (;; ++counter) {
      if (counter > 1'000'000)
        fail(ErrorKind::FreshExhausted, "fresh register supply exhausted");
      name = "$r" + std::to_string(counter) + ":" + std::to_string(t.dim);
      if (!used.count(name)) break;
    }
    out.push_back(name);
    ++counter;
  }
  return out;
}

namespace detail {

inline std::string rename(const std::map<std::string, std::string>& map,
                          const std::string& name) {
  auto it = map.find(name);
  return it == map.end() ? name : it->second;
}

inline std::vector<std::string> rename_all(
    const std::map<std::string, std::string>& map,
    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(rename(map, n));
  return out;
}

}  // namespace detail

// Simultaneous renaming of free register occurrences. Local binders are
// never captured: a binder that collides with an incoming name is first
// renamed to a fresh register.
inline StmtPtr substitute_vars(const Program& prog, const StmtPtr& s,
                               const std::map<std::string, std::string>& map) {
  if (map.empty()) return s;
  return std::visit(
      [&](const auto& n) -> StmtPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BottomS>) {
          return s;
        } else if constexpr (std::is_same_v<T, SkipS>) {
          return s;
        } else if constexpr (std::is_same_v<T, InitS>) {
          return stmt_init(detail::rename(map, n.var));
        } else if constexpr (std::is_same_v<T, UnitS>) {
          return stmt_unit(detail::rename_all(map, n.vars), n.op);
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return stmt_seq(substitute_vars(prog, n.first, map),
                          substitute_vars(prog, n.second, map));
        } else if constexpr (std::is_same_v<T, CaseS>) {
          std::vector<CaseArm> arms;
          arms.reserve(n.arms.size());
          for (const auto& arm : n.arms)
            arms.push_back({arm.outcome, substitute_vars(prog, arm.body, map)});
          return stmt_case(n.meas, detail::rename_all(map, n.vars),
                           std::move(arms));
        } else if constexpr (std::is_same_v<T, LocalS>) {
          auto inner = map;
          for (const auto& v : n.vars) inner.erase(v);
          std::vector<std::string> colliding;
          for (const auto& v : n.vars)
            for (const auto& [from, to] : inner)
              if (to == v &&
                  std::find(colliding.begin(), colliding.end(), v) ==
                      colliding.end())
                colliding.push_back(v);
          StmtPtr body = n.body;
          std::vector<std::string> binder = n.vars;
          if (!colliding.empty()) {
            std::set<std::string> used;
            collect_all_names(body, used);
            used.insert(n.vars.begin(), n.vars.end());
            for (const auto& [from, to] : inner) {
              used.insert(from);
              used.insert(to);
            }
            Regs templates;
            for (const auto& v : colliding) templates.push_back(prog.reg(v));
            auto fresh = fresh_vars(templates, used);
            std::map<std::string, std::string> avoid;
            for (std::size_t i = 0; i < colliding.size(); ++i)
              avoid[colliding[i]] = fresh[i];
            body = substitute_vars(prog, body, avoid);
            for (auto& b : binder) {
              auto it = avoid.find(b);
              if (it != avoid.end()) b = it->second;
            }
          }
          if (inner.empty()) return stmt_local(std::move(binder), body);
          return stmt_local(std::move(binder), substitute_vars(prog, body, inner));
        } else if constexpr (std::is_same_v<T, CallS>) {
          return stmt_call(n.proc, detail::rename_all(map, n.actuals));
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          return stmt_release(detail::rename_all(map, n.vars));
        } else {
          static_assert(std::is_same_v<T, ParamHoleS>);
          return stmt_param_hole(n.name, detail::rename_all(map, n.vars));
        }
      },
      s->node);
}

namespace detail {

struct UnrollCache {
  std::map<std::tuple<std::string, std::int64_t, std::vector<std::string>>,
           StmtPtr>
      memo;
};

inline StmtPtr unroll_impl(const Program& prog, const std::string& proc,
                           std::int64_t k,
                           const std::vector<std::string>& actuals,
                           UnrollCache& cache);

inline StmtPtr expand_calls(const Program& prog, const StmtPtr& s,
                            std::int64_t k, UnrollCache& cache) {
  return std::visit(
      [&](const auto& n) -> StmtPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CallS>) {
          return stmt_seq(stmt_skip(),
                          unroll_impl(prog, n.proc, k, n.actuals, cache));
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return stmt_seq(expand_calls(prog, n.first, k, cache),
                          expand_calls(prog, n.second, k, cache));
        } else if constexpr (std::is_same_v<T, CaseS>) {
          std::vector<CaseArm> arms;
          arms.reserve(n.arms.size());
          for (const auto& arm : n.arms)
            arms.push_back({arm.outcome, expand_calls(prog, arm.body, k, cache)});
          return stmt_case(n.meas, n.vars, std::move(arms));
        } else if constexpr (std::is_same_v<T, LocalS>) {
          return stmt_local(n.vars, expand_calls(prog, n.body, k, cache));
        } else {
          return s;
        }
      },
      s->node);
}

inline StmtPtr unroll_impl(const Program& prog, const std::string& proc,
                           std::int64_t k,
                           const std::vector<std::string>& actuals,
                           UnrollCache& cache) {
  auto key = std::make_tuple(proc, k, actuals);
  auto it = cache.memo.find(key);
  if (it != cache.memo.end()) return it->second;

  StmtPtr result;
  if (k == 0) {
    result = stmt_bottom();
  } else {
    const ProcDecl* decl = prog.find_proc(proc);
    if (!decl) fail(ErrorKind::UnknownName, "undeclared procedure " + proc);
    if (decl->formals.size() != actuals.size())
      fail(ErrorKind::ArityMismatch, "call of " + proc + " with " +
                                         std::to_string(actuals.size()) +
                                         " arguments");
    StmtPtr ground = expand_calls(prog, decl->body, k - 1, cache);
    std::map<std::string, std::string> map;
    for (std::size_t i = 0; i < actuals.size(); ++i)
      if (decl->formals[i] != actuals[i]) map[decl->formals[i]] = actuals[i];
    result = substitute_vars(prog, ground, map);
  }
  cache.memo[key] = result;
  return result;
}

}  // namespace detail

// kth syntactic approximation of a procedure body: depth 0 is bottom, and
// each level substitutes (skip; body^(k-1)) for every call, simultaneously
// across mutually recursive procedures. The result contains no calls.
// Passing a cache across calls shares identical subtrees between depths,
// which the denotation memoizes on.
using UnrollCache = detail::UnrollCache;

inline StmtPtr unroll(const Program& prog, const std::string& proc,
                      std::int64_t k,
                      const std::vector<std::string>& actuals = {},
                      UnrollCache* cache = nullptr) {
  detail::UnrollCache local;
  const ProcDecl* decl = prog.find_proc(proc);
  if (!decl) fail(ErrorKind::UnknownName, "undeclared procedure " + proc);
  std::vector<std::string> args =
      actuals.empty() && !decl->formals.empty() ? decl->formals : actuals;
  return detail::unroll_impl(prog, proc, k, args, cache ? *cache : local);
}

namespace detail {

inline void check_stmt(const Program& prog, const StmtPtr& s,
                       const Tolerances& tol) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InitS>) {
          prog.reg(n.var);
        } else if constexpr (std::is_same_v<T, UnitS>) {
          auto it = prog.unitaries.find(n.op);
          if (it == prog.unitaries.end())
            fail(ErrorKind::UnknownName, "unbound unitary " + n.op);
          std::set<std::string> seen(n.vars.begin(), n.vars.end());
          if (seen.size() != n.vars.size())
            fail(ErrorKind::TypeMismatch, "repeated register in unitary application");
          if (it->second.rows() != total_dim(prog.regs_of(n.vars)))
            fail(ErrorKind::TypeMismatch,
                 "unitary " + n.op + " does not fit registers");
        } else if constexpr (std::is_same_v<T, SeqS>) {
          check_stmt(prog, n.first, tol);
          check_stmt(prog, n.second, tol);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          auto it = prog.measurements.find(n.meas);
          if (it == prog.measurements.end())
            fail(ErrorKind::UnknownName, "unbound measurement " + n.meas);
          std::set<std::string> seen(n.vars.begin(), n.vars.end());
          if (seen.size() != n.vars.size())
            fail(ErrorKind::TypeMismatch, "repeated register in measurement");
          const std::int64_t d = total_dim(prog.regs_of(n.vars));
          for (const auto& [m, mat] : it->second)
            if (mat.rows() != d)
              fail(ErrorKind::TypeMismatch,
                   "measurement " + n.meas + " does not fit registers");
          std::set<int> declared;
          for (const auto& [m, mat] : it->second) declared.insert(m);
          std::set<int> covered;
          for (const auto& arm : n.arms) {
            if (!declared.count(arm.outcome))
              fail(ErrorKind::TypeMismatch,
                   "arm for outcome " + std::to_string(arm.outcome) +
                       " not declared by " + n.meas);
            if (!covered.insert(arm.outcome).second)
              fail(ErrorKind::TypeMismatch,
                   "duplicate arm " + std::to_string(arm.outcome));
            check_stmt(prog, arm.body, tol);
          }
          for (int m : declared)
            if (!covered.count(m))
              fail(ErrorKind::MissingArm,
                   "case over " + n.meas + " misses outcome " +
                       std::to_string(m));
        } else if constexpr (std::is_same_v<T, LocalS>) {
          std::set<std::string> seen(n.vars.begin(), n.vars.end());
          if (seen.size() != n.vars.size())
            fail(ErrorKind::TypeMismatch, "repeated local register");
          for (const auto& v : n.vars) prog.reg(v);
          check_stmt(prog, n.body, tol);
        } else if constexpr (std::is_same_v<T, CallS>) {
          const ProcDecl* decl = prog.find_proc(n.proc);
          if (!decl) fail(ErrorKind::UnknownName, "undeclared procedure " + n.proc);
          if (decl->formals.size() != n.actuals.size())
            fail(ErrorKind::ArityMismatch,
                 n.proc + " takes " + std::to_string(decl->formals.size()) +
                     " parameters, got " + std::to_string(n.actuals.size()));
          std::set<std::string> seen(n.actuals.begin(), n.actuals.end());
          if (seen.size() != n.actuals.size())
            fail(ErrorKind::TypeMismatch,
                 "repeated register passed to " + n.proc);
          for (std::size_t i = 0; i < n.actuals.size(); ++i) {
            const VarDecl* formal = prog.find_var(decl->formals[i]);
            const VarDecl* actual = prog.find_var(n.actuals[i]);
            if (!formal || !actual)
              fail(ErrorKind::UnknownName, "undeclared register in call");
            if (formal->kind != actual->kind || formal->dim != actual->dim)
              fail(ErrorKind::TypeMismatch,
                   "parameter " + decl->formals[i] + " of " + n.proc +
                       " does not match " + n.actuals[i]);
          }
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          for (const auto& v : n.vars) prog.reg(v);
        } else if constexpr (std::is_same_v<T, ParamHoleS>) {
          for (const auto& v : n.vars) prog.reg(v);
        }
      },
      s->node);
}

}  // namespace detail

// Static checks: declarations resolve, bound unitaries are unitary, bound
// measurements are complete, dimensions fit, arms cover declared outcomes,
// and call sites match formals componentwise. Pure and idempotent.
inline const Program& typecheck(const Program& prog, const Tolerances& tol = {}) {
  std::set<std::string> names;
  for (const auto& v : prog.var_decls) {
    if (!names.insert(v.name).second)
      fail(ErrorKind::TypeMismatch, "duplicate declaration of " + v.name);
    if (v.kind == VarKind::Boolean && v.dim != 2)
      fail(ErrorKind::TypeMismatch, v.name + ": booleans have dimension 2");
    if (v.dim < 2 || (v.dim & (v.dim - 1)) != 0)
      fail(ErrorKind::TypeMismatch,
           v.name + ": dimension must be a power of two >= 2");
  }
  for (const auto& [name, u] : prog.unitaries) {
    if (u.rows() != u.cols())
      fail(ErrorKind::TypeMismatch, "unitary " + name + " is not square");
    Mat eye = Mat::Identity(u.rows(), u.cols());
    if (max_abs_diff(Mat(u * u.adjoint()), eye) > tol.tol_eq ||
        max_abs_diff(Mat(u.adjoint() * u), eye) > tol.tol_eq)
      fail(ErrorKind::NonUnitary, name + " is not unitary");
  }
  for (const auto& [name, ops] : prog.measurements) {
    if (ops.empty())
      fail(ErrorKind::IncompleteMeasurement, name + " has no outcomes");
    const std::int64_t d = ops.begin()->second.rows();
    Mat sum = Mat::Zero(d, d);
    for (const auto& [m, mat] : ops) {
      if (m < 0)
        fail(ErrorKind::TypeMismatch, name + ": outcomes must be non-negative");
      if (mat.rows() != d || mat.cols() != d)
        fail(ErrorKind::TypeMismatch, name + ": operator shapes differ");
      sum += mat.adjoint() * mat;
    }
    if (max_abs_diff(sum, Mat(Mat::Identity(d, d))) > tol.tol_eq)
      fail(ErrorKind::IncompleteMeasurement,
           name + ": operators do not sum to the identity");
  }
  std::set<std::string> procs;
  for (const auto& p : prog.procs) {
    if (!procs.insert(p.name).second)
      fail(ErrorKind::TypeMismatch, "duplicate procedure " + p.name);
    std::set<std::string> formals(p.formals.begin(), p.formals.end());
    if (formals.size() != p.formals.size())
      fail(ErrorKind::TypeMismatch, p.name + ": repeated formal parameter");
    for (const auto& f : p.formals)
      if (!prog.find_var(f))
        fail(ErrorKind::UnknownName, p.name + ": undeclared formal " + f);
  }
  for (const auto& p : prog.procs) detail::check_stmt(prog, p.body, tol);
  if (prog.main) detail::check_stmt(prog, prog.main, tol);
  return prog;
}

// Registers a run of `s` may touch: its own free registers plus the globals
// referenced inside reachable procedure bodies, in declaration order.
inline Regs state_footprint(const Program& prog, const StmtPtr& s) {
  std::set<std::string> needed;
  for (const auto& v : free_vars(s)) needed.insert(v);
  bool grew = true;
  std::set<std::string> visited;
  while (grew) {
    grew = false;
    for (const auto& p : prog.procs) {
      bool reachable = visited.count(p.name) > 0;
      if (!reachable) {
        // A procedure is reachable if any call to it appears in s or in an
        // already-reachable body; approximated by name occurrence.
        std::function<bool(const StmtPtr&)> calls = [&](const StmtPtr& t) -> bool {
          return std::visit(
              [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, CallS>) {
                  return n.proc == p.name;
                } else if constexpr (std::is_same_v<T, SeqS>) {
                  return calls(n.first) || calls(n.second);
                } else if constexpr (std::is_same_v<T, CaseS>) {
                  for (const auto& arm : n.arms)
                    if (calls(arm.body)) return true;
                  return false;
                } else if constexpr (std::is_same_v<T, LocalS>) {
                  return calls(n.body);
                } else {
                  return false;
                }
              },
              t->node);
        };
        if (calls(s)) reachable = true;
        for (const auto& q : prog.procs)
          if (visited.count(q.name) && calls(q.body)) reachable = true;
      }
      if (reachable && !visited.count(p.name)) {
        visited.insert(p.name);
        grew = true;
        std::set<std::string> formals(p.formals.begin(), p.formals.end());
        for (const auto& v : free_vars(p.body))
          if (!formals.count(v)) needed.insert(v);
      }
    }
  }
  Regs out;
  for (const auto& v : prog.var_decls)
    if (needed.count(v.name)) out.push_back(Reg{v.name, v.dim});
  for (const auto& n : needed)
    if (!prog.find_var(n)) out.push_back(prog.reg(n));  // fresh $r names
  return out;
}

}  // namespace qrv

#endif  // QRV_LANG_HPP

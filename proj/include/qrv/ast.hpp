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

#ifndef QRV_AST_HPP
#define QRV_AST_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qrv/matrix.hpp"

namespace qrv {

enum class VarKind { Boolean, Integer };

struct VarDecl {
  std::string name;
  VarKind kind = VarKind::Boolean;
  std::int64_t dim = 2;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct BottomS {};
struct SkipS {};
struct InitS {
  std::string var;
};
struct UnitS {
  std::vector<std::string> vars;
  std::string op;
};
struct SeqS {
  StmtPtr first, second;
};
struct CaseArm {
  int outcome = 0;
  StmtPtr body;
};
struct CaseS {
  std::string meas;
  std::vector<std::string> vars;
  std::vector<CaseArm> arms;  // sorted by outcome
};
struct LocalS {
  std::vector<std::string> vars;
  StmtPtr body;
};
struct CallS {
  std::string proc;
  std::vector<std::string> actuals;
};
// Operational artifact: the tail left behind once (Loc) has fired.
struct ReleaseS {
  std::vector<std::string> vars;
};
// Internal-only placeholder whose denotation is supplied externally. Not
// parseable from source text.
struct ParamHoleS {
  std::string name;
  std::vector<std::string> vars;
};

struct Stmt {
  std::variant<BottomS, SkipS, InitS, UnitS, SeqS, CaseS, LocalS, CallS,
               ReleaseS, ParamHoleS>
      node;
  int line = 0;
  int col = 0;
};

template <typename T, typename... Args>
StmtPtr make_stmt(Args&&... args) {
  auto s = std::make_shared<Stmt>();
  s->node = T{std::forward<Args>(args)...};
  return s;
}

inline StmtPtr stmt_bottom() { return make_stmt<BottomS>(); }
inline StmtPtr stmt_skip() { return make_stmt<SkipS>(); }
inline StmtPtr stmt_init(std::string q) { return make_stmt<InitS>(std::move(q)); }
inline StmtPtr stmt_unit(std::vector<std::string> vars, std::string op) {
  return make_stmt<UnitS>(std::move(vars), std::move(op));
}
inline StmtPtr stmt_seq(StmtPtr a, StmtPtr b) {
  return make_stmt<SeqS>(std::move(a), std::move(b));
}
inline StmtPtr stmt_case(std::string meas, std::vector<std::string> vars,
                         std::vector<CaseArm> arms) {
  return make_stmt<CaseS>(std::move(meas), std::move(vars), std::move(arms));
}
inline StmtPtr stmt_local(std::vector<std::string> vars, StmtPtr body) {
  return make_stmt<LocalS>(std::move(vars), std::move(body));
}
inline StmtPtr stmt_call(std::string proc, std::vector<std::string> actuals) {
  return make_stmt<CallS>(std::move(proc), std::move(actuals));
}
inline StmtPtr stmt_release(std::vector<std::string> vars) {
  return make_stmt<ReleaseS>(std::move(vars));
}
inline StmtPtr stmt_param_hole(std::string name, std::vector<std::string> vars) {
  return make_stmt<ParamHoleS>(std::move(name), std::move(vars));
}

inline bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, BottomS> || std::is_same_v<T, SkipS>) {
          return true;
        } else if constexpr (std::is_same_v<T, InitS>) {
          return na.var == nb.var;
        } else if constexpr (std::is_same_v<T, UnitS>) {
          return na.vars == nb.vars && na.op == nb.op;
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return stmt_equal(na.first, nb.first) && stmt_equal(na.second, nb.second);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          if (na.meas != nb.meas || na.vars != nb.vars ||
              na.arms.size() != nb.arms.size())
            return false;
          for (std::size_t i = 0; i < na.arms.size(); ++i)
            if (na.arms[i].outcome != nb.arms[i].outcome ||
                !stmt_equal(na.arms[i].body, nb.arms[i].body))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, LocalS>) {
          return na.vars == nb.vars && stmt_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, CallS>) {
          return na.proc == nb.proc && na.actuals == nb.actuals;
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          return na.vars == nb.vars;
        } else {
          static_assert(std::is_same_v<T, ParamHoleS>);
          return na.name == nb.name && na.vars == nb.vars;
        }
      },
      a->node);
}

// Free register names (locals are binders), in first-occurrence order.
inline void collect_free_vars(const StmtPtr& s, std::set<std::string> bound,
                              std::vector<std::string>& out) {
  auto add = [&](const std::string& name) {
    if (bound.count(name)) return;
    for (const auto& n : out)
      if (n == name) return;
    out.push_back(name);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InitS>) {
          add(n.var);
        } else if constexpr (std::is_same_v<T, UnitS>) {
          for (const auto& v : n.vars) add(v);
        } else if constexpr (std::is_same_v<T, SeqS>) {
          collect_free_vars(n.first, bound, out);
          collect_free_vars(n.second, bound, out);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          for (const auto& v : n.vars) add(v);
          for (const auto& arm : n.arms) collect_free_vars(arm.body, bound, out);
        } else if constexpr (std::is_same_v<T, LocalS>) {
          auto inner = bound;
          for (const auto& v : n.vars) inner.insert(v);
          collect_free_vars(n.body, inner, out);
        } else if constexpr (std::is_same_v<T, CallS>) {
          for (const auto& v : n.actuals) add(v);
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          for (const auto& v : n.vars) add(v);
        } else if constexpr (std::is_same_v<T, ParamHoleS>) {
          for (const auto& v : n.vars) add(v);
        }
      },
      s->node);
}

inline std::vector<std::string> free_vars(const StmtPtr& s) {
  std::vector<std::string> out;
  collect_free_vars(s, {}, out);
  return out;
}

// Every register name mentioned anywhere, binders included.
inline void collect_all_names(const StmtPtr& s, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InitS>) {
          out.insert(n.var);
        } else if constexpr (std::is_same_v<T, UnitS>) {
          out.insert(n.vars.begin(), n.vars.end());
        } else if constexpr (std::is_same_v<T, SeqS>) {
          collect_all_names(n.first, out);
          collect_all_names(n.second, out);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          out.insert(n.vars.begin(), n.vars.end());
          for (const auto& arm : n.arms) collect_all_names(arm.body, out);
        } else if constexpr (std::is_same_v<T, LocalS>) {
          out.insert(n.vars.begin(), n.vars.end());
          collect_all_names(n.body, out);
        } else if constexpr (std::is_same_v<T, CallS>) {
          out.insert(n.actuals.begin(), n.actuals.end());
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          out.insert(n.vars.begin(), n.vars.end());
        } else if constexpr (std::is_same_v<T, ParamHoleS>) {
          out.insert(n.vars.begin(), n.vars.end());
        }
      },
      s->node);
}

inline bool contains_call(const StmtPtr& s) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CallS>) {
          return true;
        } else if constexpr (std::is_same_v<T, SeqS>) {
          return contains_call(n.first) || contains_call(n.second);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          for (const auto& arm : n.arms)
            if (contains_call(arm.body)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, LocalS>) {
          return contains_call(n.body);
        } else {
          return false;
        }
      },
      s->node);
}

struct ProcDecl {
  std::string name;
  std::vector<std::string> formals;
  StmtPtr body;
};

struct Program {
  std::vector<VarDecl> var_decls;
  std::map<std::string, Mat> unitaries;
  std::map<std::string, std::map<int, Mat>> measurements;
  std::map<std::string, Mat> predicates;
  std::vector<ProcDecl> procs;
  StmtPtr main;

  const VarDecl* find_var(const std::string& name) const {
    for (const auto& v : var_decls)
      if (v.name == name) return &v;
    return nullptr;
  }

  Reg reg(const std::string& name) const {
    if (const VarDecl* v = find_var(name)) return Reg{v->name, v->dim};
    // Fresh registers carry their dimension in the name: $rK:D.
    auto colon = name.rfind(':');
    if (name.size() > 2 && name[0] == '$' && colon != std::string::npos)
      return Reg{name, std::stoll(name.substr(colon + 1))};
    fail(ErrorKind::UnknownVariable, "undeclared register " + name);
  }

  Regs regs_of(const std::vector<std::string>& names) const {
    Regs out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(reg(n));
    return out;
  }

  const ProcDecl* find_proc(const std::string& name) const {
    for (const auto& p : procs)
      if (p.name == name) return &p;
    return nullptr;
  }
};

}  // namespace qrv

#endif  // QRV_AST_HPP

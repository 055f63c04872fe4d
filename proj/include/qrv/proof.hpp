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

#ifndef QRV_PROOF_HPP
#define QRV_PROOF_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qrv/json_io.hpp"
#include "qrv/verifier.hpp"

namespace qrv {

// Replayable proof scripts. A script is a DAG of rule applications over
// Hoare triples; recursion rules open assumption scopes whose obligations
// are replayed once per family index. See the README for the JSON schema.

struct ProofOptions {
  Tolerances tol;
  double step_tol = 1e-8;        // matrix slack for recomputed conclusions
  std::int64_t order_samples = 64;
  std::uint64_t seed = 42;
};

struct StepReport {
  std::string id;
  Status status = Status::Valid;
  std::string message;
};

struct ProofReport {
  Status overall = Status::Valid;
  std::vector<StepReport> steps;
  std::string failed_step;  // first rejected or undecided step, if any
};

namespace proof_detail {

struct Family {
  std::string name;
  bool explicit_mode = false;
  std::string var = "n";
  std::vector<std::int64_t> probes;
  json terms;    // template mode: [{coef, matrix|literal, vars}]
  json entries;  // explicit mode: [assertion...]
};

struct AssumptionBlock {
  std::string label;
  std::string proc;
  std::vector<std::string> args;
  Mode mode = Mode::Total;
  json pre, post;
};

struct Step {
  std::string id;
  std::string rule;
  std::vector<std::string> premises;
  json raw;
};

struct Script {
  std::map<std::string, Family> families;
  std::map<std::string, AssumptionBlock> assumptions;
  std::vector<Step> steps;
  std::map<std::string, std::size_t> index_of;
};

inline Mode mode_from_json(const json& j, const char* key = "mode") {
  if (!j.contains(key)) return Mode::Partial;
  const std::string m = j.at(key).get<std::string>();
  if (m == "partial") return Mode::Partial;
  if (m == "total") return Mode::Total;
  if (m == "exact") return Mode::Exact;
  fail(ErrorKind::BadInput, "unknown triple mode " + m);
}

inline Script parse_script(const json& j) {
  Script s;
  if (j.contains("families")) {
    for (const auto& fj : j.at("families")) {
      Family f;
      f.name = fj.at("name").get<std::string>();
      f.explicit_mode = fj.at("mode").get<std::string>() == "explicit";
      if (fj.contains("var")) f.var = fj.at("var").get<std::string>();
      if (fj.contains("probes"))
        for (const auto& p : fj.at("probes"))
          f.probes.push_back(p.get<std::int64_t>());
      if (f.explicit_mode) {
        f.entries = fj.at("entries");
      } else {
        f.terms = fj.at("terms");
        if (f.probes.empty())
          fail(ErrorKind::BadInput,
               "template family " + f.name + " needs a probe set");
      }
      s.families[f.name] = std::move(f);
    }
  }
  if (j.contains("assumptions")) {
    for (const auto& aj : j.at("assumptions")) {
      AssumptionBlock a;
      a.label = aj.at("label").get<std::string>();
      a.proc = aj.at("proc").get<std::string>();
      if (aj.contains("args"))
        for (const auto& arg : aj.at("args"))
          a.args.push_back(arg.get<std::string>());
      a.mode = mode_from_json(aj);
      a.pre = aj.at("pre");
      a.post = aj.at("post");
      s.assumptions[a.label] = std::move(a);
    }
  }
  for (const auto& sj : j.at("steps")) {
    Step st;
    st.id = sj.at("id").get<std::string>();
    st.rule = sj.at("rule").get<std::string>();
    if (sj.contains("premises"))
      for (const auto& p : sj.at("premises"))
        st.premises.push_back(p.get<std::string>());
    st.raw = sj;
    if (s.index_of.count(st.id))
      fail(ErrorKind::BadInput, "duplicate step id " + st.id);
    s.index_of[st.id] = s.steps.size();
    s.steps.push_back(std::move(st));
  }
  return s;
}

[[noreturn]] inline void reject(const std::string& step,
                                const std::string& why) {
  fail(ErrorKind::RuleMismatch, "step " + step + ": " + why);
}

class Checker {
 public:
  Checker(const Program& prog, Script script, const ProofOptions& opts)
      : prog_(prog), script_(std::move(script)), opts_(opts) {}

  ProofReport run() {
    ProofReport report;
    try {
      claim_scopes();
      for (const auto& st : script_.steps) {
        if (owned_.count(st.id)) continue;  // replayed inside its scope
        Env env;
        eval_step(st.id, env);
        report.steps.push_back({st.id, Status::Valid, "ok"});
      }
    } catch (const Error& e) {
      report.overall =
          e.kind() == ErrorKind::UnknownSideCondition ? Status::Unknown
                                                      : Status::Invalid;
      report.failed_step = current_step_;
      report.steps.push_back({current_step_,
                              report.overall,
                              e.what()});
      return report;
    }
    report.overall = Status::Valid;
    return report;
  }

  // The conclusions a named step establishes at the outer level.
  std::vector<HoareTriple> conclusions_of(const std::string& id) {
    Env env;
    return eval_step(id, env);
  }

 private:
  struct Env {
    std::map<std::string, double> indices;
    std::map<std::string, HoareTriple> assumptions;
    std::string key;  // cache key fragment for the index bindings
  };

  const Program& prog_;
  Script script_;
  ProofOptions opts_;
  std::set<std::string> owned_;
  std::map<std::string, std::string> owner_of_;
  std::map<std::string, std::vector<HoareTriple>> cache_;
  std::set<std::string> in_progress_;
  std::string current_step_;

  static bool is_rec_rule(const std::string& rule) {
    return rule == "Rp Rec" || rule == "Rp gRec" || rule == "Rp pRec" ||
           rule == "Rt Rec" || rule == "Rt gRec" || rule == "Rt pRec" ||
           rule == "Rp Loop" || rule == "Rt Loop";
  }

  // Marks every step reachable from recursion obligations as owned by that
  // scope, and verifies no step needs an assumption outside a scope.
  void claim_scopes() {
    for (const auto& st : script_.steps) {
      if (!is_rec_rule(st.rule)) continue;
      std::vector<std::string> roots;
      if (st.raw.contains("procs"))
        for (const auto& pj : st.raw.at("procs"))
          roots.push_back(pj.at("obligation").get<std::string>());
      if (st.raw.contains("obligation"))
        roots.push_back(st.raw.at("obligation").get<std::string>());
      std::set<std::string> seen;
      while (!roots.empty()) {
        std::string id = roots.back();
        roots.pop_back();
        if (!script_.index_of.count(id)) continue;  // assumption labels etc.
        if (!seen.insert(id).second) continue;
        auto prev = owner_of_.find(id);
        if (prev != owner_of_.end() && prev->second != st.id)
          fail(ErrorKind::UndischargedAssumption,
               "step " + id + " belongs to two recursion scopes");
        owner_of_[id] = st.id;
        owned_.insert(id);
        const Step& inner = script_.steps[script_.index_of.at(id)];
        for (const auto& p : inner.premises) roots.push_back(strip_index(p));
      }
    }
    // Steps outside any scope must not reference assumption labels.
    for (const auto& st : script_.steps) {
      if (owned_.count(st.id) || is_rec_rule(st.rule)) continue;
      for (const auto& p : st.premises)
        if (script_.assumptions.count(strip_index(p)))
          fail(ErrorKind::UndischargedAssumption,
               "step " + st.id + " uses assumption " + p +
                   " outside a recursion scope");
    }
  }

  static std::string strip_index(const std::string& ref) {
    auto pos = ref.rfind(':');
    return pos == std::string::npos ? ref : ref.substr(0, pos);
  }

  Pqpt family_entry(const std::string& name, std::int64_t index) {
    auto it = script_.families.find(name);
    if (it == script_.families.end())
      fail(ErrorKind::BadInput, "unknown family " + name);
    const Family& f = it->second;
    if (index < 0)
      fail(ErrorKind::BadInput, "negative family index for " + name);
    if (f.explicit_mode) {
      const std::int64_t n = static_cast<std::int64_t>(f.entries.size());
      const std::int64_t clamped = std::min(index, n - 1);  // constant tail
      return pqpt_json(f.entries[clamped], {});
    }
    std::optional<ComplexMatrix> acc;
    for (const auto& term : f.terms) {
      const double coef =
          eval_expr(term.at("coef").get<std::string>(),
                    {{f.var, static_cast<double>(index)}});
      Regs regs;
      for (const auto& v : term.at("vars"))
        regs.push_back(prog_.reg(v.get<std::string>()));
      Mat m;
      if (term.at("matrix").is_string()) {
        const std::int64_t d = total_dim(regs);
        m = term.at("matrix").get<std::string>() == "I"
                ? Mat(Mat::Identity(d, d))
                : Mat(Mat::Zero(d, d));
      } else {
        m = mat_from_json(term.at("matrix"));
      }
      ComplexMatrix part(regs, Mat(coef * m));
      acc = acc ? acc->plus(part) : part;
    }
    if (!acc) fail(ErrorKind::BadInput, "family " + name + " has no terms");
    return Pqpt::literal(*acc, opts_.tol);
  }

  Pqpt pqpt_json(const json& j, const Env& env) {
    FamilyResolver resolver = [this](const std::string& name,
                                     std::int64_t idx) {
      return family_entry(name, idx);
    };
    return pqpt_from_json(j, prog_, opts_.tol, env.indices, &resolver);
  }

  StmtPtr stmt_json(const json& j) {
    if (j.is_string()) return parse_statement(j.get<std::string>());
    if (j.is_object() && j.contains("body_of")) {
      const ProcDecl* decl =
          prog_.find_proc(j.at("body_of").get<std::string>());
      if (!decl) fail(ErrorKind::BadInput, "unknown procedure in body_of");
      return decl->body;
    }
    fail(ErrorKind::BadInput, "statements are source text or body_of refs");
  }

  HoareTriple triple_json(const json& j, const Env& env) {
    HoareTriple t;
    t.mode = mode_from_json(j);
    t.pre = pqpt_json(j.at("pre"), env);
    t.post = pqpt_json(j.at("post"), env);
    t.stmt = stmt_json(j.at("stmt"));
    return t;
  }

  bool triples_match(const HoareTriple& a, const HoareTriple& b) {
    return a.mode == b.mode && stmt_equal(a.stmt, b.stmt) &&
           pqpt_equal(a.pre, b.pre, opts_.step_tol) &&
           pqpt_equal(a.post, b.post, opts_.step_tol);
  }

  HoareTriple resolve_premise(const std::string& ref, Env& env) {
    std::string id = ref;
    std::size_t which = 0;
    auto pos = ref.rfind(':');
    if (pos != std::string::npos && script_.index_of.count(ref) == 0 &&
        script_.assumptions.count(ref) == 0) {
      id = ref.substr(0, pos);
      which = std::stoul(ref.substr(pos + 1));
    }
    if (env.assumptions.count(id)) return env.assumptions.at(id);
    if (script_.assumptions.count(id))
      fail(ErrorKind::UndischargedAssumption,
           "assumption " + id + " used outside its scope");
    if (!script_.index_of.count(id))
      fail(ErrorKind::BadInput, "unknown premise " + ref);
    auto conclusions = eval_step(id, env);
    if (which >= conclusions.size())
      fail(ErrorKind::BadInput, "premise index out of range in " + ref);
    return conclusions[which];
  }

  Verdict side_order(const Pqpt& lhs, const Pqpt& rhs, OrderRel rel) {
    return pqpt_order({lhs, rhs, rel}, opts_.order_samples, opts_.seed,
                      opts_.tol, opts_.tol.limit_slack());
  }

  // Discharges an ordering side condition; unknown aborts the whole check
  // with a distinguishable error kind.
  void require_order(const std::string& step, const Pqpt& lhs, const Pqpt& rhs,
                     const std::string& what) {
    Verdict v = side_order(lhs, rhs, OrderRel::Leq);
    if (v.status == Status::Invalid)
      reject(step, what + " does not hold (violation " +
                       std::to_string(v.witness ? v.witness->eigenvalue : 0.0) +
                       ")");
    if (v.status == Status::Unknown)
      fail(ErrorKind::UnknownSideCondition,
           "step " + step + ": " + what + " is undecided");
  }

  std::vector<HoareTriple> eval_step(const std::string& id, Env& env);

  std::vector<HoareTriple> eval_rule(const Step& st, Env& env);

  std::vector<HoareTriple> eval_recursion(const Step& st, Env& env,
                                          bool total);

  std::vector<HoareTriple> eval_loop(const Step& st, Env& env, bool total);
};

inline std::vector<HoareTriple> Checker::eval_step(const std::string& id,
                                                   Env& env) {
  const std::string key = id + "|" + env.key;
  auto hit = cache_.find(key);
  if (hit != cache_.end()) return hit->second;
  if (!in_progress_.insert(key).second)
    fail(ErrorKind::BadInput, "circular premise reference at " + id);
  const Step& st = script_.steps[script_.index_of.at(id)];
  std::string outer = current_step_;
  current_step_ = id;
  auto out = eval_rule(st, env);
  current_step_ = outer.empty() ? id : outer;
  in_progress_.erase(key);
  cache_[key] = out;
  return out;
}

inline std::vector<HoareTriple> Checker::eval_rule(const Step& st, Env& env) {
  const std::string& rule = st.rule;

  if (rule == "Rp Rec" || rule == "Rp gRec" || rule == "Rp pRec")
    return eval_recursion(st, env, /*total=*/false);
  if (rule == "Rt Rec" || rule == "Rt gRec" || rule == "Rt pRec")
    return eval_recursion(st, env, /*total=*/true);
  if (rule == "Rp Loop") return eval_loop(st, env, /*total=*/false);
  if (rule == "Rt Loop") return eval_loop(st, env, /*total=*/true);

  HoareTriple claim = triple_json(st.raw.at("conclusion"), env);

  if (rule == "A Bot") {
    if (!std::holds_alternative<BottomS>(claim.stmt->node))
      reject(st.id, "statement is not bottom");
    Pqpt expect = claim.mode == Mode::Partial ? claim.post.identity_like()
                                              : claim.post.zero_like();
    if (!pqpt_equal(claim.pre, expect, opts_.step_tol))
      reject(st.id, claim.mode == Mode::Partial
                        ? "partial bottom axiom needs precondition I"
                        : "total bottom axiom needs precondition 0");
    return {claim};
  }
  if (rule == "A Skip") {
    if (!std::holds_alternative<SkipS>(claim.stmt->node))
      reject(st.id, "statement is not skip");
    if (!pqpt_equal(claim.pre, claim.post, opts_.step_tol))
      reject(st.id, "skip axiom needs equal pre- and postcondition");
    return {claim};
  }
  if (rule == "A Init" || rule == "A Unit") {
    SuperOp chan = SuperOp::identity(claim.post.vars());
    if (rule == "A Init") {
      const auto* init = std::get_if<InitS>(&claim.stmt->node);
      if (!init) reject(st.id, "statement is not an initialization");
      auto c = detail::init_channel(prog_.reg(init->var));
      chan = detail::lift_square(c.in_vars(), c.kraus(), claim.post.vars());
    } else {
      const auto* unit = std::get_if<UnitS>(&claim.stmt->node);
      if (!unit) reject(st.id, "statement is not a unitary application");
      auto it = prog_.unitaries.find(unit->op);
      if (it == prog_.unitaries.end())
        reject(st.id, "unbound unitary " + unit->op);
      chan = detail::lift_square(prog_.regs_of(unit->vars), {it->second},
                                 claim.post.vars());
    }
    Pqpt expect(claim.post.base(), compose(chan, claim.post.e_part()),
                compose(chan, claim.post.f_part()), opts_.tol);
    if (!pqpt_equal(claim.pre, expect, opts_.step_tol))
      reject(st.id, "precondition does not match the pulled-back postcondition");
    return {claim};
  }
  if (rule == "R Comp") {
    if (st.premises.size() != 2) reject(st.id, "composition needs two premises");
    HoareTriple p1 = resolve_premise(st.premises[0], env);
    HoareTriple p2 = resolve_premise(st.premises[1], env);
    const auto* seq = std::get_if<SeqS>(&claim.stmt->node);
    if (!seq) reject(st.id, "statement is not a sequence");
    if (!stmt_equal(p1.stmt, seq->first) || !stmt_equal(p2.stmt, seq->second))
      reject(st.id, "premise statements do not split the sequence");
    if (p1.mode != claim.mode || p2.mode != claim.mode)
      reject(st.id, "premise modes differ from the conclusion");
    if (!pqpt_equal(p1.post, p2.pre, opts_.step_tol))
      reject(st.id, "intermediate assertions do not meet");
    if (!pqpt_equal(claim.pre, p1.pre, opts_.step_tol) ||
        !pqpt_equal(claim.post, p2.post, opts_.step_tol))
      reject(st.id, "conclusion does not chain the premises");
    return {claim};
  }
  if (rule == "R Case") {
    const auto* cs = std::get_if<CaseS>(&claim.stmt->node);
    if (!cs) reject(st.id, "statement is not a case");
    if (st.premises.size() != cs->arms.size())
      reject(st.id, "one premise per outcome arm required");
    auto meas = prog_.measurements.find(cs->meas);
    if (meas == prog_.measurements.end())
      reject(st.id, "unbound measurement " + cs->meas);
    Regs regs = prog_.regs_of(cs->vars);
    std::vector<SuperOp> selections;
    std::vector<Pqpt> branches;
    for (std::size_t i = 0; i < cs->arms.size(); ++i) {
      HoareTriple p = resolve_premise(st.premises[i], env);
      if (p.mode != claim.mode) reject(st.id, "premise mode mismatch");
      if (!stmt_equal(p.stmt, cs->arms[i].body))
        reject(st.id, "premise " + st.premises[i] +
                          " does not prove arm " +
                          std::to_string(cs->arms[i].outcome));
      if (!pqpt_equal(p.post, claim.post, opts_.step_tol))
        reject(st.id, "arm postconditions must all equal the conclusion's");
      selections.push_back(detail::lift_square(
          regs, {meas->second.at(cs->arms[i].outcome)}, claim.post.vars()));
      Pqpt pre = p.pre;
      if (!(pre.vars() == claim.post.vars()))
        reject(st.id, "arm precondition registers mismatch");
      branches.push_back(std::move(pre));
    }
    Pqpt expect = pqpt_disj(selections, branches, opts_.tol);
    if (!pqpt_equal(claim.pre, expect, opts_.step_tol))
      reject(st.id, "precondition is not the measured sum of arm preconditions");
    return {claim};
  }
  if (rule == "R Order") {
    if (st.premises.size() != 1) reject(st.id, "order rule needs one premise");
    HoareTriple p = resolve_premise(st.premises[0], env);
    if (p.mode != claim.mode) reject(st.id, "premise mode mismatch");
    if (!stmt_equal(p.stmt, claim.stmt))
      reject(st.id, "order rule cannot change the statement");
    require_order(st.id, claim.pre, p.pre, "pre weakening");
    require_order(st.id, p.post, claim.post, "post weakening");
    return {claim};
  }
  if (rule == "R Subst") {
    if (st.premises.size() != 1) reject(st.id, "substitution needs one premise");
    HoareTriple p = resolve_premise(st.premises[0], env);
    if (p.mode != claim.mode) reject(st.id, "premise mode mismatch");
    if (!stmt_equal(p.stmt, claim.stmt))
      reject(st.id, "substitution cannot change the statement");
    std::map<std::string, Pqpt> subs;
    for (auto it = st.raw.at("subst").begin(); it != st.raw.at("subst").end();
         ++it)
      subs.emplace(it.key(), pqpt_json(it.value(), env));
    Pqpt pre = subst_pqpt(p.pre, subs, opts_.tol);
    Pqpt post = subst_pqpt(p.post, subs, opts_.tol);
    if (!pqpt_equal(claim.pre, pre, opts_.step_tol) ||
        !pqpt_equal(claim.post, post, opts_.step_tol))
      reject(st.id, "conclusion is not the substituted premise");
    return {claim};
  }
  if (rule == "R Adap") {
    if (st.premises.size() != 1) reject(st.id, "adaptation needs one premise");
    HoareTriple p = resolve_premise(st.premises[0], env);
    if (p.mode != claim.mode) reject(st.id, "premise mode mismatch");
    std::map<std::string, std::string> ren;
    for (auto it = st.raw.at("rename").begin(); it != st.raw.at("rename").end();
         ++it)
      ren[it.key()] = it.value().get<std::string>();
    std::set<std::string> targets;
    for (const auto& [from, to] : ren) {
      if (!targets.insert(to).second)
        reject(st.id, "adaptation renaming must be injective");
      if (prog_.reg(from).dim != prog_.reg(to).dim)
        reject(st.id, "adaptation must preserve register types");
    }
    if (!stmt_equal(substitute_vars(prog_, p.stmt, ren), claim.stmt))
      reject(st.id, "statement is not the renamed premise statement");
    if (!pqpt_equal(claim.pre, p.pre.renamed(ren, opts_.tol), opts_.step_tol) ||
        !pqpt_equal(claim.post, p.post.renamed(ren, opts_.tol), opts_.step_tol))
      reject(st.id, "conditions are not the renamed premise conditions");
    return {claim};
  }
  if (rule == "R Loc" || rule == "R' Loc") {
    if (st.premises.size() != 1) reject(st.id, "localization needs one premise");
    HoareTriple p = resolve_premise(st.premises[0], env);
    if (p.mode != claim.mode) reject(st.id, "premise mode mismatch");
    const auto* loc = std::get_if<LocalS>(&claim.stmt->node);
    if (!loc) reject(st.id, "statement is not a local block");
    Regs loc_regs = prog_.regs_of(loc->vars);
    if (rule == "R Loc") {
      std::vector<std::string> fresh;
      for (const auto& fj : st.raw.at("fresh"))
        fresh.push_back(fj.get<std::string>());
      if (fresh.size() != loc->vars.size())
        reject(st.id, "fresh register list length mismatch");
      std::map<std::string, std::string> ren;
      Regs fresh_regs;
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        if (prog_.reg(fresh[i]).dim != loc_regs[i].dim)
          reject(st.id, "fresh registers must match the local types");
        ren[loc->vars[i]] = fresh[i];
        fresh_regs.push_back(prog_.reg(fresh[i]));
      }
      StmtPtr expect_stmt = substitute_vars(prog_, loc->body, ren);
      for (std::size_t i = fresh.size(); i-- > 0;)
        expect_stmt = stmt_seq(stmt_init(fresh[i]), expect_stmt);
      if (!stmt_equal(p.stmt, expect_stmt))
        reject(st.id, "premise statement must initialize the fresh registers "
                      "and run the renamed body");
      if (!pqpt_equal(p.pre, claim.pre.padded(fresh_regs, opts_.tol),
                      opts_.step_tol) ||
          !pqpt_equal(p.post, claim.post.padded(fresh_regs, opts_.tol),
                      opts_.step_tol))
        reject(st.id, "premise conditions must pad the conclusion's with "
                      "identities on the fresh registers");
      return {claim};
    }
    // R' Loc: substitute in the assertions instead of the program.
    std::map<std::string, std::string> ren;
    Regs fresh_regs;
    for (const auto& fj : st.raw.at("fresh")) {
      fresh_regs.push_back(prog_.reg(fj.get<std::string>()));
    }
    if (fresh_regs.size() != loc->vars.size())
      reject(st.id, "fresh register list length mismatch");
    for (std::size_t i = 0; i < fresh_regs.size(); ++i)
      ren[loc->vars[i]] = fresh_regs[i].name;
    if (!stmt_equal(p.stmt, loc->body))
      reject(st.id, "premise must prove the unrenamed body");
    ComplexMatrix zero_proj = ComplexMatrix::ket_bra(loc_regs, 0, 0);
    Pqpt pre_expect = pqpt_conj(claim.pre.renamed(ren, opts_.tol),
                                Pqpt::literal(zero_proj, opts_.tol), opts_.tol);
    Pqpt post_expect =
        pqpt_conj(claim.post.renamed(ren, opts_.tol),
                  Pqpt::literal(ComplexMatrix::identity(loc_regs), opts_.tol),
                  opts_.tol);
    if (!pqpt_equal(p.pre, pre_expect, opts_.step_tol) ||
        !pqpt_equal(p.post, post_expect, opts_.step_tol))
      reject(st.id, "premise conditions do not match the localized forms");
    return {claim};
  }
  reject(st.id, "unknown rule " + rule);
}

inline std::vector<HoareTriple> Checker::eval_recursion(const Step& st,
                                                        Env& env, bool total) {
  const Mode mode = total ? Mode::Total : Mode::Partial;
  struct ProcEntry {
    std::string name;
    std::vector<std::string> args;
    Pqpt pre, post;
    std::string family;
    std::string obligation;
    const ProcDecl* decl;
  };
  std::vector<ProcEntry> procs;
  for (const auto& pj : st.raw.at("procs")) {
    ProcEntry pe;
    pe.name = pj.at("name").get<std::string>();
    pe.decl = prog_.find_proc(pe.name);
    if (!pe.decl) reject(st.id, "unknown procedure " + pe.name);
    if (pj.contains("args"))
      for (const auto& a : pj.at("args"))
        pe.args.push_back(a.get<std::string>());
    else
      pe.args = pe.decl->formals;
    pe.pre = pqpt_json(pj.at("pre"), env);
    pe.post = pqpt_json(pj.at("post"), env);
    if (total) pe.family = pj.at("family").get<std::string>();
    pe.obligation = pj.at("obligation").get<std::string>();
    procs.push_back(std::move(pe));
  }
  std::vector<std::string> labels;
  for (const auto& lj : st.raw.at("assumptions"))
    labels.push_back(lj.get<std::string>());
  if (labels.size() != procs.size())
    reject(st.id, "one assumption per procedure required");

  const std::string var =
      st.raw.contains("var") ? st.raw.at("var").get<std::string>() : "j";

  // Index set: probes for template families, the full entry range for
  // explicit ones, a single pass for partial-correctness rules.
  std::vector<std::int64_t> indices{0};
  if (total) {
    std::set<std::int64_t> idx;
    for (const auto& pe : procs) {
      const auto& fam = script_.families.at(pe.family);
      if (fam.explicit_mode) {
        for (std::int64_t i = 0;
             i < static_cast<std::int64_t>(fam.entries.size()); ++i)
          idx.insert(i);
      } else {
        idx.insert(fam.probes.begin(), fam.probes.end());
      }
    }
    indices.assign(idx.begin(), idx.end());
    for (const auto& pe : procs) {
      Pqpt first = family_entry(pe.family, 0);
      if (!pqpt_equal(first, first.zero_like(), opts_.step_tol))
        reject(st.id, "family " + pe.family + " must start at zero");
    }
  }

  for (std::int64_t j : indices) {
    Env inner;
    inner.indices = env.indices;
    inner.assumptions = env.assumptions;
    inner.indices[var] = static_cast<double>(j);
    inner.key = env.key + var + "=" + std::to_string(j) + ";";

    // Materialize and validate the assumption triples at this index.
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto ab = script_.assumptions.find(labels[i]);
      if (ab == script_.assumptions.end())
        reject(st.id, "unknown assumption label " + labels[i]);
      const AssumptionBlock& block = ab->second;
      HoareTriple t;
      t.mode = block.mode;
      t.pre = pqpt_json(block.pre, inner);
      t.post = pqpt_json(block.post, inner);
      t.stmt = stmt_call(block.proc, block.args);
      if (t.mode != mode)
        reject(st.id, "assumption " + labels[i] + " has the wrong mode");
      // The assumption must be the rule-shaped triple for its procedure.
      bool matched = false;
      for (const auto& pe : procs) {
        if (pe.name != block.proc || pe.args != block.args) continue;
        Pqpt expected_pre = total ? family_entry(pe.family, j) : pe.pre;
        if (pqpt_equal(t.pre, expected_pre, opts_.step_tol) &&
            pqpt_equal(t.post, pe.post, opts_.step_tol))
          matched = true;
      }
      if (!matched)
        reject(st.id, "assumption " + labels[i] +
                          " does not match the rule schema at index " +
                          std::to_string(j));
      inner.assumptions[labels[i]] = std::move(t);
    }

    for (const auto& pe : procs) {
      auto got = eval_step(pe.obligation, inner);
      HoareTriple want;
      want.mode = mode;
      want.stmt = pe.decl->body;
      want.post = pe.post;
      want.pre = total ? family_entry(pe.family, j + 1) : pe.pre;
      // Obligations about procedures with parameters are stated over the
      // formals; adapt if the step used different argument names.
      if (pe.args != pe.decl->formals) {
        std::map<std::string, std::string> ren;
        for (std::size_t i = 0; i < pe.args.size(); ++i)
          ren[pe.decl->formals[i]] = pe.args[i];
        want.stmt = substitute_vars(prog_, want.stmt, ren);
      }
      bool matched = false;
      for (const auto& t : got)
        if (triples_match(t, want)) matched = true;
      if (!matched)
        reject(st.id, "obligation " + pe.obligation +
                          " does not conclude the body triple at index " +
                          std::to_string(j));
    }

    if (total) {
      for (const auto& pe : procs) {
        Pqpt cur = family_entry(pe.family, j);
        Pqpt next = family_entry(pe.family, j + 1);
        Verdict v = side_order(cur, next, OrderRel::Leq);
        if (v.status == Status::Invalid)
          reject(st.id, "family " + pe.family + " is not monotone at " +
                            std::to_string(j));
        if (v.status == Status::Unknown)
          fail(ErrorKind::UnknownSideCondition,
               "step " + st.id + ": family monotonicity undecided");
      }
    }
  }

  // Conclusions: each procedure's triple, with the precondition below the
  // family limit in the total case.
  std::vector<HoareTriple> out;
  for (const auto& pe : procs) {
    if (total) {
      const auto& fam = script_.families.at(pe.family);
      Pqpt limit = fam.explicit_mode
                       ? family_entry(pe.family,
                                      static_cast<std::int64_t>(
                                          fam.entries.size()))
                       : limit_pqpt(
                             [&](std::int64_t n) {
                               return family_entry(pe.family, n);
                             },
                             LimitMode::Upper,
                             {opts_.tol.fix_tol, opts_.tol.max_iter, 0},
                             opts_.tol)
                             .value;
      require_order(st.id, pe.pre, limit,
                    "precondition below the family limit for " + pe.name);
    }
    HoareTriple t;
    t.mode = mode;
    t.pre = pe.pre;
    t.post = pe.post;
    t.stmt = stmt_call(pe.name, pe.args);
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<HoareTriple> Checker::eval_loop(const Step& st, Env& env,
                                                   bool total) {
  const Mode mode = total ? Mode::Total : Mode::Partial;
  const std::string proc = st.raw.at("proc").get<std::string>();
  const ProcDecl* decl = prog_.find_proc(proc);
  if (!decl) reject(st.id, "unknown procedure " + proc);
  if (!decl->formals.empty())
    reject(st.id, "loop rules cover parameterless tail recursions");

  // Required shape: case M[qs] { 0 -> skip, 1 -> S; call proc() }.
  const auto* cs = std::get_if<CaseS>(&decl->body->node);
  if (!cs || cs->arms.size() != 2 || cs->arms[0].outcome != 0 ||
      cs->arms[1].outcome != 1)
    reject(st.id, proc + " is not a two-outcome loop");
  if (!std::holds_alternative<SkipS>(cs->arms[0].body->node))
    reject(st.id, "outcome 0 must be skip");
  const auto* seq = std::get_if<SeqS>(&cs->arms[1].body->node);
  StmtPtr body;
  if (seq) {
    const auto* call = std::get_if<CallS>(&seq->second->node);
    if (!call || call->proc != proc)
      reject(st.id, "outcome 1 must end in the tail call");
    body = seq->first;
  } else {
    reject(st.id, "outcome 1 must be a body followed by the tail call");
  }
  auto meas = prog_.measurements.find(cs->meas);
  if (meas == prog_.measurements.end())
    reject(st.id, "unbound measurement " + cs->meas);
  Regs regs = prog_.regs_of(cs->vars);

  Pqpt q_post = pqpt_json(st.raw.at("post"), env);
  Pqpt p_inv = pqpt_json(st.raw.at("invariant"), env);
  auto measured_pre = [&](const Pqpt& p) {
    std::vector<SuperOp> sel{
        detail::lift_square(regs, {meas->second.at(0)}, q_post.vars()),
        detail::lift_square(regs, {meas->second.at(1)}, q_post.vars())};
    return pqpt_disj(sel, {q_post, p}, opts_.tol);
  };

  const std::string obligation = st.raw.at("obligation").get<std::string>();
  if (!total) {
    Env inner = env;
    auto got = eval_step(obligation, inner);
    HoareTriple want{p_inv, body, measured_pre(p_inv), mode};
    bool matched = false;
    for (const auto& t : got)
      if (triples_match(t, want)) matched = true;
    if (!matched)
      reject(st.id, "obligation does not prove {P} body {M0'QM0 + M1'PM1}");
  } else {
    const std::string fam_name = st.raw.at("family").get<std::string>();
    const auto& fam = script_.families.at(fam_name);
    const std::string var =
        st.raw.contains("var") ? st.raw.at("var").get<std::string>() : "j";
    Pqpt first = family_entry(fam_name, 0);
    if (!pqpt_equal(first, first.zero_like(), opts_.step_tol))
      reject(st.id, "family " + fam_name + " must start at zero");
    std::vector<std::int64_t> indices;
    if (fam.explicit_mode) {
      for (std::int64_t i = 0;
           i < static_cast<std::int64_t>(fam.entries.size()); ++i)
        indices.push_back(i);
    } else {
      indices = fam.probes;
    }
    for (std::int64_t j : indices) {
      Env inner;
      inner.indices = env.indices;
      inner.assumptions = env.assumptions;
      inner.indices[var] = static_cast<double>(j);
      inner.key = env.key + var + "=" + std::to_string(j) + ";";
      auto got = eval_step(obligation, inner);
      HoareTriple want{family_entry(fam_name, j + 1), body,
                       measured_pre(family_entry(fam_name, j)), mode};
      bool matched = false;
      for (const auto& t : got)
        if (triples_match(t, want)) matched = true;
      if (!matched)
        reject(st.id, "obligation fails at index " + std::to_string(j));
      Verdict v = side_order(family_entry(fam_name, j),
                             family_entry(fam_name, j + 1), OrderRel::Leq);
      if (v.status == Status::Invalid)
        reject(st.id, "family not monotone at " + std::to_string(j));
      if (v.status == Status::Unknown)
        fail(ErrorKind::UnknownSideCondition,
             "step " + st.id + ": family monotonicity undecided");
    }
    Pqpt limit = fam.explicit_mode
                     ? family_entry(fam_name, static_cast<std::int64_t>(
                                                  fam.entries.size()))
                     : limit_pqpt(
                           [&](std::int64_t n) {
                             return family_entry(fam_name, n);
                           },
                           LimitMode::Upper,
                           {opts_.tol.fix_tol, opts_.tol.max_iter, 0},
                           opts_.tol)
                           .value;
    require_order(st.id, p_inv, limit, "invariant below the family limit");
  }

  HoareTriple out;
  out.mode = mode;
  out.pre = measured_pre(p_inv);
  out.post = q_post;
  out.stmt = stmt_call(proc, {});
  return {out};
}

}  // namespace proof_detail

// Replays a serialized proof script against a program's rule systems.
inline ProofReport check_proof(const Program& prog, const json& script,
                               const ProofOptions& opts = {}) {
  proof_detail::Checker checker(prog, proof_detail::parse_script(script), opts);
  return checker.run();
}

// Conclusions established by a named step (after a successful check).
inline std::vector<HoareTriple> proof_conclusions(const Program& prog,
                                                  const json& script,
                                                  const std::string& step,
                                                  const ProofOptions& opts = {}) {
  proof_detail::Checker checker(prog, proof_detail::parse_script(script), opts);
  ProofReport report = checker.run();
  if (report.overall != Status::Valid)
    fail(ErrorKind::RuleMismatch, "script did not validate");
  return checker.conclusions_of(step);
}

}  // namespace qrv

#endif  // QRV_PROOF_HPP

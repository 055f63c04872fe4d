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

#ifndef QRV_JSON_IO_HPP
#define QRV_JSON_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qrv/ast.hpp"
#include "qrv/expr.hpp"
#include "qrv/matrix.hpp"
#include "qrv/pqpt.hpp"
#include "qrv/superop.hpp"

namespace qrv {

using json = nlohmann::ordered_json;

// All numeric output carries 12 significant digits.
inline double round_sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

// Matrix literal: row-major array of arrays of [re, im] pairs.
inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::int64_t j = 0; j < m.cols(); ++j)
      row.push_back({round_sig(m(i, j).real()), round_sig(m(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    fail(ErrorKind::BadInput, "matrix literal must be a non-empty array");
  const std::int64_t rows = static_cast<std::int64_t>(j.size());
  const std::int64_t cols = static_cast<std::int64_t>(j[0].size());
  Mat m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    if (static_cast<std::int64_t>(j[i].size()) != cols)
      fail(ErrorKind::BadInput, "ragged matrix literal");
    for (std::int64_t jj = 0; jj < cols; ++jj) {
      const auto& cell = j[i][jj];
      if (cell.is_number()) {
        m(i, jj) = cd(cell.get<double>(), 0.0);
      } else if (cell.is_array() && cell.size() == 2) {
        m(i, jj) = cd(cell[0].get<double>(), cell[1].get<double>());
      } else {
        fail(ErrorKind::BadInput, "matrix entries are [re, im] pairs");
      }
    }
  }
  return m;
}

inline json superop_to_json(const SuperOp& e) {
  json out;
  json kraus = json::array();
  for (const auto& k : e.kraus()) kraus.push_back(mat_to_json(k));
  out["kraus"] = std::move(kraus);
  json vars = json::array();
  for (const auto& r : e.in_vars()) vars.push_back(r.name);
  out["vars"] = std::move(vars);
  return out;
}

inline SuperOp superop_from_json(const json& j, const Program& prog) {
  if (!j.contains("kraus") || !j.contains("vars"))
    fail(ErrorKind::BadInput, "operation literals need kraus and vars");
  Regs vars;
  for (const auto& v : j.at("vars")) vars.push_back(prog.reg(v.get<std::string>()));
  std::vector<Mat> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(mat_from_json(k));
  return SuperOp(vars, std::move(kraus));
}

// Bindings file: named unitaries, measurements (outcome-indexed operator
// maps) and predicate constants, all plain matrices without register tags.
inline void load_bindings(Program& prog, const json& j) {
  if (j.contains("unitaries"))
    for (auto it = j.at("unitaries").begin(); it != j.at("unitaries").end(); ++it)
      prog.unitaries[it.key()] = mat_from_json(it.value());
  if (j.contains("measurements")) {
    for (auto it = j.at("measurements").begin(); it != j.at("measurements").end();
         ++it) {
      std::map<int, Mat> ops;
      for (auto o = it.value().begin(); o != it.value().end(); ++o)
        ops[std::stoi(o.key())] = mat_from_json(o.value());
      prog.measurements[it.key()] = std::move(ops);
    }
  }
  if (j.contains("predicates"))
    for (auto it = j.at("predicates").begin(); it != j.at("predicates").end(); ++it)
      prog.predicates[it.key()] = mat_from_json(it.value());
}

inline json bindings_to_json(const Program& prog) {
  json j;
  json us = json::object();
  for (const auto& [name, m] : prog.unitaries) us[name] = mat_to_json(m);
  j["unitaries"] = std::move(us);
  json ms = json::object();
  for (const auto& [name, ops] : prog.measurements) {
    json outs = json::object();
    for (const auto& [m, mat] : ops) outs[std::to_string(m)] = mat_to_json(mat);
    ms[name] = std::move(outs);
  }
  j["measurements"] = std::move(ms);
  json ps = json::object();
  for (const auto& [name, m] : prog.predicates) ps[name] = mat_to_json(m);
  j["predicates"] = std::move(ps);
  return j;
}

// Resolves {"family": name, "index": expr} references in proof scripts.
using FamilyResolver =
    std::function<Pqpt(const std::string& name, std::int64_t index)>;

// Assertion expressions. Grammar (JSON):
//   {"literal": matrix | "I" | "0", "vars": [names]}
//   {"named": predicate-name, "vars": [names]}
//   {"base": [{"vars": [...], "pvar": name-or-"I"}...], "E": kraus, "F": kraus}
//   {"scale": number-or-expression, "of": assertion}
//   {"sum": [assertion...]}            (parameter-free operands only)
//   {"family": name, "index": expression}   (proof scripts only)
inline Pqpt pqpt_from_json(const json& j, const Program& prog,
                           const Tolerances& tol = {},
                           const std::map<std::string, double>& env = {},
                           const FamilyResolver* families = nullptr) {
  if (!j.is_object()) fail(ErrorKind::BadInput, "assertion must be an object");
  if (j.contains("literal")) {
    Regs regs;
    for (const auto& v : j.at("vars")) regs.push_back(prog.reg(v.get<std::string>()));
    const auto& lit = j.at("literal");
    Mat m;
    if (lit.is_string()) {
      const std::int64_t d = total_dim(regs);
      if (lit.get<std::string>() == "I") m = Mat::Identity(d, d);
      else if (lit.get<std::string>() == "0") m = Mat::Zero(d, d);
      else fail(ErrorKind::BadInput, "unknown literal shorthand");
    } else {
      m = mat_from_json(lit);
    }
    return Pqpt::literal(ComplexMatrix(regs, std::move(m)), tol);
  }
  if (j.contains("named")) {
    const std::string name = j.at("named").get<std::string>();
    auto it = prog.predicates.find(name);
    if (it == prog.predicates.end())
      fail(ErrorKind::UnknownName, "unbound predicate " + name);
    Regs regs;
    for (const auto& v : j.at("vars")) regs.push_back(prog.reg(v.get<std::string>()));
    return Pqpt::literal(ComplexMatrix(regs, it->second), tol);
  }
  if (j.contains("family")) {
    if (!families)
      fail(ErrorKind::BadInput, "family references only appear in proofs");
    const std::int64_t idx =
        j.at("index").is_number()
            ? j.at("index").get<std::int64_t>()
            : eval_index(j.at("index").get<std::string>(), env);
    return (*families)(j.at("family").get<std::string>(), idx);
  }
  if (j.contains("scale")) {
    const double lambda = j.at("scale").is_number()
                              ? j.at("scale").get<double>()
                              : eval_expr(j.at("scale").get<std::string>(), env);
    return pqpt_from_json(j.at("of"), prog, tol, env, families)
        .scaled(lambda, tol);
  }
  if (j.contains("sum")) {
    std::optional<ComplexMatrix> acc;
    for (const auto& term : j.at("sum")) {
      Pqpt p = pqpt_from_json(term, prog, tol, env, families);
      if (!p.params().empty())
        fail(ErrorKind::BadInput, "sums are for parameter-free assertions");
      ComplexMatrix m = eval_pqpt(p);
      acc = acc ? acc->plus(m) : m;
    }
    if (!acc) fail(ErrorKind::BadInput, "empty sum");
    return Pqpt::literal(*acc, tol);
  }
  if (j.contains("base")) {
    std::vector<PqptFactor> base;
    for (const auto& fj : j.at("base")) {
      PqptFactor f;
      for (const auto& v : fj.at("vars"))
        f.regs.push_back(prog.reg(v.get<std::string>()));
      if (fj.contains("pvar") && fj.at("pvar").get<std::string>() != "I")
        f.pvar = fj.at("pvar").get<std::string>();
      base.push_back(std::move(f));
    }
    Regs vars;
    for (const auto& f : base) vars.insert(vars.end(), f.regs.begin(), f.regs.end());
    auto kraus_of = [&](const char* key) -> SuperOp {
      if (!j.contains(key)) return SuperOp::zero(vars);
      std::vector<Mat> ks;
      for (const auto& k : j.at(key)) ks.push_back(mat_from_json(k));
      if (ks.empty()) return SuperOp::zero(vars);
      return SuperOp(vars, std::move(ks));
    };
    return Pqpt(std::move(base), kraus_of("E"), kraus_of("F"), tol);
  }
  fail(ErrorKind::BadInput, "unrecognized assertion form");
}

inline json pqpt_to_json(const Pqpt& p) {
  json out;
  json base = json::array();
  for (const auto& f : p.base()) {
    json fj;
    json vars = json::array();
    for (const auto& r : f.regs) vars.push_back(r.name);
    fj["vars"] = std::move(vars);
    fj["pvar"] = f.pvar ? *f.pvar : "I";
    base.push_back(std::move(fj));
  }
  out["base"] = std::move(base);
  json ek = json::array();
  for (const auto& k : p.e_part().kraus()) ek.push_back(mat_to_json(k));
  out["E"] = std::move(ek);
  json fk = json::array();
  for (const auto& k : p.f_part().kraus()) fk.push_back(mat_to_json(k));
  out["F"] = std::move(fk);
  return out;
}

inline json verdict_to_json(const Verdict& v) {
  json out;
  out["status"] = status_name(v.status);
  if (v.witness) {
    json w;
    json assignment = json::object();
    for (const auto& [name, m] : v.witness->assignment)
      assignment[name] = mat_to_json(m);
    w["assignment"] = std::move(assignment);
    w["eigenvalue"] = round_sig(v.witness->eigenvalue);
    w["state"] = mat_to_json(v.witness->state.entries());
    w["note"] = v.witness->note;
    out["witness"] = std::move(w);
  }
  out["iterations"] = v.iterations;
  if (v.sampled) out["inductive step sampled"] = true;
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorKind::SyntaxError, path + ": " + e.what());
  }
  return j;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qrv

#endif  // QRV_JSON_IO_HPP

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

#ifndef QRV_EXAMPLES_HPP
#define QRV_EXAMPLES_HPP

#include <array>

#include "qrv/json_io.hpp"
#include "qrv/lang.hpp"
#include "qrv/parser.hpp"

// Generators for the two larger case studies: the fixed-point search
// engine with a bounded quantum counter, and recursive Fourier sampling at
// depth one. Both produce source text, numeric bindings, and (for the
// search engine) a replayable partial-correctness proof script.

namespace qrv::examples {

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat shift_mat(std::int64_t dim, std::int64_t by) {
  Mat m = Mat::Zero(dim, dim);
  for (std::int64_t x = 0; x < dim; ++x)
    m(((x + by) % dim + dim) % dim, x) = 1;
  return m;
}

inline Mat hadamard2() {
  Mat h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

inline Mat pauli_x2() {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

// ---------------------------------------------------------------------
// Fixed-point search. The engine sequence V_{n+1} = V_n Rs V_n^dag Rt V_n
// drives |s> to |t> with error eps^(3^n); the recursion depth is carried
// by a counter register of dimension 2^m.
// ---------------------------------------------------------------------

struct SearchScenario {
  std::string source;
  json bindings;
  Program program;  // parsed + bindings + typechecked
  std::vector<Mat> engines;
  Vec s_state, t_state;
  double eps = 0.0;
  std::int64_t counter_dim = 4;
};

inline const char* search_source() {
  return R"(// Fixed-point search engine with a modular counter: outcome 0 applies
// the base step, outcome 1 unwinds one level of the engine recursion.

var q1 : int[4]
var q2 : bool

proc qsearch() =
  case M0 [q1] {
    0 -> [q2] *= V
    1 -> [q1] *= Um1 ; call qsearch() ; [q2] *= Rt ; call qsearchd() ; [q2] *= Rs ; call qsearch() ; [q1] *= Up1
  }
end

proc qsearchd() =
  case M0 [q1] {
    0 -> [q2] *= Vd
    1 -> [q1] *= Um1 ; call qsearchd() ; [q2] *= RsD ; call qsearch() ; [q2] *= RtD ; call qsearchd() ; [q1] *= Up1
  }
end

:: call qsearch()
)";
}

inline SearchScenario search_scenario(double eps = 0.25) {
  SearchScenario sc;
  sc.eps = eps;
  sc.counter_dim = 4;  // m = 2
  sc.s_state = Vec(2);
  sc.s_state << 1, 0;
  sc.t_state = Vec(2);
  sc.t_state << std::sqrt(1 - eps), std::sqrt(eps);

  const cd phase = cd(1, 0) - std::polar(1.0, M_PI / 3.0);
  Mat rs = Mat::Identity(2, 2) - phase * (sc.s_state * sc.s_state.adjoint());
  Mat rt = Mat::Identity(2, 2) - phase * (sc.t_state * sc.t_state.adjoint());
  Mat v = Mat::Identity(2, 2);

  sc.engines.push_back(v);
  for (std::int64_t n = 1; n < sc.counter_dim; ++n) {
    const Mat& prev = sc.engines.back();
    sc.engines.push_back(prev * rs * prev.adjoint() * rt * prev);
  }

  json b;
  b["unitaries"] = {{"V", mat_to_json(v)},
                    {"Vd", mat_to_json(Mat(v.adjoint()))},
                    {"Rs", mat_to_json(rs)},
                    {"RsD", mat_to_json(Mat(rs.adjoint()))},
                    {"Rt", mat_to_json(rt)},
                    {"RtD", mat_to_json(Mat(rt.adjoint()))},
                    {"Up1", mat_to_json(shift_mat(4, 1))},
                    {"Um1", mat_to_json(shift_mat(4, -1))}};
  Mat m0 = Mat::Zero(4, 4);
  m0(0, 0) = 1;
  Mat m1 = Mat::Identity(4, 4) - m0;
  b["measurements"] = {{"M0", {{"0", mat_to_json(m0)}, {"1", mat_to_json(m1)}}}};
  b["predicates"] = json::object();
  sc.bindings = std::move(b);

  sc.program = parse_program(search_source());
  load_bindings(sc.program, sc.bindings);
  typecheck(sc.program);
  return sc;
}

namespace search_detail {

inline Mat ket_bra4(std::int64_t i, std::int64_t j) {
  Mat m = Mat::Zero(4, 4);
  m(i, j) = 1;
  return m;
}

inline json kraus_json(const std::vector<Mat>& ks) {
  json out = json::array();
  for (const auto& k : ks) out.push_back(mat_to_json(k));
  return out;
}

inline json c_term(const std::vector<Mat>& kraus) {
  json base = json::array(
      {{{"vars", json::array({"q1", "q2"})}, {"pvar", "C"}}});
  return {{"base", base}, {"E", kraus_json(kraus)}};
}

inline json par(json pre, json stmt, json post) {
  return {{"mode", "partial"}, {"pre", std::move(pre)},
          {"stmt", std::move(stmt)}, {"post", std::move(post)}};
}

}  // namespace search_detail

// Partial-correctness script for the search engine, structured after the
// standard annotated derivation of its body: per-arm chains of unitary
// axioms and adapted call assumptions, folded by composition, closed by
// case analysis and simultaneous recursion. The two per-register predicate
// variables of the hand proof are fused into one joint variable so that
// every adaptation of an assumption is a single-parameter substitution.
inline json search_partial_script(const SearchScenario& sc) {
  using namespace search_detail;
  const std::vector<Mat>& v = sc.engines;
  const Mat eye2 = Mat::Identity(2, 2);
  const cd phase = cd(1, 0) - std::polar(1.0, M_PI / 3.0);
  Mat rs = Mat::Identity(2, 2) - phase * (sc.s_state * sc.s_state.adjoint());
  Mat rt = Mat::Identity(2, 2) - phase * (sc.t_state * sc.t_state.adjoint());

  auto family = [&](auto&& f) {  // Kraus list indexed by counter value
    std::vector<Mat> ks;
    for (std::int64_t k = 0; k + 1 < 4; ++k)
      ks.push_back(kron(ket_bra4(k + 1, k), f(k)));
    return ks;
  };
  auto diag_family = [&](auto&& f, std::int64_t from, std::int64_t to) {
    std::vector<Mat> ks;
    for (std::int64_t k = from; k <= to; ++k)
      ks.push_back(kron(ket_bra4(k, k), f(k)));
    return ks;
  };

  // Rule-schema terms for the two procedures.
  json qs_pre = c_term(diag_family([&](std::int64_t) { return eye2; }, 0, 3));
  json qs_post = c_term(
      diag_family([&](std::int64_t k) { return Mat(v[k].adjoint()); }, 0, 3));
  json qsd_post =
      c_term(diag_family([&](std::int64_t k) { return v[k]; }, 0, 3));

  json steps = json::array();
  auto add = [&](json j) { steps.push_back(std::move(j)); };

  // --- body of qsearch ---
  add({{"id", "qs_a"}, {"rule", "A Unit"},
       {"conclusion",
        par(c_term({kron(ket_bra4(0, 0), eye2)}), "[q2] *= V",
            c_term({kron(ket_bra4(0, 0), Mat(v[0].adjoint()))}))}});
  add({{"id", "qs_b"}, {"rule", "R Order"}, {"premises", {"qs_a"}},
       {"conclusion",
        par(c_term({kron(ket_bra4(0, 0), eye2)}), "[q2] *= V", qs_post)}});

  json k_c_pre = c_term(diag_family([&](std::int64_t) { return eye2; }, 1, 3));
  json k_c = c_term(family([&](std::int64_t) { return eye2; }));
  add({{"id", "qs_c"}, {"rule", "A Unit"},
       {"conclusion", par(k_c_pre, "[q1] *= Um1", k_c)}});

  json k_d = c_term(family([&](std::int64_t k) { return Mat(v[k].adjoint()); }));
  add({{"id", "qs_d"}, {"rule", "R Subst"}, {"premises", {"HQS"}},
       {"subst", {{"C", c_term(family([&](std::int64_t) { return eye2; }))}}},
       {"conclusion", par(k_c, "call qsearch()", k_d)}});

  json k_e = c_term(
      family([&](std::int64_t k) { return Mat(v[k].adjoint() * rt.adjoint()); }));
  add({{"id", "qs_e"}, {"rule", "A Unit"},
       {"conclusion", par(k_d, "[q2] *= Rt", k_e)}});

  json k_f = c_term(family(
      [&](std::int64_t k) { return Mat(v[k].adjoint() * rt.adjoint() * v[k]); }));
  add({{"id", "qs_f"}, {"rule", "R Subst"}, {"premises", {"HQSD"}},
       {"subst",
        {{"C", c_term(family([&](std::int64_t k) {
            return Mat(v[k].adjoint() * rt.adjoint());
          }))}}},
       {"conclusion", par(k_e, "call qsearchd()", k_f)}});

  json k_g = c_term(family([&](std::int64_t k) {
    return Mat(v[k].adjoint() * rt.adjoint() * v[k] * rs.adjoint());
  }));
  add({{"id", "qs_g"}, {"rule", "A Unit"},
       {"conclusion", par(k_f, "[q2] *= Rs", k_g)}});

  json k_h = c_term(family(
      [&](std::int64_t k) { return Mat(v[k + 1].adjoint()); }));
  add({{"id", "qs_h"}, {"rule", "R Subst"}, {"premises", {"HQS"}},
       {"subst",
        {{"C", c_term(family([&](std::int64_t k) {
            return Mat(v[k].adjoint() * rt.adjoint() * v[k] * rs.adjoint());
          }))}}},
       {"conclusion", par(k_g, "call qsearch()", k_h)}});

  json k_i = c_term(
      diag_family([&](std::int64_t k) { return Mat(v[k].adjoint()); }, 1, 3));
  add({{"id", "qs_i"}, {"rule", "A Unit"},
       {"conclusion", par(k_h, "[q1] *= Up1", k_i)}});

  // Fold the seven pieces of arm 1 from the right.
  struct Piece {
    const char* text;
    const char* step;
    json pre, post;
  };
  std::vector<Piece> pieces{
      {"[q1] *= Um1", "qs_c", k_c_pre, k_c},
      {"call qsearch()", "qs_d", k_c, k_d},
      {"[q2] *= Rt", "qs_e", k_d, k_e},
      {"call qsearchd()", "qs_f", k_e, k_f},
      {"[q2] *= Rs", "qs_g", k_f, k_g},
      {"call qsearch()", "qs_h", k_g, k_h},
      {"[q1] *= Up1", "qs_i", k_h, k_i},
  };
  std::string tail_text = pieces.back().text;
  std::string tail_step = pieces.back().step;
  json tail_pre = pieces.back().pre;
  for (std::size_t i = pieces.size() - 1; i-- > 0;) {
    std::string text = std::string(pieces[i].text) + " ; " + tail_text;
    std::string id = std::string("qs_fold") + std::to_string(i);
    add({{"id", id}, {"rule", "R Comp"},
         {"premises", {pieces[i].step, tail_step}},
         {"conclusion", par(pieces[i].pre, text, k_i)}});
    tail_text = std::move(text);
    tail_step = id;
    tail_pre = pieces[i].pre;
  }
  add({{"id", "qs_arm1"}, {"rule", "R Order"}, {"premises", {tail_step}},
       {"conclusion", par(k_c_pre, tail_text, qs_post)}});
  add({{"id", "qs_body"}, {"rule", "R Case"},
       {"premises", {"qs_b", "qs_arm1"}},
       {"conclusion",
        par(qs_pre, json{{"body_of", "qsearch"}}, qs_post)}});

  // --- body of qsearchd (mirror image) ---
  add({{"id", "qd_a"}, {"rule", "A Unit"},
       {"conclusion",
        par(c_term({kron(ket_bra4(0, 0), eye2)}), "[q2] *= Vd",
            c_term({kron(ket_bra4(0, 0), v[0])}))}});
  add({{"id", "qd_b"}, {"rule", "R Order"}, {"premises", {"qd_a"}},
       {"conclusion",
        par(c_term({kron(ket_bra4(0, 0), eye2)}), "[q2] *= Vd", qsd_post)}});

  json kd_c = c_term(family([&](std::int64_t) { return eye2; }));
  add({{"id", "qd_c"}, {"rule", "A Unit"},
       {"conclusion", par(k_c_pre, "[q1] *= Um1", kd_c)}});

  json kd_d = c_term(family([&](std::int64_t k) { return v[k]; }));
  add({{"id", "qd_d"}, {"rule", "R Subst"}, {"premises", {"HQSD"}},
       {"subst", {{"C", c_term(family([&](std::int64_t) { return eye2; }))}}},
       {"conclusion", par(kd_c, "call qsearchd()", kd_d)}});

  json kd_e = c_term(family([&](std::int64_t k) { return Mat(v[k] * rs); }));
  add({{"id", "qd_e"}, {"rule", "A Unit"},
       {"conclusion", par(kd_d, "[q2] *= RsD", kd_e)}});

  json kd_f = c_term(
      family([&](std::int64_t k) { return Mat(v[k] * rs * v[k].adjoint()); }));
  add({{"id", "qd_f"}, {"rule", "R Subst"}, {"premises", {"HQS"}},
       {"subst", {{"C", c_term(family([&](std::int64_t k) {
           return Mat(v[k] * rs);
         }))}}},
       {"conclusion", par(kd_e, "call qsearch()", kd_f)}});

  json kd_g = c_term(family(
      [&](std::int64_t k) { return Mat(v[k] * rs * v[k].adjoint() * rt); }));
  add({{"id", "qd_g"}, {"rule", "A Unit"},
       {"conclusion", par(kd_f, "[q2] *= RtD", kd_g)}});

  json kd_h = c_term(family([&](std::int64_t k) { return v[k + 1]; }));
  add({{"id", "qd_h"}, {"rule", "R Subst"}, {"premises", {"HQSD"}},
       {"subst", {{"C", c_term(family([&](std::int64_t k) {
           return Mat(v[k] * rs * v[k].adjoint() * rt);
         }))}}},
       {"conclusion", par(kd_g, "call qsearchd()", kd_h)}});

  json kd_i = c_term(diag_family([&](std::int64_t k) { return v[k]; }, 1, 3));
  add({{"id", "qd_i"}, {"rule", "A Unit"},
       {"conclusion", par(kd_h, "[q1] *= Up1", kd_i)}});

  std::vector<Piece> pieces_d{
      {"[q1] *= Um1", "qd_c", k_c_pre, kd_c},
      {"call qsearchd()", "qd_d", kd_c, kd_d},
      {"[q2] *= RsD", "qd_e", kd_d, kd_e},
      {"call qsearch()", "qd_f", kd_e, kd_f},
      {"[q2] *= RtD", "qd_g", kd_f, kd_g},
      {"call qsearchd()", "qd_h", kd_g, kd_h},
      {"[q1] *= Up1", "qd_i", kd_h, kd_i},
  };
  tail_text = pieces_d.back().text;
  tail_step = pieces_d.back().step;
  for (std::size_t i = pieces_d.size() - 1; i-- > 0;) {
    std::string text = std::string(pieces_d[i].text) + " ; " + tail_text;
    std::string id = std::string("qd_fold") + std::to_string(i);
    add({{"id", id}, {"rule", "R Comp"},
         {"premises", {pieces_d[i].step, tail_step}},
         {"conclusion", par(pieces_d[i].pre, text, kd_i)}});
    tail_text = std::move(text);
    tail_step = id;
  }
  add({{"id", "qd_arm1"}, {"rule", "R Order"}, {"premises", {tail_step}},
       {"conclusion", par(k_c_pre, tail_text, qsd_post)}});
  add({{"id", "qd_body"}, {"rule", "R Case"},
       {"premises", {"qd_b", "qd_arm1"}},
       {"conclusion",
        par(qs_pre, json{{"body_of", "qsearchd"}}, qsd_post)}});

  add({{"id", "rec"}, {"rule", "Rp gRec"},
       {"assumptions", {"HQS", "HQSD"}},
       {"procs",
        {{{"name", "qsearch"}, {"obligation", "qs_body"}, {"pre", qs_pre},
          {"post", qs_post}},
         {{"name", "qsearchd"}, {"obligation", "qd_body"}, {"pre", qs_pre},
          {"post", qsd_post}}}}});

  // Instantiate at the concrete start: counter |n>, search register |s>.
  const std::int64_t n = 2;
  Mat start = kron(ket_bra4(n, n), Mat(sc.s_state * sc.s_state.adjoint()));
  Mat target =
      kron(ket_bra4(n, n),
           Mat((v[n] * sc.s_state) * (v[n] * sc.s_state).adjoint()));
  json lit_start = {{"literal", mat_to_json(start)},
                    {"vars", json::array({"q1", "q2"})}};
  json lit_target = {{"literal", mat_to_json(target)},
                     {"vars", json::array({"q1", "q2"})}};
  add({{"id", "inst"}, {"rule", "R Subst"}, {"premises", {"rec:0"}},
       {"subst", {{"C", lit_start}}},
       {"conclusion", par(lit_start, "call qsearch()", lit_target)}});

  json script;
  script["goal"] = "inst";
  script["assumptions"] = json::array(
      {{{"label", "HQS"}, {"proc", "qsearch"}, {"args", json::array()},
        {"mode", "partial"}, {"pre", qs_pre}, {"post", qs_post}},
       {{"label", "HQSD"}, {"proc", "qsearchd"}, {"args", json::array()},
        {"mode", "partial"}, {"pre", qs_pre}, {"post", qsd_post}}});
  script["steps"] = std::move(steps);
  return script;
}

// ---------------------------------------------------------------------
// Recursive Fourier sampling, depth one on single-bit strings. The slot
// registers of the array variable are threaded through the parameter list;
// the root call receives a dummy slot it never touches.
// ---------------------------------------------------------------------

struct SamplingSecrets {
  std::array<int, 2> g{0, 1};        // computable function on {0,1}
  int s_root = 0;                    // secret of the root
  std::array<int, 2> s_child{0, 0};  // secrets of the two children
  // Promise: g(s_child[x]) == s_root & x for both x.
  bool consistent() const {
    for (int x = 0; x < 2; ++x)
      if (g[static_cast<std::size_t>(s_child[x])] != ((s_root & x) ? 1 : 0))
        return false;
    return true;
  }
  int answer() const { return g[static_cast<std::size_t>(s_root)]; }
};

inline SamplingSecrets random_secrets(Rng& rng) {
  for (;;) {
    SamplingSecrets s;
    s.g = {static_cast<int>(rng.uniform_int(0, 1)),
           static_cast<int>(rng.uniform_int(0, 1))};
    s.s_root = static_cast<int>(rng.uniform_int(0, 1));
    bool ok = true;
    for (int x = 0; x < 2; ++x) {
      const int want = (s.s_root & x) ? 1 : 0;
      std::vector<int> candidates;
      for (int c = 0; c < 2; ++c)
        if (s.g[c] == want) candidates.push_back(c);
      if (candidates.empty()) {
        ok = false;
        break;
      }
      s.s_child[x] =
          candidates[static_cast<std::size_t>(rng.uniform_int(
              0, static_cast<std::int64_t>(candidates.size()) - 1))];
    }
    if (ok && s.consistent()) return s;
  }
}

struct SamplingScenario {
  std::string source;
  json bindings;
  Program program;
  SamplingSecrets secrets;
};

inline const char* sampling_source() {
  return R"(// Depth-one recursive Fourier sampling. The counter q tracks the tree
// level; outcome 0 descends with fresh ancillas, outcome 1 queries the
// leaf oracle on the slot passed down by the parent.

var p : int[2]
var z : bool
var x0 : bool
var q : int[2]
var y : bool
var xx : bool
var xl : bool
var yl : bool

proc rqfs(q, y, xx) =
  case MC [q] {
    0 -> [q] *= Up1 ; local xl yl ; [xl yl] *= HHX ; call rqfs(q, yl, xl) ; [xl] *= Had ; [xl y] *= G ; [xl] *= Had ; call rqfs(q, yl, xl) ; [xl yl] *= HXH ; release xl yl ; [q] *= Um1
    1 -> [xx y] *= O
    2 -> bot
  }
end

::
  p :=|0> ;
  z :=|0> ;
  x0 :=|0> ;
  call rqfs(p, z, x0) ;
  case MZ [z] {
    0 -> skip
    1 -> skip
  }
)";
}

inline SamplingScenario sampling_scenario(const SamplingSecrets& secrets) {
  if (!secrets.consistent())
    fail(ErrorKind::BadInput, "secrets violate the sampling promise");
  SamplingScenario sc;
  sc.secrets = secrets;
  sc.source = sampling_source();

  Mat h = hadamard2(), x = pauli_x2();
  // Oracle G: |s>|y> -> |s>|y + g(s)>.
  Mat g_mat = Mat::Zero(4, 4);
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      g_mat(2 * s + (y ^ secrets.g[static_cast<std::size_t>(s)]), 2 * s + y) = 1;
  // Leaf oracle O: |x>|y> -> |x>|y + g(s_child[x])>.
  Mat o_mat = Mat::Zero(4, 4);
  for (int xv = 0; xv < 2; ++xv) {
    const int bit = secrets.g[static_cast<std::size_t>(
        secrets.s_child[static_cast<std::size_t>(xv)])];
    for (int y = 0; y < 2; ++y) o_mat(2 * xv + (y ^ bit), 2 * xv + y) = 1;
  }

  json b;
  b["unitaries"] = {{"Up1", mat_to_json(x)},
                    {"Um1", mat_to_json(x)},
                    {"HHX", mat_to_json(kron(h, Mat(h * x)))},
                    {"HXH", mat_to_json(kron(h, Mat(x * h)))},
                    {"Had", mat_to_json(h)},
                    {"G", mat_to_json(g_mat)},
                    {"O", mat_to_json(o_mat)}};
  Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
  k0(0, 0) = 1;
  k1(1, 1) = 1;
  b["measurements"] = {
      {"MC",
       {{"0", mat_to_json(k0)},
        {"1", mat_to_json(k1)},
        {"2", mat_to_json(Mat(Mat::Zero(2, 2)))}}},
      {"MZ", {{"0", mat_to_json(k0)}, {"1", mat_to_json(k1)}}}};
  b["predicates"] = json::object();
  sc.bindings = std::move(b);

  sc.program = parse_program(sc.source);
  load_bindings(sc.program, sc.bindings);
  typecheck(sc.program);
  return sc;
}

}  // namespace qrv::examples

#endif  // QRV_EXAMPLES_HPP

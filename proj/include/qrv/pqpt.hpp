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

#ifndef QRV_PQPT_HPP
#define QRV_PQPT_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrv/random.hpp"
#include "qrv/superop.hpp"

namespace qrv {

// One tensor factor of a parameterized base: either a predicate variable
// over the factor's registers or the identity on them.
struct PqptFactor {
  Regs regs;
  std::optional<std::string> pvar;
};

using Assignment = std::map<std::string, Mat>;

// Parameterized quantum predicate term E*(base) + F*(I): a Kraus pair over
// the term's registers plus a base built from predicate variables and
// identities. Evaluating under an assignment of the variables yields a
// quantum predicate.
class Pqpt {
 public:
  Pqpt() = default;

  Pqpt(std::vector<PqptFactor> base, SuperOp e, SuperOp f,
       const Tolerances& tol = {})
      : base_(std::move(base)), e_(std::move(e)), f_(std::move(f)) {
    validate(tol);
  }

  // Embeds a quantum predicate as a term with an empty parameter set: the
  // spectral decomposition becomes the F-side Kraus list and E is zero.
  static Pqpt literal(const ComplexMatrix& m, const Tolerances& tol = {}) {
    auto dec = spectral_decompose(m, tol);
    std::vector<Mat> kraus;
    for (const auto& [val, v] : dec) {
      double a = val;
      if (a < 0 && a >= -tol.tol_psd) a = 0;
      if (a > 1 && a <= 1 + tol.tol_psd) a = 1;
      if (a <= 0) continue;
      kraus.push_back(std::sqrt(a) * (v * v.adjoint()));
    }
    if (kraus.empty()) kraus.push_back(Mat::Zero(m.dim(), m.dim()));
    return Pqpt({PqptFactor{m.vars(), std::nullopt}}, SuperOp::zero(m.vars()),
                SuperOp(m.vars(), std::move(kraus)), tol);
  }

  // A bare predicate variable: base X, E the identity operation, F zero.
  static Pqpt variable(const std::string& name, const Regs& regs) {
    return Pqpt({PqptFactor{regs, name}}, SuperOp::identity(regs),
                SuperOp::zero(regs));
  }

  const std::vector<PqptFactor>& base() const { return base_; }
  const SuperOp& e_part() const { return e_; }
  const SuperOp& f_part() const { return f_; }

  Regs vars() const {
    Regs out;
    for (const auto& f : base_)
      out.insert(out.end(), f.regs.begin(), f.regs.end());
    return out;
  }

  std::set<std::string> params() const {
    std::set<std::string> out;
    for (const auto& f : base_)
      if (f.pvar) out.insert(*f.pvar);
    return out;
  }

  // F*(I), the constant part of every evaluation.
  ComplexMatrix f_identity() const {
    return apply(dual(f_), ComplexMatrix::identity(vars()));
  }

  // Same registers, zero maps: the quantum absurdity with this base.
  Pqpt zero_like() const {
    Regs v = vars();
    return Pqpt(base_, SuperOp::zero(v), SuperOp::zero(v));
  }

  // The quantum tautology with this base: E zero, F the identity.
  Pqpt identity_like() const {
    Regs v = vars();
    return Pqpt(base_, SuperOp::zero(v), SuperOp::identity(v));
  }

  Pqpt scaled(double lambda, const Tolerances& tol = {}) const {
    if (lambda < 0 || lambda > 1)
      fail(ErrorKind::BadInput, "predicate scale must lie in [0, 1]");
    return Pqpt(base_, scale(lambda, e_), scale(lambda, f_), tol);
  }

  // Appends identity factors for extra registers.
  Pqpt padded(const Regs& extra, const Tolerances& tol = {}) const {
    if (extra.empty()) return *this;
    auto base = base_;
    base.push_back(PqptFactor{extra, std::nullopt});
    return Pqpt(std::move(base), tensor_op(e_, SuperOp::identity(extra)),
                tensor_op(f_, SuperOp::identity(extra)), tol);
  }

  // Renames registers (injectively); matrices are untouched.
  Pqpt renamed(const std::map<std::string, std::string>& map,
               const Tolerances& tol = {}) const {
    auto rename_regs = [&](const Regs& regs) {
      Regs out = regs;
      for (auto& r : out) {
        auto it = map.find(r.name);
        if (it != map.end()) r.name = it->second;
      }
      return out;
    };
    auto base = base_;
    for (auto& f : base) f.regs = rename_regs(f.regs);
    Regs v = rename_regs(vars());
    return Pqpt(std::move(base), SuperOp(v, e_.kraus()),
                SuperOp(v, f_.kraus()), tol);
  }

 private:
  void validate(const Tolerances& tol) {
    if (base_.empty()) fail(ErrorKind::BadInput, "empty base");
    Regs v = vars();
    std::set<std::string> names;
    for (const auto& r : v)
      if (!names.insert(r.name).second)
        fail(ErrorKind::VariableClash, "register " + r.name + " repeats");
    std::set<std::string> pvars;
    for (const auto& f : base_) {
      if (f.regs.empty()) fail(ErrorKind::BadInput, "empty base factor");
      if (f.pvar && !pvars.insert(*f.pvar).second)
        fail(ErrorKind::VariableClash,
             "predicate variable " + *f.pvar + " occurs twice");
    }
    if (!(e_.in_vars() == v) || !e_.square() || !(f_.in_vars() == v) ||
        !f_.square())
      fail(ErrorKind::DimensionMismatch,
           "Kraus pair must be square over the term's registers");
    Mat joint = e_.kraus_gram() + f_.kraus_gram();
    Eigen::SelfAdjointEigenSolver<Mat> es(
        Mat(Mat::Identity(joint.rows(), joint.cols()) - joint),
        Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -10 * tol.tol_psd)
      fail(ErrorKind::NotTraceNonIncreasing,
           "E and F jointly exceed the identity");
  }

  std::vector<PqptFactor> base_;
  SuperOp e_, f_;
};

// Denotation of the base under an assignment.
inline ComplexMatrix eval_base(const Pqpt& p, const Assignment& v) {
  std::optional<ComplexMatrix> acc;
  for (const auto& f : p.base()) {
    ComplexMatrix factor = ComplexMatrix::identity(f.regs);
    if (f.pvar) {
      auto it = v.find(*f.pvar);
      if (it == v.end())
        fail(ErrorKind::MissingAssignment,
             "no value for predicate variable " + *f.pvar);
      if (it->second.rows() != total_dim(f.regs))
        fail(ErrorKind::DimensionMismatch,
             "assignment for " + *f.pvar + " has the wrong dimension");
      factor = ComplexMatrix(f.regs, it->second);
    }
    acc = acc ? tensor(*acc, factor) : factor;
  }
  return *acc;
}

// P under assignment v: E*(base^v) + F*(I).
inline ComplexMatrix eval_pqpt(const Pqpt& p, const Assignment& v = {}) {
  ComplexMatrix b = eval_base(p, v);
  return apply(dual(p.e_part()), b).plus(p.f_identity());
}

// Canonical base layout: variable factors stay as they are, identity
// factors split into one entry per register, so that regroupings of the
// identity padding compare equal.
inline std::vector<PqptFactor> canonical_base(const Pqpt& p) {
  std::vector<PqptFactor> out;
  for (const auto& f : p.base()) {
    if (f.pvar) {
      out.push_back(f);
    } else {
      for (const auto& r : f.regs)
        out.push_back(PqptFactor{Regs{r}, std::nullopt});
    }
  }
  return out;
}

inline bool same_base_layout(const Pqpt& a, const Pqpt& b) {
  auto ca = canonical_base(a), cb = canonical_base(b);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i].regs == cb[i].regs) || ca[i].pvar != cb[i].pvar) return false;
  return true;
}

// Equality of terms. The representation check (same layout, Choi-equal E,
// equal constant part) is sufficient; when it fails, the terms can still
// denote the same multilinear map, so fall back to comparing evaluations at
// the zero assignment and at every product of basis assignments.
inline bool pqpt_equal(const Pqpt& a, const Pqpt& b, double tol) {
  if (!(a.vars() == b.vars())) return false;
  if (a.params() != b.params()) return false;
  if (same_base_layout(a, b) && choi_equal(a.e_part(), b.e_part(), tol) &&
      max_abs_diff(a.f_identity(), b.f_identity()) <= tol)
    return true;

  std::vector<std::pair<std::string, std::int64_t>> slots;
  std::int64_t combos = 1;
  for (const auto& f : a.base())
    if (f.pvar) {
      const std::int64_t d = total_dim(f.regs);
      slots.emplace_back(*f.pvar, d);
      combos *= d * d;
    }
  if (slots.empty()) return max_abs_diff(eval_pqpt(a), eval_pqpt(b)) <= tol;
  if (combos > 4096) {
    // Too many basis products; sample instead (refutation-complete in
    // practice, and only reached for very wide parameter spaces).
    Rng rng(2);
    for (int k = 0; k < 128; ++k) {
      Assignment v;
      for (const auto& [name, d] : slots) v[name] = rng.qpred(d);
      if (max_abs_diff(eval_pqpt(a, v), eval_pqpt(b, v)) > tol) return false;
    }
    return true;
  }
  Assignment zero;
  for (const auto& [name, d] : slots) zero[name] = Mat::Zero(d, d);
  if (max_abs_diff(eval_pqpt(a, zero), eval_pqpt(b, zero)) > tol) return false;
  for (std::int64_t c = 0; c < combos; ++c) {
    Assignment v;
    std::int64_t rest = c;
    for (const auto& [name, d] : slots) {
      const std::int64_t cell = rest % (d * d);
      rest /= d * d;
      Mat m = Mat::Zero(d, d);
      m(cell / d, cell % d) = 1;
      v[name] = std::move(m);
    }
    if (max_abs_diff(eval_pqpt(a, v), eval_pqpt(b, v)) > tol) return false;
  }
  return true;
}

// Simultaneous substitution of terms for predicate variables. Substituends
// with parameters must sit on exactly the factor's registers with a
// single-variable base; when the target carries two or more parameters they
// must additionally have a zero F part. Parameter-free substituends fold
// into a constant operation and leave an identity factor behind.
inline Pqpt subst_pqpt(const Pqpt& p, const std::map<std::string, Pqpt>& subs,
                       const Tolerances& tol = {}) {
  const std::size_t n_params = p.params().size();
  std::vector<PqptFactor> new_base;
  std::vector<SuperOp> g_factors;
  std::optional<SuperOp> f_extra;  // positioned F contribution
  std::size_t factor_index = 0;

  for (const auto& f : p.base()) {
    ++factor_index;
    if (!f.pvar || !subs.count(*f.pvar)) {
      new_base.push_back(f);
      g_factors.push_back(SuperOp::identity(f.regs));
      continue;
    }
    const Pqpt& q = subs.at(*f.pvar);
    if (!(q.vars() == f.regs))
      fail(ErrorKind::DimensionMismatch,
           "substituend for " + *f.pvar + " must sit on registers " +
               regs_to_string(f.regs));
    if (q.params().empty()) {
      // Constant: fold E and F into one operation applied to the identity.
      new_base.push_back(PqptFactor{f.regs, std::nullopt});
      g_factors.push_back(add(q.e_part(), q.f_part(), /*check=*/false));
      continue;
    }
    if (q.base().size() != 1 || !q.base()[0].pvar)
      fail(ErrorKind::SideConditionViolated,
           "substituend for " + *f.pvar +
               " must have a single-variable base");
    const bool f_is_zero = choi(q.f_part()).cwiseAbs().maxCoeff() <= tol.tol_eq;
    if (n_params >= 2 && !f_is_zero)
      fail(ErrorKind::SideConditionViolated,
           "substituend for " + *f.pvar +
               " must be of the form E*(X) when the target has two or more "
               "parameters");
    new_base.push_back(PqptFactor{f.regs, q.base()[0].pvar});
    g_factors.push_back(q.e_part());
    if (!f_is_zero) {
      // Only reachable when n_params <= 1, i.e. this is the only
      // parameterized factor; position the F contribution at this slot.
      std::optional<SuperOp> padded;
      std::size_t idx = 0;
      for (const auto& g : p.base()) {
        ++idx;
        SuperOp piece = (idx == factor_index) ? q.f_part()
                                              : SuperOp::identity(g.regs);
        padded = padded ? tensor_op(*padded, piece) : piece;
      }
      f_extra = *padded;
    }
  }

  std::optional<SuperOp> g_total;
  for (const auto& g : g_factors)
    g_total = g_total ? tensor_op(*g_total, g) : g;

  SuperOp e_new = compose(p.e_part(), *g_total);
  SuperOp f_new = p.f_part();
  if (f_extra)
    f_new = add(f_new, compose(p.e_part(), *f_extra), /*check=*/false);
  return Pqpt(std::move(new_base), std::move(e_new), std::move(f_new), tol);
}

// Quantum conjunction (tensor product) of two terms on disjoint registers.
inline Pqpt pqpt_conj(const Pqpt& a, const Pqpt& b, const Tolerances& tol = {}) {
  for (const auto& r : b.vars())
    if (contains_reg(a.vars(), r.name))
      fail(ErrorKind::SideConditionViolated,
           "conjunction requires disjoint registers, " + r.name + " repeats");
  const bool a_const = a.params().empty();
  const bool b_const = b.params().empty();
  auto fold = [&](const Pqpt& p) {
    return add(p.e_part(), p.f_part(), /*check=*/false);
  };
  std::vector<PqptFactor> base;
  if (a_const || b_const) {
    SuperOp ga = a_const ? fold(a) : a.e_part();
    SuperOp gb = b_const ? fold(b) : b.e_part();
    SuperOp fa = a_const ? fold(a) : a.f_part();
    SuperOp fb = b_const ? fold(b) : b.f_part();
    if (a_const) {
      base.push_back(PqptFactor{a.vars(), std::nullopt});
      base.insert(base.end(), b.base().begin(), b.base().end());
      return Pqpt(std::move(base), tensor_op(ga, b.e_part()),
                  tensor_op(ga, b.f_part()), tol);
    }
    base.insert(base.end(), a.base().begin(), a.base().end());
    base.push_back(PqptFactor{b.vars(), std::nullopt});
    return Pqpt(std::move(base), tensor_op(a.e_part(), gb),
                tensor_op(a.f_part(), gb), tol);
  }
  const bool a_pure = choi(a.f_part()).cwiseAbs().maxCoeff() <= tol.tol_eq;
  const bool b_pure = choi(b.f_part()).cwiseAbs().maxCoeff() <= tol.tol_eq;
  if (!a_pure || !b_pure)
    fail(ErrorKind::SideConditionViolated,
         "conjunction of two parameterized terms requires zero F parts");
  base = a.base();
  base.insert(base.end(), b.base().begin(), b.base().end());
  Regs v;
  for (const auto& f : base) v.insert(v.end(), f.regs.begin(), f.regs.end());
  return Pqpt(std::move(base), tensor_op(a.e_part(), b.e_part()),
              SuperOp::zero(v), tol);
}

// Quantum disjunction sum_m E_m*(P_m) under an exclusive case selection.
// All terms must share the same base, and the selections must be jointly
// trace-non-increasing (the reading that keeps the result a valid term).
inline Pqpt pqpt_disj(const std::vector<SuperOp>& es,
                      const std::vector<Pqpt>& ps, const Tolerances& tol = {}) {
  if (es.empty() || es.size() != ps.size())
    fail(ErrorKind::BadInput, "mismatched disjunction arity");
  for (std::size_t i = 1; i < ps.size(); ++i)
    if (!same_base_layout(ps[i], ps[0]))
      fail(ErrorKind::SideConditionViolated,
           "disjunction requires identical bases");
  Regs v = ps[0].vars();
  Mat gram = Mat::Zero(total_dim(v), total_dim(v));
  for (const auto& e : es) {
    if (!(e.in_vars() == v) || !e.square())
      fail(ErrorKind::DimensionMismatch,
           "case selection must be square over the terms' registers");
    gram += e.kraus_gram();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es_gram(
      Mat(Mat::Identity(gram.rows(), gram.cols()) - gram),
      Eigen::EigenvaluesOnly);
  if (es_gram.eigenvalues().minCoeff() < -10 * tol.tol_psd)
    fail(ErrorKind::SideConditionViolated,
         "case selections jointly exceed the identity");
  SuperOp e_new = SuperOp::zero(v);
  SuperOp f_new = SuperOp::zero(v);
  for (std::size_t m = 0; m < es.size(); ++m) {
    e_new = add(e_new, compose(es[m], ps[m].e_part()), /*check=*/false);
    f_new = add(f_new, compose(es[m], ps[m].f_part()), /*check=*/false);
  }
  return Pqpt(ps[0].base(), std::move(e_new), std::move(f_new), tol);
}

enum class Status { Valid, Invalid, Unknown };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Valid: return "valid";
    case Status::Invalid: return "invalid";
    case Status::Unknown: return "unknown";
  }
  return "unknown";
}

struct Witness {
  Assignment assignment;
  double eigenvalue = 0.0;
  ComplexMatrix state;  // eigenvector of the violation, as a projector
  std::string note;
};

struct Verdict {
  Status status = Status::Unknown;
  std::optional<Witness> witness;
  std::int64_t iterations = 0;
  bool sampled = false;
  bool truncated = false;
  std::string detail;
};

enum class OrderRel { Leq, Eq };

struct OrderFormula {
  Pqpt lhs;
  Pqpt rhs;
  OrderRel relation = OrderRel::Leq;
};

namespace detail {

inline Witness eigen_witness(const ComplexMatrix& diff, Assignment v,
                             const std::string& note,
                             bool most_negative = true) {
  auto dec = spectral_decompose(diff);
  // Eigenvalues are sorted descending; the most negative sits last.
  std::size_t pick = dec.size() - 1;
  if (!most_negative && std::abs(dec.front().first) > std::abs(dec.back().first))
    pick = 0;
  const auto& [val, vec] = dec[pick];
  Witness w;
  w.assignment = std::move(v);
  w.eigenvalue = val;
  w.state = ComplexMatrix(diff.vars(), Mat(vec * vec.adjoint()));
  w.note = note;
  return w;
}

inline Assignment constant_assignment(const Pqpt& p, bool identity) {
  Assignment v;
  for (const auto& f : p.base())
    if (f.pvar) {
      const std::int64_t d = total_dim(f.regs);
      v[*f.pvar] = identity ? Mat(Mat::Identity(d, d)) : Mat(Mat::Zero(d, d));
    }
  return v;
}

}  // namespace detail

// Decides a Loewner ordering formula. Parameter-free formulas reduce to an
// operator comparison. Otherwise the restricted route applies when the two
// E parts are comparable as operations; failing that, random assignments can
// still refute the formula, but never confirm it.
inline Verdict pqpt_order(const OrderFormula& f, std::int64_t samples = 64,
                          std::uint64_t seed = 42, const Tolerances& tol = {},
                          double slack = 0.0) {
  if (f.lhs.params() != f.rhs.params())
    fail(ErrorKind::IllegitimateFormula,
         "both sides must carry the same parameters");
  Verdict verdict;
  const double eq_tol = tol.tol_eq + slack;

  auto compare_const = [&](const ComplexMatrix& l, const ComplexMatrix& r,
                           Assignment v, const std::string& note) -> Verdict {
    Verdict out;
    if (f.relation == OrderRel::Leq) {
      if (loewner_leq(l, r, tol, slack)) {
        out.status = Status::Valid;
      } else {
        out.status = Status::Invalid;
        out.witness = detail::eigen_witness(r.minus(l), std::move(v), note);
      }
    } else {
      if (max_abs_diff(l, r) <= eq_tol) {
        out.status = Status::Valid;
      } else {
        out.status = Status::Invalid;
        out.witness = detail::eigen_witness(r.minus(l), std::move(v), note,
                                            /*most_negative=*/false);
      }
    }
    return out;
  };

  if (f.lhs.params().empty()) {
    return compare_const(eval_pqpt(f.lhs), eval_pqpt(f.rhs), {},
                         "parameter-free comparison");
  }

  if (same_base_layout(f.lhs, f.rhs)) {
    Tolerances order_tol = tol;
    order_tol.tol_psd += slack;
    const bool le = qop_leq(f.lhs.e_part(), f.rhs.e_part(), order_tol);
    const bool ge = qop_leq(f.rhs.e_part(), f.lhs.e_part(), order_tol);
    if (le || ge) {
      const ComplexMatrix dl = f.lhs.f_identity();
      const ComplexMatrix dr = f.rhs.f_identity();
      if (f.relation == OrderRel::Eq) {
        if (le && ge && max_abs_diff(dl, dr) <= eq_tol) {
          verdict.status = Status::Valid;
          return verdict;
        }
        if (max_abs_diff(dl, dr) > eq_tol)
          return compare_const(dl, dr, detail::constant_assignment(f.lhs, false),
                               "constant parts differ at the zero assignment");
        Assignment v = detail::constant_assignment(f.lhs, true);
        ComplexMatrix l = eval_pqpt(f.lhs, v);
        ComplexMatrix r = eval_pqpt(f.rhs, v);
        return compare_const(l, r, std::move(v),
                             "E parts differ at the identity");
      }
      if (le) {
        return compare_const(dl, dr, detail::constant_assignment(f.lhs, false),
                             "zero-assignment comparison");
      }
      // lhs strictly above: compare the full evaluations at the identity.
      Assignment v = detail::constant_assignment(f.lhs, true);
      ComplexMatrix l = eval_pqpt(f.lhs, v);
      ComplexMatrix r = eval_pqpt(f.rhs, v);
      return compare_const(l, r, std::move(v),
                           "identity-assignment comparison");
    }
  }

  // Sampling can refute but never confirm.
  Rng rng(seed);
  verdict.sampled = true;
  for (std::int64_t k = 0; k < samples; ++k) {
    Assignment v;
    for (const auto& fac : f.lhs.base())
      if (fac.pvar) {
        const std::int64_t d = total_dim(fac.regs);
        if (k == 0) v[*fac.pvar] = Mat::Zero(d, d);
        else if (k == 1) v[*fac.pvar] = Mat::Identity(d, d);
        else v[*fac.pvar] = rng.qpred(d);
      }
    ComplexMatrix l = eval_pqpt(f.lhs, v);
    ComplexMatrix r = eval_pqpt(f.rhs, v);
    Verdict point = compare_const(l, r, v, "sampled assignment");
    if (point.status == Status::Invalid) {
      point.sampled = true;
      point.iterations = k + 1;
      return point;
    }
  }
  verdict.status = Status::Unknown;
  verdict.iterations = samples;
  verdict.detail = "no violation at sampled assignments; validity undecided";
  return verdict;
}

struct LimitOptions {
  double tol = 1e-8;
  std::int64_t max_iter = 10000;
  std::int64_t monotone_checks = 3;
  std::int64_t samples = 16;
  std::uint64_t seed = 42;
};

enum class LimitMode { Upper, Lower };

struct PqptLimit {
  Pqpt value;
  std::int64_t iterations = 0;
};

// Limit of a monotone term sequence, detected by stabilization of the Choi
// matrix of E and of the constant part. Monotonicity is spot-checked on the
// first few consecutive pairs.
inline PqptLimit limit_pqpt(const std::function<Pqpt(std::int64_t)>& gen,
                            LimitMode mode, const LimitOptions& opts = {},
                            const Tolerances& tol = {}) {
  Pqpt prev = gen(0);
  for (std::int64_t n = 1; n <= opts.max_iter; ++n) {
    Pqpt cur = gen(n);
    if (n <= opts.monotone_checks) {
      OrderFormula step;
      step.lhs = (mode == LimitMode::Upper) ? prev : cur;
      step.rhs = (mode == LimitMode::Upper) ? cur : prev;
      Verdict v = pqpt_order(step, opts.samples, opts.seed, tol);
      if (v.status == Status::Invalid)
        fail(ErrorKind::NotMonotone,
             "sequence is not monotone at index " + std::to_string(n - 1));
    }
    const double dist =
        (choi(prev.e_part()) - choi(cur.e_part())).norm() +
        max_abs_diff(prev.f_identity(), cur.f_identity());
    if (dist < opts.tol) return {cur, n};
    prev = std::move(cur);
  }
  fail(ErrorKind::NotConverged,
       "term sequence did not stabilize after " +
           std::to_string(opts.max_iter) + " iterations");
}

}  // namespace qrv

#endif  // QRV_PQPT_HPP

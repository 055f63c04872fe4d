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

#ifndef QRV_SUPEROP_HPP
#define QRV_SUPEROP_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qrv/matrix.hpp"

namespace qrv {

// Permutation matrix sending indices over `from` ordering to `to` ordering.
// `to` must be a permutation of `from`.
inline Mat reg_permutation(const Regs& from, const Regs& to) {
  if (from.size() != to.size())
    fail(ErrorKind::DimensionMismatch, "permutation arity mismatch");
  std::vector<std::size_t> map_to_from(to.size());
  for (std::size_t i = 0; i < to.size(); ++i) {
    bool found = false;
    for (std::size_t k = 0; k < from.size(); ++k) {
      if (from[k].name == to[i].name && from[k].dim == to[i].dim) {
        map_to_from[i] = k;
        found = true;
        break;
      }
    }
    if (!found)
      fail(ErrorKind::UnknownVariable,
           "register " + to[i].name + " missing in " + regs_to_string(from));
  }
  IndexCodec from_codec(from), to_codec(to);
  const std::int64_t d = total_dim(from);
  Mat p = Mat::Zero(d, d);
  std::vector<std::int64_t> ft, tt(to.size());
  for (std::int64_t i = 0; i < d; ++i) {
    from_codec.decode(i, ft);
    for (std::size_t k = 0; k < to.size(); ++k) tt[k] = ft[map_to_from[k]];
    p(to_codec.encode(tt), i) = cd(1, 0);
  }
  return p;
}

// Quantum operation in Kraus form. Input and output register lists may
// differ (state preparation and partial trace are rectangular); ordinary
// channels are square with in == out. The Kraus list is never empty; the
// zero map is a single all-zero operator.
class SuperOp {
 public:
  SuperOp() = default;

  // Square channel over `vars`.
  SuperOp(Regs vars, std::vector<Mat> kraus)
      : in_(vars), out_(std::move(vars)), kraus_(std::move(kraus)) {
    validate_shapes();
  }

  SuperOp(Regs in, Regs out, std::vector<Mat> kraus)
      : in_(std::move(in)), out_(std::move(out)), kraus_(std::move(kraus)) {
    validate_shapes();
  }

  explicit SuperOp(std::vector<ComplexMatrix> kraus) {
    if (kraus.empty()) fail(ErrorKind::BadInput, "empty Kraus list");
    in_ = kraus.front().vars();
    out_ = in_;
    for (auto& k : kraus) {
      k.require_same_vars(kraus.front());
      kraus_.push_back(k.entries());
    }
    validate_shapes();
  }

  static SuperOp identity(const Regs& vars) {
    return SuperOp(vars, {Mat::Identity(total_dim(vars), total_dim(vars))});
  }

  static SuperOp zero(const Regs& vars) {
    return SuperOp(vars, {Mat::Zero(total_dim(vars), total_dim(vars))});
  }

  // U <> U^dag as a channel.
  static SuperOp unitary(const ComplexMatrix& u) {
    return SuperOp(u.vars(), {u.entries()});
  }

  // rho -> rho (x) |0><0| on the fresh registers.
  static SuperOp prepare_zero(const Regs& base, const Regs& fresh) {
    const std::int64_t db = total_dim(base), df = total_dim(fresh);
    Mat k = Mat::Zero(db * df, db);
    for (std::int64_t i = 0; i < db; ++i) k(i * df, i) = cd(1, 0);
    Regs out = base;
    out.insert(out.end(), fresh.begin(), fresh.end());
    return SuperOp(base, std::move(out), {std::move(k)});
  }

  // Partial trace over the trailing registers `traced` of in = base+traced.
  static SuperOp trace_out(const Regs& base, const Regs& traced) {
    const std::int64_t db = total_dim(base), dt = total_dim(traced);
    Regs in = base;
    in.insert(in.end(), traced.begin(), traced.end());
    std::vector<Mat> kraus;
    for (std::int64_t t = 0; t < dt; ++t) {
      Mat k = Mat::Zero(db, db * dt);
      for (std::int64_t i = 0; i < db; ++i) k(i, i * dt + t) = cd(1, 0);
      kraus.push_back(std::move(k));
    }
    return SuperOp(std::move(in), base, std::move(kraus));
  }

  const Regs& in_vars() const { return in_; }
  const Regs& out_vars() const { return out_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  std::int64_t in_dim() const { return total_dim(in_); }
  std::int64_t out_dim() const { return total_dim(out_); }
  bool square() const { return in_ == out_; }

  // Sum_k K^dag K, a square matrix on the input space.
  Mat kraus_gram() const {
    Mat g = Mat::Zero(in_dim(), in_dim());
    for (const auto& k : kraus_) g += k.adjoint() * k;
    return g;
  }

  bool trace_nonincreasing(const Tolerances& tol = {}) const {
    Mat diff = Mat::Identity(in_dim(), in_dim()) - kraus_gram();
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.tol_psd;
  }

  // Appends spectator registers (identity action) at the end of both lists.
  SuperOp padded(const Regs& extra) const {
    if (extra.empty()) return *this;
    for (const auto& r : extra)
      if (contains_reg(in_, r.name) || contains_reg(out_, r.name))
        fail(ErrorKind::VariableClash, "padding register " + r.name +
                                           " already present");
    const std::int64_t de = total_dim(extra);
    Mat eye = Mat::Identity(de, de);
    std::vector<Mat> ks;
    ks.reserve(kraus_.size());
    for (const auto& k : kraus_) {
      Mat kk(k.rows() * de, k.cols() * de);
      for (std::int64_t i = 0; i < k.rows(); ++i)
        for (std::int64_t j = 0; j < k.cols(); ++j)
          kk.block(i * de, j * de, de, de) = k(i, j) * eye;
      ks.push_back(std::move(kk));
    }
    Regs in = in_, out = out_;
    in.insert(in.end(), extra.begin(), extra.end());
    out.insert(out.end(), extra.begin(), extra.end());
    return SuperOp(std::move(in), std::move(out), std::move(ks));
  }

  SuperOp reordered(const Regs& new_in, const Regs& new_out) const {
    Mat pin = reg_permutation(new_in, in_);    // new order -> old order
    Mat pout = reg_permutation(out_, new_out); // old order -> new order
    std::vector<Mat> ks;
    ks.reserve(kraus_.size());
    for (const auto& k : kraus_) ks.push_back(pout * k * pin);
    return SuperOp(new_in, new_out, std::move(ks));
  }

  // Drops negligible Kraus operators and, when the list has grown past the
  // Choi rank bound, rebuilds a minimal set from the Choi eigensystem.
  SuperOp canonicalized() const;

 private:
  void validate_shapes() {
    if (kraus_.empty()) fail(ErrorKind::BadInput, "empty Kraus list");
    const std::int64_t di = in_dim(), dout = out_dim();
    for (const auto& k : kraus_)
      if (k.rows() != dout || k.cols() != di)
        fail(ErrorKind::DimensionMismatch, "Kraus operator shape mismatch");
  }

  Regs in_, out_;
  std::vector<Mat> kraus_;
};

// Choi matrix sum_{ij} |i><j| (x) E(|i><j|), indexed (input, output) with
// input varying slowest. Built as a sum of vectorized-Kraus outer products.
inline Mat choi(const SuperOp& e) {
  const std::int64_t di = e.in_dim(), dout = e.out_dim();
  Mat c = Mat::Zero(di * dout, di * dout);
  Vec v(di * dout);
  for (const auto& k : e.kraus()) {
    for (std::int64_t i = 0; i < di; ++i)
      for (std::int64_t a = 0; a < dout; ++a) v(i * dout + a) = k(a, i);
    c.noalias() += v * v.adjoint();
  }
  return c;
}

inline SuperOp SuperOp::canonicalized() const {
  std::vector<Mat> kept;
  for (const auto& k : kraus_)
    if (k.norm() > 1e-14) kept.push_back(k);
  if (kept.empty())
    return SuperOp(in_, out_, {Mat::Zero(out_dim(), in_dim())});
  const std::int64_t bound = in_dim() * out_dim();
  if (static_cast<std::int64_t>(kept.size()) <= bound)
    return SuperOp(in_, out_, std::move(kept));

  Mat c = choi(SuperOp(in_, out_, std::move(kept)));
  Eigen::SelfAdjointEigenSolver<Mat> es(c);
  std::vector<Mat> ks;
  const std::int64_t di = in_dim(), dout = out_dim();
  for (Eigen::Index idx = 0; idx < es.eigenvalues().size(); ++idx) {
    const double lam = es.eigenvalues()(idx);
    if (lam <= 1e-13) continue;
    Mat k(dout, di);
    const auto& v = es.eigenvectors().col(idx);
    for (std::int64_t i = 0; i < di; ++i)
      for (std::int64_t a = 0; a < dout; ++a)
        k(a, i) = std::sqrt(lam) * v(i * dout + a);
    ks.push_back(std::move(k));
  }
  if (ks.empty()) ks.push_back(Mat::Zero(dout, di));
  return SuperOp(in_, out_, std::move(ks));
}

// Applies e to rho with an implicit identity on registers of rho that e does
// not touch. For square channels the result keeps rho's register order.
inline ComplexMatrix apply(const SuperOp& e, const ComplexMatrix& rho) {
  for (const auto& r : e.in_vars())
    if (!contains_reg(rho.vars(), r.name))
      fail(ErrorKind::UnknownVariable,
           "operation acts on register " + r.name + " absent from state");
  if (e.square()) {
    Mat acc = Mat::Zero(rho.dim(), rho.dim());
    for (const auto& k : e.kraus()) {
      Mat ke = embed(ComplexMatrix(e.in_vars(), k), rho.vars()).entries();
      acc.noalias() += ke * rho.entries() * ke.adjoint();
    }
    return ComplexMatrix(rho.vars(), std::move(acc));
  }
  Regs spectators;
  for (const auto& r : rho.vars())
    if (!contains_reg(e.in_vars(), r.name)) spectators.push_back(r);
  SuperOp padded = e.padded(spectators);
  SuperOp aligned = padded.reordered(rho.vars(), padded.out_vars());
  Mat acc = Mat::Zero(aligned.out_dim(), aligned.out_dim());
  for (const auto& k : aligned.kraus())
    acc.noalias() += k * rho.entries() * k.adjoint();
  return ComplexMatrix(aligned.out_vars(), std::move(acc));
}

// Schroedinger-Heisenberg dual: Kraus adjoints, input and output swapped.
inline SuperOp dual(const SuperOp& e) {
  std::vector<Mat> ks;
  ks.reserve(e.kraus().size());
  for (const auto& k : e.kraus()) ks.push_back(k.adjoint());
  return SuperOp(e.out_vars(), e.in_vars(), std::move(ks));
}

// compose(e, f) = f after e. Register sets are aligned automatically; any
// register only one side touches gets an identity spectator on the other.
inline SuperOp compose(const SuperOp& e, const SuperOp& f) {
  Regs mid = e.out_vars();
  for (const auto& r : f.in_vars())
    if (!contains_reg(mid, r.name)) mid.push_back(r);
  Regs extra_e, extra_f;
  for (const auto& r : mid) {
    if (!contains_reg(e.out_vars(), r.name)) extra_e.push_back(r);
    if (!contains_reg(f.in_vars(), r.name)) extra_f.push_back(r);
  }
  SuperOp ee = e.padded(extra_e);
  SuperOp ff = f.padded(extra_f);
  ff = ff.reordered(mid, ff.out_vars());
  ee = ee.reordered(ee.in_vars(), mid);
  std::vector<Mat> ks;
  ks.reserve(ee.kraus().size() * ff.kraus().size());
  for (const auto& kf : ff.kraus())
    for (const auto& ke : ee.kraus()) ks.push_back(kf * ke);
  return SuperOp(ee.in_vars(), ff.out_vars(), std::move(ks)).canonicalized();
}

// Kraus-list concatenation. The trace-non-increasing check can be skipped
// for intermediate sums whose bound is established jointly elsewhere.
inline SuperOp add(const SuperOp& e, const SuperOp& f, bool check = true,
                   const Tolerances& tol = {}) {
  if (!(e.in_vars() == f.in_vars()) || !(e.out_vars() == f.out_vars()))
    fail(ErrorKind::DimensionMismatch,
         "cannot add operations on different registers");
  std::vector<Mat> ks = e.kraus();
  ks.insert(ks.end(), f.kraus().begin(), f.kraus().end());
  SuperOp sum(e.in_vars(), f.out_vars(), std::move(ks));
  sum = sum.canonicalized();
  if (check && !sum.trace_nonincreasing(tol))
    fail(ErrorKind::NotTraceNonIncreasing, "sum of operations exceeds identity");
  return sum;
}

inline SuperOp scale(double lambda, const SuperOp& e) {
  if (lambda < 0) fail(ErrorKind::BadInput, "negative scale factor");
  std::vector<Mat> ks;
  ks.reserve(e.kraus().size());
  const double s = std::sqrt(lambda);
  for (const auto& k : e.kraus()) ks.push_back(s * k);
  return SuperOp(e.in_vars(), e.out_vars(), std::move(ks));
}

inline SuperOp tensor_op(const SuperOp& e, const SuperOp& f) {
  for (const auto& r : f.in_vars())
    if (contains_reg(e.in_vars(), r.name))
      fail(ErrorKind::VariableClash, "register " + r.name + " on both sides");
  Regs in = e.in_vars(), out = e.out_vars();
  in.insert(in.end(), f.in_vars().begin(), f.in_vars().end());
  out.insert(out.end(), f.out_vars().begin(), f.out_vars().end());
  std::vector<Mat> ks;
  for (const auto& a : e.kraus())
    for (const auto& b : f.kraus()) {
      Mat k(a.rows() * b.rows(), a.cols() * b.cols());
      for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j)
          k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
              a(i, j) * b;
      ks.push_back(std::move(k));
    }
  return SuperOp(std::move(in), std::move(out), std::move(ks));
}

inline double choi_distance(const SuperOp& e, const SuperOp& f) {
  return (choi(e) - choi(f)).norm();
}

inline bool choi_equal(const SuperOp& e, const SuperOp& f, double tol) {
  if (!(e.in_vars() == f.in_vars()) || !(e.out_vars() == f.out_vars()))
    return false;
  return (choi(e) - choi(f)).cwiseAbs().maxCoeff() <= tol;
}

// e below f in the superoperator order iff f - e is completely positive,
// decided by positivity of the Choi-matrix difference.
inline bool qop_leq(const SuperOp& e, const SuperOp& f,
                    const Tolerances& tol = {}) {
  if (!(e.in_vars() == f.in_vars()) || !(e.out_vars() == f.out_vars()))
    fail(ErrorKind::DimensionMismatch,
         "order comparison needs matching registers");
  Mat diff = choi(f) - choi(e);
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.tol_psd;
}

struct LubResult {
  SuperOp value;
  std::int64_t iterations = 0;
};

// Least upper bound of a non-decreasing operation sequence, detected by
// stabilization of consecutive Choi matrices in Frobenius norm.
inline LubResult lub_sequence(const std::function<SuperOp(std::int64_t)>& gen,
                              double tol, std::int64_t max_iter,
                              const Tolerances& tols = {},
                              std::int64_t monotone_checks = 3) {
  SuperOp prev = gen(0);
  for (std::int64_t n = 1; n <= max_iter; ++n) {
    SuperOp cur = gen(n);
    if (n <= monotone_checks && !qop_leq(prev, cur, tols))
      fail(ErrorKind::NotMonotone,
           "sequence is not non-decreasing at index " + std::to_string(n - 1));
    if (choi_distance(prev, cur) < tol) return {cur, n};
    prev = std::move(cur);
  }
  fail(ErrorKind::NotConverged,
       "no fixed point after " + std::to_string(max_iter) + " iterations");
}

}  // namespace qrv

#endif  // QRV_SUPEROP_HPP

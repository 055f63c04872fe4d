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

#ifndef QRV_MATRIX_HPP
#define QRV_MATRIX_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrv/error.hpp"

namespace qrv {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// A named register together with the dimension of its state space.
struct Reg {
  std::string name;
  std::int64_t dim = 2;

  friend bool operator==(const Reg& a, const Reg& b) {
    return a.name == b.name && a.dim == b.dim;
  }
};

using Regs = std::vector<Reg>;

inline std::int64_t total_dim(const Regs& regs) {
  std::int64_t d = 1;
  for (const auto& r : regs) d *= r.dim;
  return d;
}

inline bool contains_reg(const Regs& regs, const std::string& name) {
  return std::any_of(regs.begin(), regs.end(),
                     [&](const Reg& r) { return r.name == name; });
}

inline std::string regs_to_string(const Regs& regs) {
  std::string s = "(";
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (i) s += ",";
    s += regs[i].name;
  }
  return s + ")";
}

// Decodes/encodes composite indices over an ordered register list. The first
// register varies slowest, matching the Kronecker product convention.
struct IndexCodec {
  std::vector<std::int64_t> dims;
  std::vector<std::int64_t> strides;

  explicit IndexCodec(const Regs& regs) {
    dims.reserve(regs.size());
    for (const auto& r : regs) dims.push_back(r.dim);
    strides.assign(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;)
      strides[i - 1] = strides[i] * dims[i];
  }

  std::int64_t encode(const std::vector<std::int64_t>& tuple) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) idx += tuple[i] * strides[i];
    return idx;
  }

  void decode(std::int64_t idx, std::vector<std::int64_t>& tuple) const {
    tuple.resize(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      tuple[i] = idx / strides[i];
      idx %= strides[i];
    }
  }
};

// Dense square matrix over the joint space of an ordered register list.
// Values are immutable after construction; all operations return new values.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(Regs vars, Mat entries)
      : vars_(std::move(vars)), entries_(std::move(entries)) {
    const std::int64_t d = total_dim(vars_);
    if (entries_.rows() != d || entries_.cols() != d)
      fail(ErrorKind::DimensionMismatch,
           "matrix is " + std::to_string(entries_.rows()) + "x" +
               std::to_string(entries_.cols()) + " but registers " +
               regs_to_string(vars_) + " span dimension " + std::to_string(d));
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = i + 1; j < vars_.size(); ++j)
        if (vars_[i].name == vars_[j].name)
          fail(ErrorKind::VariableClash, "duplicate register " + vars_[i].name);
  }

  static ComplexMatrix zero(const Regs& vars) {
    const std::int64_t d = total_dim(vars);
    return ComplexMatrix(vars, Mat::Zero(d, d));
  }

  static ComplexMatrix identity(const Regs& vars) {
    const std::int64_t d = total_dim(vars);
    return ComplexMatrix(vars, Mat::Identity(d, d));
  }

  // |i><j| over the joint space of vars.
  static ComplexMatrix ket_bra(const Regs& vars, std::int64_t i, std::int64_t j) {
    const std::int64_t d = total_dim(vars);
    Mat m = Mat::Zero(d, d);
    m(i, j) = cd(1, 0);
    return ComplexMatrix(vars, std::move(m));
  }

  const Regs& vars() const { return vars_; }
  const Mat& entries() const { return entries_; }
  std::int64_t dim() const { return entries_.rows(); }

  cd trace() const { return entries_.trace(); }

  ComplexMatrix adjoint() const {
    return ComplexMatrix(vars_, entries_.adjoint());
  }

  ComplexMatrix scaled(cd factor) const {
    return ComplexMatrix(vars_, factor * entries_);
  }

  ComplexMatrix plus(const ComplexMatrix& other) const {
    require_same_vars(other);
    return ComplexMatrix(vars_, entries_ + other.entries_);
  }

  ComplexMatrix minus(const ComplexMatrix& other) const {
    require_same_vars(other);
    return ComplexMatrix(vars_, entries_ - other.entries_);
  }

  ComplexMatrix times(const ComplexMatrix& other) const {
    require_same_vars(other);
    return ComplexMatrix(vars_, entries_ * other.entries_);
  }

  // Renames registers positionally; dimensions must agree.
  ComplexMatrix with_vars(const Regs& vars) const {
    if (total_dim(vars) != dim())
      fail(ErrorKind::DimensionMismatch,
           "cannot rebind matrix of dimension " + std::to_string(dim()) +
               " to registers " + regs_to_string(vars));
    return ComplexMatrix(vars, entries_);
  }

  void require_same_vars(const ComplexMatrix& other) const {
    if (!(vars_ == other.vars_))
      fail(ErrorKind::DimensionMismatch,
           "register mismatch: " + regs_to_string(vars_) + " vs " +
               regs_to_string(other.vars_));
  }

 private:
  Regs vars_;
  Mat entries_;
};

inline double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::DimensionMismatch, "shape mismatch in comparison");
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_vars(b);
  return max_abs_diff(a.entries(), b.entries());
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                         double tol) {
  return max_abs_diff(a, b) <= tol;
}

inline bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Kronecker product; vars concatenated in order.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (const auto& r : b.vars())
    if (contains_reg(a.vars(), r.name))
      fail(ErrorKind::VariableClash, "register " + r.name + " on both sides");
  Regs vars = a.vars();
  vars.insert(vars.end(), b.vars().begin(), b.vars().end());
  const std::int64_t da = a.dim(), db = b.dim();
  Mat out(da * db, da * db);
  for (std::int64_t i = 0; i < da; ++i)
    for (std::int64_t j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
  return ComplexMatrix(std::move(vars), std::move(out));
}

// Traces out the named registers; remaining registers keep their order.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho,
                                   const std::vector<std::string>& traced) {
  for (const auto& name : traced)
    if (!contains_reg(rho.vars(), name))
      fail(ErrorKind::UnknownVariable, "no register " + name + " in state");
  if (traced.empty()) return rho;

  Regs kept;
  std::vector<std::size_t> kept_pos, traced_pos;
  for (std::size_t i = 0; i < rho.vars().size(); ++i) {
    const auto& r = rho.vars()[i];
    if (std::find(traced.begin(), traced.end(), r.name) != traced.end()) {
      traced_pos.push_back(i);
    } else {
      kept.push_back(r);
      kept_pos.push_back(i);
    }
  }

  IndexCodec full(rho.vars());
  IndexCodec out_codec(kept);
  Regs traced_regs;
  for (auto p : traced_pos) traced_regs.push_back(rho.vars()[p]);
  IndexCodec tr_codec(traced_regs);

  const std::int64_t dout = total_dim(kept);
  const std::int64_t dtr = total_dim(traced_regs);
  Mat out = Mat::Zero(dout, dout);
  std::vector<std::int64_t> ti, oi, oj, fi, fj;
  for (std::int64_t i = 0; i < dout; ++i) {
    out_codec.decode(i, oi);
    for (std::int64_t j = 0; j < dout; ++j) {
      out_codec.decode(j, oj);
      cd acc(0, 0);
      for (std::int64_t t = 0; t < dtr; ++t) {
        tr_codec.decode(t, ti);
        fi.assign(rho.vars().size(), 0);
        fj.assign(rho.vars().size(), 0);
        for (std::size_t k = 0; k < kept_pos.size(); ++k) {
          fi[kept_pos[k]] = oi[k];
          fj[kept_pos[k]] = oj[k];
        }
        for (std::size_t k = 0; k < traced_pos.size(); ++k) {
          fi[traced_pos[k]] = ti[k];
          fj[traced_pos[k]] = ti[k];
        }
        acc += rho.entries()(full.encode(fi), full.encode(fj));
      }
      out(i, j) = acc;
    }
  }
  return ComplexMatrix(std::move(kept), std::move(out));
}

// Expands a matrix to a larger register context (identity on the extras) and
// reorders it to match the context order. Every register of m must appear in
// ctx with the same dimension.
inline ComplexMatrix embed(const ComplexMatrix& m, const Regs& ctx) {
  if (m.vars() == ctx) return m;
  std::vector<std::int64_t> pos_in_m(ctx.size(), -1);
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t k = 0; k < m.vars().size(); ++k) {
      if (m.vars()[k].name == ctx[i].name) {
        if (m.vars()[k].dim != ctx[i].dim)
          fail(ErrorKind::DimensionMismatch,
               "register " + ctx[i].name + " has dimension " +
                   std::to_string(m.vars()[k].dim) + " here, " +
                   std::to_string(ctx[i].dim) + " in context");
        pos_in_m[i] = static_cast<std::int64_t>(k);
      }
    }
  }
  std::size_t found = 0;
  for (auto p : pos_in_m)
    if (p >= 0) ++found;
  if (found != m.vars().size())
    fail(ErrorKind::UnknownVariable,
         "context " + regs_to_string(ctx) + " does not cover " +
             regs_to_string(m.vars()));

  IndexCodec ctx_codec(ctx);
  IndexCodec m_codec(m.vars());
  const std::int64_t d = total_dim(ctx);
  Mat out = Mat::Zero(d, d);
  std::vector<std::int64_t> ci, cj, mi, mj;
  for (std::int64_t i = 0; i < d; ++i) {
    ctx_codec.decode(i, ci);
    for (std::int64_t j = 0; j < d; ++j) {
      ctx_codec.decode(j, cj);
      bool delta = true;
      mi.assign(m.vars().size(), 0);
      mj.assign(m.vars().size(), 0);
      for (std::size_t k = 0; k < ctx.size(); ++k) {
        if (pos_in_m[k] >= 0) {
          mi[pos_in_m[k]] = ci[k];
          mj[pos_in_m[k]] = cj[k];
        } else if (ci[k] != cj[k]) {
          delta = false;
          break;
        }
      }
      if (delta) out(i, j) = m.entries()(m_codec.encode(mi), m_codec.encode(mj));
    }
  }
  return ComplexMatrix(ctx, std::move(out));
}

inline double min_eigenvalue(const ComplexMatrix& h, double herm_tol) {
  if (!is_hermitian(h.entries(), herm_tol))
    fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.entries(),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
inline std::vector<std::pair<double, Vec>> spectral_decompose(
    const ComplexMatrix& h, const Tolerances& tol = {}) {
  if (!is_hermitian(h.entries(), tol.tol_eq))
    fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.entries());
  std::vector<std::pair<double, Vec>> out;
  const auto& vals = es.eigenvalues();
  for (Eigen::Index k = vals.size(); k-- > 0;)
    out.emplace_back(vals(k), es.eigenvectors().col(k));
  return out;
}

// a is below b in the Loewner order iff b - a is PSD up to tol_psd slack.
inline bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b,
                        const Tolerances& tol = {}, double slack = 0.0) {
  a.require_same_vars(b);
  ComplexMatrix diff = b.minus(a);
  return min_eigenvalue(diff, 10 * tol.tol_eq + slack) >=
         -(tol.tol_psd + slack);
}

inline bool is_psd(const ComplexMatrix& a, const Tolerances& tol = {}) {
  if (!is_hermitian(a.entries(), tol.tol_eq)) return false;
  return min_eigenvalue(a, tol.tol_eq) >= -tol.tol_psd;
}

// Partial density operator: PSD with trace in [0, 1].
inline bool is_pdop(const ComplexMatrix& rho, const Tolerances& tol = {}) {
  if (!is_psd(rho, tol)) return false;
  const double tr = rho.trace().real();
  return tr >= -tol.tol_eq && tr <= 1.0 + tol.tol_eq;
}

// Quantum predicate: 0 <= M <= I.
inline bool is_qpred(const ComplexMatrix& m, const Tolerances& tol = {}) {
  if (!is_hermitian(m.entries(), tol.tol_eq)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(m.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.tol_psd &&
         es.eigenvalues().maxCoeff() <= 1.0 + tol.tol_psd;
}

}  // namespace qrv

#endif  // QRV_MATRIX_HPP

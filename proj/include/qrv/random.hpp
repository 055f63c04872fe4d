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

#ifndef QRV_RANDOM_HPP
#define QRV_RANDOM_HPP

#include <random>

#include "qrv/matrix.hpp"
#include "qrv/superop.hpp"

namespace qrv {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 42) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  double gaussian() { return std::normal_distribution<double>(0, 1)(engine_); }

  Mat gaussian_matrix(std::int64_t rows, std::int64_t cols) {
    Mat m(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i)
      for (std::int64_t j = 0; j < cols; ++j)
        m(i, j) = cd(gaussian(), gaussian());
    return m;
  }

  // Haar-ish unitary from the QR factorization of a Gaussian matrix.
  Mat unitary(std::int64_t dim) {
    Mat g = gaussian_matrix(dim, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::int64_t i = 0; i < dim; ++i) {
      cd d = r(i, i);
      q.col(i) *= (std::abs(d) > 1e-12) ? d / std::abs(d) : cd(1, 0);
    }
    return q;
  }

  // Random quantum predicate: PSD normalized into [0, I].
  Mat qpred(std::int64_t dim) {
    Mat g = gaussian_matrix(dim, dim);
    Mat a = g.adjoint() * g;
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return (top > 1e-12) ? Mat(a / top) : Mat(Mat::Zero(dim, dim));
  }

  // Random partial density operator with the given trace.
  Mat pdop(std::int64_t dim, double trace = 1.0) {
    Mat g = gaussian_matrix(dim, dim);
    Mat a = g.adjoint() * g;
    return trace * a / a.trace().real();
  }

  // Random trace-non-increasing operation with `n` Kraus operators whose
  // gram sum equals weight * I.
  SuperOp superop(const Regs& vars, std::int64_t n, double weight = 1.0) {
    const std::int64_t d = total_dim(vars);
    std::vector<Mat> ks;
    for (std::int64_t i = 0; i < n; ++i) ks.push_back(gaussian_matrix(d, d));
    Mat gram = Mat::Zero(d, d);
    for (const auto& k : ks) gram += k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    Mat inv_sqrt = es.operatorInverseSqrt();
    for (auto& k : ks) k = std::sqrt(weight) * k * inv_sqrt;
    return SuperOp(vars, std::move(ks));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qrv

#endif  // QRV_RANDOM_HPP

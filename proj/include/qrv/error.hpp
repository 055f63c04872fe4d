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

#ifndef QRV_ERROR_HPP
#define QRV_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrv {

enum class ErrorKind {
  VariableClash,
  UnknownVariable,
  NotHermitian,
  DimensionMismatch,
  NotTraceNonIncreasing,
  NotConverged,
  NotMonotone,
  SyntaxError,
  NonUnitary,
  IncompleteMeasurement,
  MissingArm,
  ArityMismatch,
  TypeMismatch,
  UnknownName,
  FreshExhausted,
  IllTyped,
  MissingAssignment,
  SideConditionViolated,
  IllegitimateFormula,
  UnboundParam,
  RuleMismatch,
  UndischargedAssumption,
  UnknownSideCondition,
  BadInput,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::VariableClash: return "VariableClash";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotTraceNonIncreasing: return "NotTraceNonIncreasing";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::IncompleteMeasurement: return "IncompleteMeasurement";
    case ErrorKind::MissingArm: return "MissingArm";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::FreshExhausted: return "FreshExhausted";
    case ErrorKind::IllTyped: return "IllTyped";
    case ErrorKind::MissingAssignment: return "MissingAssignment";
    case ErrorKind::SideConditionViolated: return "SideConditionViolated";
    case ErrorKind::IllegitimateFormula: return "IllegitimateFormula";
    case ErrorKind::UnboundParam: return "UnboundParam";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::UndischargedAssumption: return "UndischargedAssumption";
    case ErrorKind::UnknownSideCondition: return "UnknownSideCondition";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Numeric policy. Elementwise comparisons use tol_eq, positive-semidefinite
// slack uses tol_psd, and fixed-point iterations converge when consecutive
// Choi matrices are within fix_tol in Frobenius norm. Converged limits sit
// below the true least upper bound by roughly one fix_tol, so comparisons
// against computed limits get limit_slack.
struct Tolerances {
  double tol_eq = 1e-9;
  double tol_psd = 1e-9;
  double fix_tol = 1e-8;
  std::int64_t max_iter = 10000;
  double limit_slack() const { return 2.0 * fix_tol; }
};

}  // namespace qrv

#endif  // QRV_ERROR_HPP

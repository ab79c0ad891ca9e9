// Copyright 2026 The sparsedict Authors.
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

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sparsedict/errors.hpp"

namespace sparsedict {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-stacked training signals: n rows (signal dimension) by N columns.
class TrainingMatrix {
 public:
  explicit TrainingMatrix(Matrix data);

  const Matrix& matrix() const noexcept { return data_; }
  Eigen::Index dim() const noexcept { return data_.rows(); }
  Eigen::Index count() const noexcept { return data_.cols(); }

 private:
  Matrix data_;
};

// Constraint regimes for the dictionary (and, for the non-negative ones, the
// codes as well).

/// ||A||_F^2 <= beta.
struct TotalNorm {
  double beta;
};
/// ||a_i||_2^2 <= betas[i] for every atom.
struct PerAtomNorm {
  std::vector<double> betas;
};
/// A >= 0, X >= 0, ||A||_F^2 <= beta.
struct NonnegTotalNorm {
  double beta;
};
/// A >= 0, X >= 0, ||a_i||_1 <= theta for every atom.
struct NonnegL1Atom {
  double theta;
};

using ConstraintRegime =
    std::variant<TotalNorm, PerAtomNorm, NonnegTotalNorm, NonnegL1Atom>;

/// Throws InvalidArgument unless every bound is strictly positive and finite.
void validate_regime(const ConstraintRegime& regime);
/// True for the regimes that also force X >= 0.
bool codes_nonnegative(const ConstraintRegime& regime);
std::string regime_name(const ConstraintRegime& regime);

/// Atom matrix (n x k) tagged with the constraint set it is meant to satisfy.
class Dictionary {
 public:
  Dictionary(Matrix atoms, ConstraintRegime regime);

  const Matrix& atoms() const noexcept { return atoms_; }
  const ConstraintRegime& regime() const noexcept { return regime_; }
  Eigen::Index dim() const noexcept { return atoms_.rows(); }
  Eigen::Index size() const noexcept { return atoms_.cols(); }

 private:
  Matrix atoms_;
  ConstraintRegime regime_;
};

/// Sparse-representation coefficients, k rows by N columns. Sparsity is
/// numerical (exact zeros); storage is dense.
class CodeMatrix {
 public:
  explicit CodeMatrix(Matrix codes);

  const Matrix& matrix() const noexcept { return codes_; }

 private:
  Matrix codes_;
};

struct SolverConfig {
  int max_iters = 20000;
  /// Stop once |f_r - f_{r+1}| <= rel_obj_tol * max(1, |f_r|) ...
  double rel_obj_tol = 1e-8;
  /// ... and the stationarity residual is at most this value.
  double stationarity_tol = 1e-5;
  double tau_floor = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class StopReason { Converged, MaxIters, Interrupted };

std::string to_string(StopReason reason);

struct SolverTrace {
  std::vector<double> objective_history;
  std::vector<double> tau_a_history;
  std::vector<double> tau_x_history;
  int iterations = 0;
  StopReason stop_reason = StopReason::MaxIters;
};

/// The objective became non-finite. Carries the trace up to that point.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, SolverTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const noexcept { return trace_; }

 private:
  SolverTrace trace_;
};

bool all_finite(const Matrix& m);

}  // namespace sparsedict

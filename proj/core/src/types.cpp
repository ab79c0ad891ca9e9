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

#include "sparsedict/types.hpp"

#include <cmath>

namespace sparsedict {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

bool all_finite(const Matrix& m) { return m.array().isFinite().all(); }

TrainingMatrix::TrainingMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw DimensionError("training matrix must have at least one row and column");
  }
  if (!all_finite(data_)) {
    throw InvalidArgument("training matrix contains non-finite entries");
  }
}

void validate_regime(const ConstraintRegime& regime) {
  std::visit(overloaded{
                 [](const TotalNorm& r) {
                   if (!positive(r.beta)) throw InvalidArgument("TotalNorm beta must be > 0");
                 },
                 [](const PerAtomNorm& r) {
                   if (r.betas.empty()) throw InvalidArgument("PerAtomNorm needs at least one bound");
                   for (double b : r.betas) {
                     if (!positive(b)) throw InvalidArgument("PerAtomNorm bounds must be > 0");
                   }
                 },
                 [](const NonnegTotalNorm& r) {
                   if (!positive(r.beta)) throw InvalidArgument("NonnegTotalNorm beta must be > 0");
                 },
                 [](const NonnegL1Atom& r) {
                   if (!positive(r.theta)) throw InvalidArgument("NonnegL1Atom theta must be > 0");
                 },
             },
             regime);
}

bool codes_nonnegative(const ConstraintRegime& regime) {
  return std::holds_alternative<NonnegTotalNorm>(regime) ||
         std::holds_alternative<NonnegL1Atom>(regime);
}

std::string regime_name(const ConstraintRegime& regime) {
  return std::visit(overloaded{
                        [](const TotalNorm&) { return std::string("total-norm"); },
                        [](const PerAtomNorm&) { return std::string("per-atom-norm"); },
                        [](const NonnegTotalNorm&) { return std::string("nonneg-total-norm"); },
                        [](const NonnegL1Atom&) { return std::string("nonneg-l1-atom"); },
                    },
                    regime);
}

Dictionary::Dictionary(Matrix atoms, ConstraintRegime regime)
    : atoms_(std::move(atoms)), regime_(std::move(regime)) {
  if (atoms_.cols() < 1) throw DimensionError("dictionary needs at least one atom");
  if (!all_finite(atoms_)) throw InvalidArgument("dictionary contains non-finite entries");
  validate_regime(regime_);
  if (const auto* per = std::get_if<PerAtomNorm>(&regime_);
      per && static_cast<Eigen::Index>(per->betas.size()) != atoms_.cols()) {
    throw DimensionError("PerAtomNorm bound count does not match atom count");
  }
}

CodeMatrix::CodeMatrix(Matrix codes) : codes_(std::move(codes)) {
  if (!all_finite(codes_)) throw InvalidArgument("code matrix contains non-finite entries");
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(rel_obj_tol > 0.0)) throw InvalidArgument("rel_obj_tol must be > 0");
  if (!(stationarity_tol > 0.0)) throw InvalidArgument("stationarity_tol must be > 0");
  if (!(tau_floor > 0.0)) throw InvalidArgument("tau_floor must be > 0");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Interrupted: return "interrupted";
  }
  return "unknown";
}

}  // namespace sparsedict

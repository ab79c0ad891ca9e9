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

#include "sparsedict/bsum.hpp"

#include <cmath>
#include <sstream>

#include "sparsedict/objective.hpp"
#include "sparsedict/rng.hpp"

namespace sparsedict::bsum {

namespace {

constexpr double kTauSafety = 1.0 + 1e-6;

void validate_problem(const BsumProblem& p) {
  p.config.validate();
  validate_regime(p.regime);
  if (p.k < 1) throw InvalidArgument("k must be >= 1");
  if (p.k > p.max_atoms) {
    std::ostringstream os;
    os << "k = " << p.k << " exceeds the atom limit " << p.max_atoms;
    throw InvalidArgument(os.str());
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  if (const auto* per = std::get_if<PerAtomNorm>(&p.regime);
      per && static_cast<int>(per->betas.size()) != p.k) {
    throw DimensionError("PerAtomNorm needs one bound per atom");
  }
  if (p.initial_dictionary &&
      (p.initial_dictionary->rows() != p.Y.dim() || p.initial_dictionary->cols() != p.k)) {
    throw DimensionError("initial dictionary shape does not match (n, k)");
  }
}

Matrix initial_dictionary(const BsumProblem& p) {
  Matrix A;
  if (p.initial_dictionary) {
    A = *p.initial_dictionary;
  } else {
    auto rng = SeedTree(p.config.seed).engine("bsum/init-dictionary");
    A = gaussian_matrix(p.Y.dim(), p.k, rng);
  }
  return proxops::project_dictionary(A, p.regime, p.bisection);
}

BsumResult run(const BsumProblem& p, DictionaryStep dict_step) {
  validate_problem(p);
  const Matrix& Y = p.Y.matrix();
  const bool nonneg = codes_nonnegative(p.regime);
  const double floor = p.config.tau_floor;

  Matrix A = initial_dictionary(p);
  Matrix X = Matrix::Zero(p.k, Y.cols());
  SolverTrace trace;
  double f = objective(Y, A, X, p.lambda);
  trace.objective_history.push_back(f);

  for (int r = 1; r <= p.config.max_iters; ++r) {
    Matrix A_prev = A;
    Matrix X_prev = X;

    const double tau_x = step_constant(A, floor);
    X = x_step(Y, A, X, p.lambda, tau_x, nonneg);

    const double tau_a = step_constant(X, floor);
    if (dict_step == DictionaryStep::ExactRidge) {
      A = proxops::ridge_dictionary_update(Y, X, std::get<TotalNorm>(p.regime).beta, p.bisection,
                                           floor)
              .A;
    } else {
      A = a_step(Y, A, X, tau_a, p.regime, p.bisection);
    }

    const double f_new = objective(Y, A, X, p.lambda);
    trace.tau_x_history.push_back(tau_x);
    trace.tau_a_history.push_back(tau_a);
    trace.iterations = r;
    if (!std::isfinite(f_new)) {
      throw DivergenceError("objective became non-finite", std::move(trace));
    }
    trace.objective_history.push_back(f_new);

    if (p.on_iteration) {
      const IterationState state{r, Y, A_prev, X_prev, A, X, tau_x, tau_a, f_new, dict_step};
      if (!p.on_iteration(state)) {
        trace.stop_reason = StopReason::Interrupted;
        break;
      }
    }
    if (std::abs(f - f_new) <= p.config.rel_obj_tol * std::max(1.0, std::abs(f)) &&
        stationarity_residual(Y, A, X, p.lambda, p.regime, floor) <= p.config.stationarity_tol) {
      trace.stop_reason = StopReason::Converged;
      break;
    }
    f = f_new;
  }

  const double residual = stationarity_residual(Y, A, X, p.lambda, p.regime, floor);
  return BsumResult{Dictionary(std::move(A), p.regime), CodeMatrix(std::move(X)),
                    std::move(trace), residual};
}

template <class Regime>
void require_regime(const BsumProblem& p, const char* solver) {
  if (!std::holds_alternative<Regime>(p.regime)) {
    std::ostringstream os;
    os << solver << ": unsupported constraint regime " << regime_name(p.regime);
    throw InvalidArgument(os.str());
  }
}

}  // namespace

double step_constant(const Matrix& M, double floor) {
  return std::max(proxops::sigma_max_sq(M) * kTauSafety, floor);
}

Matrix x_step(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda, double tau_x,
              bool nonnegative) {
  Matrix moved = X - grad_X(Y, A, X) / tau_x;
  if (nonnegative) return (moved.array() - lambda / tau_x).cwiseMax(0.0).matrix();
  return proxops::soft_shrink(moved, lambda / tau_x);
}

Matrix a_step(const Matrix& Y, const Matrix& A, const Matrix& X, double tau_a,
              const ConstraintRegime& regime, const proxops::BisectionConfig& cfg) {
  return proxops::project_dictionary(A - grad_A(Y, A, X) / tau_a, regime, cfg);
}

BsumResult solve_case1(const BsumProblem& p) {
  require_regime<TotalNorm>(p, "solve_case1");
  return run(p, p.case1_step);
}

BsumResult solve_case2(const BsumProblem& p) {
  require_regime<PerAtomNorm>(p, "solve_case2");
  return run(p, DictionaryStep::GradientProjection);
}

BsumResult solve_case3(const BsumProblem& p) {
  require_regime<NonnegTotalNorm>(p, "solve_case3");
  return run(p, DictionaryStep::GradientProjection);
}

BsumResult solve_case4(const BsumProblem& p) {
  require_regime<NonnegL1Atom>(p, "solve_case4");
  return run(p, DictionaryStep::GradientProjection);
}

BsumResult solve(const BsumProblem& p) {
  if (std::holds_alternative<TotalNorm>(p.regime)) return solve_case1(p);
  if (std::holds_alternative<PerAtomNorm>(p.regime)) return solve_case2(p);
  if (std::holds_alternative<NonnegTotalNorm>(p.regime)) return solve_case3(p);
  return solve_case4(p);
}

double stationarity_residual(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda,
                             const ConstraintRegime& regime, double tau_x, double tau_a) {
  const Matrix X_map = x_step(Y, A, X, lambda, tau_x, codes_nonnegative(regime));
  const Matrix A_map = a_step(Y, A, X, tau_a, regime);
  const double rx = (X - X_map).norm() / (1.0 + X.norm());
  const double ra = (A - A_map).norm() / (1.0 + A.norm());
  return std::max(rx, ra);
}

double stationarity_residual(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda,
                             const ConstraintRegime& regime, double tau_floor) {
  return stationarity_residual(Y, A, X, lambda, regime, step_constant(A, tau_floor),
                               step_constant(X, tau_floor));
}

double x_majorization_gap(const Matrix& Y, const Matrix& A, const Matrix& X_prev,
                          const Matrix& X_new, double tau_x) {
  const Matrix delta = X_new - X_prev;
  const double bound = smooth_fit(Y, A, X_prev) + grad_X(Y, A, X_prev).cwiseProduct(delta).sum() +
                       0.5 * tau_x * delta.squaredNorm();
  return bound - smooth_fit(Y, A, X_new);
}

double a_majorization_gap(const Matrix& Y, const Matrix& A_prev, const Matrix& A_new,
                          const Matrix& X, double tau_a) {
  const Matrix delta = A_new - A_prev;
  const double bound = smooth_fit(Y, A_prev, X) + grad_A(Y, A_prev, X).cwiseProduct(delta).sum() +
                       0.5 * tau_a * delta.squaredNorm();
  return bound - smooth_fit(Y, A_new, X);
}

}  // namespace sparsedict::bsum

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

#include <cmath>
#include <sstream>

#include "sparsedict/objective.hpp"
#include "sparsedict/rng.hpp"
#include "sparsedict/sca.hpp"

namespace sparsedict::sca {

namespace {

// Squared distance from soft_shrink(B, t) to B.
double shrink_dist_sq(const Matrix& B, double t) {
  return B.array().abs().min(t).square().sum();
}

double l1(const Matrix& X) { return X.cwiseAbs().sum(); }

constexpr double kBootstrapMargin = 1e-3;

}  // namespace

Matrix solve_l1_over_ball(const Matrix& B, double radius_sq, const proxops::BisectionConfig& cfg) {
  cfg.validate();
  if (!(radius_sq >= 0.0) || !std::isfinite(radius_sq)) {
    throw InvalidArgument("radius_sq must be finite and >= 0");
  }
  if (B.squaredNorm() <= radius_sq) return Matrix::Zero(B.rows(), B.cols());

  // The threshold t = 1/mu sits in [0, max|B|); shrink_dist_sq is increasing
  // in t. Keep lo on the feasible side.
  double lo = 0.0;
  double hi = B.cwiseAbs().maxCoeff();
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shrink_dist_sq(B, mid) <= radius_sq ? lo : hi) = mid;
  }
  // Exact finish on the active set {|b| > lo}: sum_small b^2 + n_large t^2 = r^2.
  const auto mag = B.array().abs();
  const double small = (mag <= lo).select(mag.square(), 0.0).sum();
  const double large = (mag > lo).cast<double>().sum();
  double t = lo;
  if (large > 0.0 && radius_sq >= small) {
    const double exact = std::sqrt((radius_sq - small) / large);
    if (exact >= lo && exact <= hi && shrink_dist_sq(B, exact) <= radius_sq) t = exact;
  }
  const double gap = radius_sq - shrink_dist_sq(B, t);
  if (gap > cfg.tol * std::max(1.0, radius_sq)) {
    throw BisectionError("ball constraint not tight after bisection", lo, hi);
  }
  return proxops::soft_shrink(B, t);
}

bsum::BsumResult solve_constrained_fit(const TrainingMatrix& Y, int k, double alpha,
                                       const ConstraintRegime& regime,
                                       const ConstrainedFitConfig& cfg) {
  cfg.solver.validate();
  cfg.bisection.validate();
  validate_regime(regime);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and > 0");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const auto* total = std::get_if<TotalNorm>(&regime);
  if (!total) {
    throw InvalidArgument("solve_constrained_fit: unsupported constraint regime " +
                          regime_name(regime));
  }
  const double beta = total->beta;
  const double floor = cfg.solver.tau_floor;
  const Matrix& Yd = Y.matrix();

  auto rng = SeedTree(cfg.solver.seed).engine("constrained-fit/init-dictionary");
  Matrix A = proxops::project_frobenius_ball(gaussian_matrix(Yd.rows(), k, rng), beta);
  Matrix X = Matrix::Zero(k, Yd.cols());

  if (smooth_fit(Yd, A, X) > alpha) {
    const double target = alpha * (1.0 - kBootstrapMargin);
    bsum::BsumProblem boot{Y, k, 0.0, regime, cfg.solver};
    boot.config.max_iters = cfg.bootstrap_max_iters;
    boot.initial_dictionary = A;
    boot.bisection = cfg.bisection;
    boot.on_iteration = [&](const bsum::IterationState& s) {
      return smooth_fit(s.Y, s.A, s.X) > target;
    };
    auto res = bsum::solve_case1(boot);
    A = res.A.atoms();
    X = res.X.matrix();
    const double achieved = smooth_fit(Yd, A, X);
    if (achieved > alpha) {
      std::ostringstream os;
      os << "no feasible codes found: best fit " << achieved << " exceeds alpha " << alpha;
      throw InfeasibleError(os.str(), achieved);
    }
  }

  SolverTrace trace;
  double cost = l1(X);
  trace.objective_history.push_back(cost);
  if (cfg.on_iteration) cfg.on_iteration(0, A, X);

  for (int r = 1; r <= cfg.solver.max_iters; ++r) {
    const double tau_x = bsum::step_constant(A, floor);
    const Matrix G = grad_X(Yd, A, X);
    const double d1 = smooth_fit(Yd, A, X);
    const Matrix B = X - G / tau_x;
    const double radius_sq =
        std::max(0.0, 2.0 * (alpha - d1) / tau_x + G.squaredNorm() / (tau_x * tau_x));
    Matrix X_new = solve_l1_over_ball(B, radius_sq, cfg.bisection);
    // X is itself feasible for the surrogate, so the minimizer can only lose
    // to it through rounding; keep X in that case.
    if (l1(X_new) > cost || smooth_fit(Yd, A, X_new) > alpha) X_new = X;

    Matrix A_new = proxops::ridge_dictionary_update(Yd, X_new, beta, cfg.bisection, floor).A;
    if (smooth_fit(Yd, A_new, X_new) > smooth_fit(Yd, A, X_new)) A_new = A;

    A = std::move(A_new);
    X = std::move(X_new);
    const double next = l1(X);
    trace.objective_history.push_back(next);
    trace.tau_x_history.push_back(tau_x);
    trace.iterations = r;
    if (cfg.on_iteration) cfg.on_iteration(r, A, X);
    if (std::abs(cost - next) <= cfg.solver.rel_obj_tol * std::max(1.0, cost)) {
      trace.stop_reason = StopReason::Converged;
      cost = next;
      break;
    }
    cost = next;
  }

  // Fixed-point defect of the X map and the ridge A map.
  const double tau_x = bsum::step_constant(A, floor);
  const Matrix G = grad_X(Yd, A, X);
  const double radius_sq = std::max(
      0.0, 2.0 * (alpha - smooth_fit(Yd, A, X)) / tau_x + G.squaredNorm() / (tau_x * tau_x));
  const Matrix X_map = solve_l1_over_ball(X - G / tau_x, radius_sq, cfg.bisection);
  const Matrix A_map = proxops::ridge_dictionary_update(Yd, X, beta, cfg.bisection, floor).A;
  const double residual = std::max((X - X_map).norm() / (1.0 + X.norm()),
                                   (A - A_map).norm() / (1.0 + A.norm()));
  return bsum::BsumResult{Dictionary(std::move(A), regime), CodeMatrix(std::move(X)),
                          std::move(trace), residual};
}

}  // namespace sparsedict::sca

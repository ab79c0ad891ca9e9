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

#include <functional>
#include <span>
#include <vector>

#include "sparsedict/bsum.hpp"
#include "sparsedict/proxops.hpp"
#include "sparsedict/types.hpp"

// Successive convex approximation for
//
//   min h_0(x) = f_0(x) + g_0(x)   s.t.  h_i(x) = f_i(x) + g_i(x) <= 0,  i = 1..m,
//
// with f_i smooth (possibly nonconvex) and g_i convex. Each iteration solves
// the convex problem obtained by replacing every f_i with a surrogate
// f~_i(., x^r) that is a global upper bound, tight in value and gradient at
// x^r, then moves x^{r+1} = gamma x^ + (1 - gamma) x^r.

namespace sparsedict::sca {

struct ScaFunction {
  std::function<double(const Vector&)> smooth;
  std::function<Vector(const Vector&)> smooth_gradient;
  /// Convex part; empty means identically zero.
  std::function<double(const Vector&)> convex;
  /// prox_{t g}(v) = argmin_x g(x) + ||x - v||^2 / (2 t). Required by
  /// families that need it for a nonzero convex part.
  std::function<Vector(const Vector&, double)> convex_prox;

  double value(const Vector& x) const;
  double convex_value(const Vector& x) const { return convex ? convex(x) : 0.0; }
};

struct ScaProblem {
  ScaFunction objective;
  std::vector<ScaFunction> constraints;

  int constraint_count() const { return static_cast<int>(constraints.size()); }
  /// index 0 is the objective, 1..m the constraints.
  const ScaFunction& function(int i) const { return i == 0 ? objective : constraints.at(i - 1); }
  /// max_i h_i(x), or -infinity when m = 0.
  double max_constraint(const Vector& x) const;
};

/// Surrogate builder plus a solver for the resulting convex subproblem.
class ApproximationFamily {
 public:
  virtual ~ApproximationFamily() = default;

  /// f~_i(x, anchor).
  virtual double surrogate(const ScaProblem& p, int i, const Vector& x,
                           const Vector& anchor) const = 0;
  /// Gradient of f~_i(., anchor) at x.
  virtual Vector surrogate_gradient(const ScaProblem& p, int i, const Vector& x,
                                    const Vector& anchor) const = 0;
  /// argmin h~_0(x, anchor) s.t. h~_i(x, anchor) <= 0.
  virtual Vector solve_subproblem(const ScaProblem& p, const Vector& anchor) const = 0;
  /// Smallest value of max_i h~_i(x, anchor) found over x within `probes`
  /// iterations of the family's feasibility search (-infinity when m = 0).
  virtual double min_max_constraint(const ScaProblem& p, const Vector& anchor,
                                    int probes) const = 0;

  double surrogate_total(const ScaProblem& p, int i, const Vector& x, const Vector& anchor) const {
    return surrogate(p, i, x, anchor) + p.function(i).convex_value(x);
  }
};

/// f~_i(x, y) = f_i(y) + <grad f_i(y), x - y> + (L_i / 2) ||x - y||^2. An upper
/// bound whenever L_i bounds the curvature of f_i. Constraints must be smooth
/// (no convex part); the objective's convex part is handled through its prox.
class QuadraticUpperBound final : public ApproximationFamily {
 public:
  /// curvature[0] for the objective, curvature[i] for constraint i; all > 0.
  explicit QuadraticUpperBound(std::vector<double> curvature,
                               proxops::BisectionConfig bisection = {}, int max_passes = 2000);

  double surrogate(const ScaProblem& p, int i, const Vector& x,
                   const Vector& anchor) const override;
  Vector surrogate_gradient(const ScaProblem& p, int i, const Vector& x,
                            const Vector& anchor) const override;
  Vector solve_subproblem(const ScaProblem& p, const Vector& anchor) const override;
  double min_max_constraint(const ScaProblem& p, const Vector& anchor,
                            int probes) const override;

 private:
  void check_shape(const ScaProblem& p) const;

  std::vector<double> curvature_;
  proxops::BisectionConfig bisection_;
  int max_passes_;
};

struct ScaConfig {
  double gamma = 1.0;
  int max_iters = 1000;
  double rel_obj_tol = 1e-12;
  int slater_probe_count = 200;
  /// Allowed constraint violation of x0.
  double feasibility_tol = 1e-10;

  void validate() const;
};

struct ScaResult {
  Vector x;
  SolverTrace trace;
};

/// Throws InfeasibleError when x0 violates a constraint.
ScaResult sca_solve(const ScaProblem& p, const ApproximationFamily& family, const Vector& x0,
                    const ScaConfig& cfg = {});

/// True when a point with h~_i(x, anchor) < -1e-10 for every i was found.
bool check_slater(const ScaProblem& p, const ApproximationFamily& family, const Vector& anchor,
                  const ScaConfig& cfg = {});

/// Sampled check of the surrogate contract: value consistency, gradient
/// consistency (central differences on the surrogate), and the upper bound.
struct SurrogateAudit {
  double max_value_error = 0.0;
  double max_gradient_error = 0.0;
  double min_upper_bound_slack = 0.0;
  int samples = 0;

  bool passed(double value_tol = 1e-10, double gradient_tol = 1e-8,
              double bound_tol = 1e-12) const {
    return max_value_error <= value_tol && max_gradient_error <= gradient_tol &&
           min_upper_bound_slack >= -bound_tol;
  }
};

SurrogateAudit audit_surrogates(const ScaProblem& p, const ApproximationFamily& family,
                                std::span<const Vector> points, double fd_step = 1e-6);

// Constrained goodness of fit:
//
//   min ||X||_1  s.t.  1/2 ||Y - A X||_F^2 <= alpha,  ||A||_F^2 <= beta.
//
// X-steps replace the fit by its quadratic upper bound at the current X, which
// after completing the square reduces to solve_l1_over_ball; A-steps are the
// exact ridge update.

/// argmin ||X||_1 s.t. ||X - B||_F^2 <= radius_sq, i.e. soft_shrink(B, t) with
/// the threshold t found by bisection so the ball constraint is tight (zero
/// when B already lies in the ball).
Matrix solve_l1_over_ball(const Matrix& B, double radius_sq,
                          const proxops::BisectionConfig& cfg = {});

struct ConstrainedFitConfig {
  SolverConfig solver{};
  proxops::BisectionConfig bisection{};
  /// Iteration cap for the lambda = 0 bootstrap that produces a feasible X.
  int bootstrap_max_iters = 20000;
  /// Called after every outer iteration with (iteration, A, X).
  std::function<void(int, const Matrix&, const Matrix&)> on_iteration;
};

/// Only the TotalNorm regime is supported. The trace's objective history
/// holds ||X||_1 per iteration (index 0 is the bootstrap point). Throws
/// InfeasibleError when the bootstrap cannot bring the fit below alpha.
bsum::BsumResult solve_constrained_fit(const TrainingMatrix& Y, int k, double alpha,
                                       const ConstraintRegime& regime,
                                       const ConstrainedFitConfig& cfg = {});

}  // namespace sparsedict::sca

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

#include "sparsedict/sca.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sparsedict::sca {

namespace {

constexpr double kStrictMargin = 1e-10;

// Constraint surrogates of the quadratic family are balls:
// (L/2) ||x - c||^2 - rho <= 0 with c = y - grad/L.
struct Ball {
  Vector center;
  double curvature;
  double rho;

  double value(const Vector& x) const { return 0.5 * curvature * (x - center).squaredNorm() - rho; }
};

}  // namespace

double ScaFunction::value(const Vector& x) const { return smooth(x) + convex_value(x); }

double ScaProblem::max_constraint(const Vector& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) worst = std::max(worst, c.value(x));
  return worst;
}

void ScaConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(rel_obj_tol > 0.0)) throw InvalidArgument("rel_obj_tol must be > 0");
  if (slater_probe_count < 1) throw InvalidArgument("slater_probe_count must be >= 1");
  if (!(feasibility_tol >= 0.0)) throw InvalidArgument("feasibility_tol must be >= 0");
}

QuadraticUpperBound::QuadraticUpperBound(std::vector<double> curvature,
                                         proxops::BisectionConfig bisection, int max_passes)
    : curvature_(std::move(curvature)), bisection_(bisection), max_passes_(max_passes) {
  if (curvature_.empty()) throw InvalidArgument("need a curvature for the objective");
  for (double L : curvature_) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("curvatures must be finite and > 0");
  }
  bisection_.validate();
  if (max_passes_ < 1) throw InvalidArgument("max_passes must be >= 1");
}

void QuadraticUpperBound::check_shape(const ScaProblem& p) const {
  if (static_cast<int>(curvature_.size()) != p.constraint_count() + 1) {
    std::ostringstream os;
    os << "QuadraticUpperBound has " << curvature_.size() << " curvatures for "
       << p.constraint_count() + 1 << " functions";
    throw DimensionError(os.str());
  }
}

double QuadraticUpperBound::surrogate(const ScaProblem& p, int i, const Vector& x,
                                      const Vector& anchor) const {
  check_shape(p);
  const auto& f = p.function(i);
  const Vector d = x - anchor;
  return f.smooth(anchor) + f.smooth_gradient(anchor).dot(d) + 0.5 * curvature_[i] * d.squaredNorm();
}

Vector QuadraticUpperBound::surrogate_gradient(const ScaProblem& p, int i, const Vector& x,
                                               const Vector& anchor) const {
  check_shape(p);
  return p.function(i).smooth_gradient(anchor) + curvature_[i] * (x - anchor);
}

namespace {

std::vector<Ball> constraint_balls(const ScaProblem& p, const std::vector<double>& L,
                                   const Vector& y) {
  std::vector<Ball> balls;
  for (int i = 1; i <= p.constraint_count(); ++i) {
    const auto& f = p.function(i);
    if (f.convex) throw InvalidArgument("QuadraticUpperBound needs smooth constraints");
    const Vector g = f.smooth_gradient(y);
    balls.push_back(Ball{y - g / L[i], L[i], g.squaredNorm() / (2.0 * L[i]) - f.smooth(y)});
  }
  return balls;
}

}  // namespace

Vector QuadraticUpperBound::solve_subproblem(const ScaProblem& p, const Vector& y) const {
  check_shape(p);
  const auto& f0 = p.objective;
  if (f0.convex && !f0.convex_prox) {
    throw InvalidArgument("objective has a convex part but no prox");
  }
  const double L0 = curvature_[0];
  const Vector c0 = y - f0.smooth_gradient(y) / L0;
  const auto balls = constraint_balls(p, curvature_, y);
  for (const auto& b : balls) {
    if (b.rho < 0.0) {
      throw InfeasibleError("surrogate constraint set is empty at this anchor", b.rho);
    }
  }

  // Dual coordinate ascent. For multipliers mu, the Lagrangian minimizer is
  // prox_{g0 / s}(z) with s = L0 + sum mu_i L_i and z the weighted centre;
  // d/dmu_i of the dual is the i-th ball residual, nonincreasing in mu_i.
  std::vector<double> mu(balls.size(), 0.0);
  auto primal = [&](const std::vector<double>& m) {
    double s = L0;
    Vector z = L0 * c0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      s += m[i] * balls[i].curvature;
      z += m[i] * balls[i].curvature * balls[i].center;
    }
    z /= s;
    return f0.convex ? Vector(f0.convex_prox(z, 1.0 / s)) : z;
  };
  if (balls.empty()) return primal(mu);

  auto residual_at = [&](std::size_t i, double value) {
    const double saved = mu[i];
    mu[i] = value;
    const double r = balls[i].value(primal(mu));
    mu[i] = saved;
    return r;
  };

  for (int pass = 0; pass < max_passes_; ++pass) {
    double change = 0.0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      double next = 0.0;
      if (residual_at(i, 0.0) > 0.0) {
        double lo = 0.0;
        double hi = std::max(1.0, mu[i]);
        int grow = 0;
        while (residual_at(i, hi) > 0.0) {
          lo = hi;
          hi *= bisection_.bracket_growth;
          if (++grow > bisection_.max_iters) {
            throw BisectionError("no multiplier satisfies the surrogate constraint", lo, hi);
          }
        }
        for (int it = 0; it < bisection_.max_iters; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          (residual_at(i, mid) > 0.0 ? lo : hi) = mid;
        }
        next = hi;  // feasible side
      }
      change = std::max(change, std::abs(next - mu[i]) / (1.0 + mu[i]));
      mu[i] = next;
    }
    if (change <= bisection_.tol) break;
  }

  Vector x = primal(mu);
  for (const auto& b : balls) {
    const double v = b.value(x);
    if (v > bisection_.tol * std::max(1.0, std::abs(b.rho))) {
      throw InfeasibleError("subproblem solution violates a surrogate constraint", v);
    }
  }
  return x;
}

double QuadraticUpperBound::min_max_constraint(const ScaProblem& p, const Vector& y,
                                               int probes) const {
  check_shape(p);
  const auto balls = constraint_balls(p, curvature_, y);
  if (balls.empty()) return -std::numeric_limits<double>::infinity();

  // min_x max_i q_i(x) = max_{w in simplex} min_x sum_i w_i q_i(x). The inner
  // minimizer is the curvature-weighted centre; the dual is concave and
  // smooth, so Frank-Wolfe over the simplex converges. Every primal candidate
  // gives an upper bound on the optimum.
  const std::size_t m = balls.size();
  auto candidate = [&](const Vector& w) {
    double s = 0.0;
    Vector x = Vector::Zero(y.size());
    for (std::size_t i = 0; i < m; ++i) {
      s += w[i] * balls[i].curvature;
      x += w[i] * balls[i].curvature * balls[i].center;
    }
    return Vector(x / s);
  };
  auto worst = [&](const Vector& x, std::size_t* arg) {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double q = balls[i].value(x);
      if (q > v) {
        v = q;
        if (arg) *arg = i;
      }
    }
    return v;
  };

  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : balls) best = std::min(best, worst(b.center, nullptr));
  best = std::min(best, worst(y, nullptr));

  Vector w = Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m));
  for (int it = 0; it < probes; ++it) {
    const Vector x = candidate(w);
    std::size_t arg = 0;
    best = std::min(best, worst(x, &arg));
    const double step = 2.0 / (it + 3.0);
    w *= (1.0 - step);
    w[static_cast<Eigen::Index>(arg)] += step;
  }
  return best;
}

ScaResult sca_solve(const ScaProblem& p, const ApproximationFamily& family, const Vector& x0,
                    const ScaConfig& cfg) {
  cfg.validate();
  if (!p.objective.smooth || !p.objective.smooth_gradient) {
    throw InvalidArgument("objective needs smooth value and gradient callbacks");
  }
  const double v0 = p.max_constraint(x0);
  if (v0 > cfg.feasibility_tol) throw InfeasibleError("x0 violates a constraint", v0);

  ScaResult out{x0, {}};
  double h = p.objective.value(x0);
  out.trace.objective_history.push_back(h);
  for (int r = 1; r <= cfg.max_iters; ++r) {
    const Vector x_hat = family.solve_subproblem(p, out.x);
    Vector next = cfg.gamma == 1.0 ? x_hat : Vector(cfg.gamma * x_hat + (1.0 - cfg.gamma) * out.x);
    const double h_new = p.objective.value(next);
    if (!std::isfinite(h_new)) {
      throw DivergenceError("objective became non-finite", std::move(out.trace));
    }
    const bool still = (next - out.x).squaredNorm() == 0.0;
    out.x = std::move(next);
    out.trace.objective_history.push_back(h_new);
    out.trace.iterations = r;
    if (still || std::abs(h - h_new) <= cfg.rel_obj_tol * std::max(1.0, std::abs(h))) {
      out.trace.stop_reason = StopReason::Converged;
      break;
    }
    h = h_new;
  }
  return out;
}

bool check_slater(const ScaProblem& p, const ApproximationFamily& family, const Vector& anchor,
                  const ScaConfig& cfg) {
  if (p.constraint_count() == 0) return true;
  try {
    return family.min_max_constraint(p, anchor, cfg.slater_probe_count) < -kStrictMargin;
  } catch (const Error&) {
    return false;
  }
}

SurrogateAudit audit_surrogates(const ScaProblem& p, const ApproximationFamily& family,
                                std::span<const Vector> points, double fd_step) {
  SurrogateAudit audit;
  audit.min_upper_bound_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= p.constraint_count(); ++i) {
    const auto& f = p.function(i);
    for (const auto& x : points) {
      audit.max_value_error =
          std::max(audit.max_value_error, std::abs(family.surrogate(p, i, x, x) - f.smooth(x)));

      const Vector g = f.smooth_gradient(x);
      Vector fd(x.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vector plus = x;
        Vector minus = x;
        plus[j] += fd_step;
        minus[j] -= fd_step;
        fd[j] = (family.surrogate(p, i, plus, x) - family.surrogate(p, i, minus, x)) /
                (2.0 * fd_step);
      }
      const double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
      audit.max_gradient_error =
          std::max({audit.max_gradient_error, (fd - g).lpNorm<Eigen::Infinity>() / scale,
                    (family.surrogate_gradient(p, i, x, x) - g).lpNorm<Eigen::Infinity>() / scale});

      for (const auto& y : points) {
        audit.min_upper_bound_slack =
            std::min(audit.min_upper_bound_slack, family.surrogate(p, i, x, y) - f.smooth(x));
        ++audit.samples;
      }
    }
  }
  return audit;
}

}  // namespace sparsedict::sca

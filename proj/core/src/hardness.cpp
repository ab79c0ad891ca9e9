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

#include "sparsedict/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace sparsedict::hardness {

namespace {

constexpr int kMaxDensestCut = 20;
constexpr int kMaxLeastSquares = 12;
constexpr int kMaxClaims = 10;

void require_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) {
    std::ostringstream os;
    os << what << ": vertex count " << n << " outside [" << lo << ", " << hi << "]";
    throw InvalidArgument(os.str());
  }
}

// Best rank-1 fit of the columns of G: unit u minimizing sum ||g_i - u u^T g_i||^2.
struct Rank1 {
  Vector u;
  double residual;
};

Rank1 best_rank1(const Matrix& G) {
  if (G.cols() == 0 || G.squaredNorm() == 0.0) return {Vector::Zero(G.rows()), 0.0};
  // Start from the top eigenvector of the small Gram matrix, then polish with
  // alternating power steps on G itself so the small rows of G keep their
  // precision next to large ones.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G.transpose() * G);
  Vector v = eig.eigenvectors().col(G.cols() - 1);
  Vector u = G * v;
  u.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 500; ++it) {
    v = G.transpose() * u;
    const double next = v.norm();
    v /= next;
    u = G * v;
    u.normalize();
    const bool done = std::abs(next - sigma) <= 1e-12 * next;
    sigma = next;
    if (done) break;
  }
  const Matrix R = G - u * (u.transpose() * G);
  return {u, R.squaredNorm()};
}

// Sum of squared distances of the columns in the group to their mean.
double group_spread(const Matrix& Y, const std::vector<int>& cols) {
  if (cols.empty() || Y.rows() == 0) return 0.0;
  Vector mean = Vector::Zero(Y.rows());
  for (int c : cols) mean += Y.col(c);
  mean /= static_cast<double>(cols.size());
  double s = 0.0;
  for (int c : cols) s += (Y.col(c) - mean).squaredNorm();
  return s;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

GraphInstance::GraphInstance(int vertex_count, std::vector<std::pair<int, int>> edges)
    : n_(vertex_count) {
  if (n_ < 1) throw InvalidArgument("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 1 || v < 1 || u > n_ || v > n_) {
      std::ostringstream os;
      os << "edge (" << u << ", " << v << ") has an endpoint outside [1, " << n_ << "]";
      throw InvalidArgument(os.str());
    }
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) {
      std::ostringstream os;
      os << "duplicate edge (" << u << ", " << v << ")";
      throw InvalidArgument(os.str());
    }
    edges_.emplace_back(u, v);
  }
}

Bipartition::Bipartition(std::vector<bool> in_p) : in_p_(std::move(in_p)) {
  p_ = static_cast<int>(std::count(in_p_.begin(), in_p_.end(), true));
  if (p_ == 0 || p_ == vertex_count()) throw InvalidArgument("both sides must be nonempty");
}

Bipartition Bipartition::from_mask(int vertex_count, std::uint64_t mask) {
  if (vertex_count < 2 || vertex_count > 63) throw InvalidArgument("vertex count out of range");
  std::vector<bool> in_p(static_cast<std::size_t>(vertex_count));
  for (int v = 0; v < vertex_count; ++v) in_p[static_cast<std::size_t>(v)] = (mask >> v) & 1U;
  return Bipartition(std::move(in_p));
}

std::vector<int> Bipartition::p_side() const {
  std::vector<int> out;
  for (int v = 1; v <= vertex_count(); ++v) {
    if (in_p(v)) out.push_back(v);
  }
  return out;
}

std::vector<int> Bipartition::q_side() const {
  std::vector<int> out;
  for (int v = 1; v <= vertex_count(); ++v) {
    if (!in_p(v)) out.push_back(v);
  }
  return out;
}

Matrix incidence_transpose(const GraphInstance& g) {
  Matrix Y = Matrix::Zero(g.edge_count(), g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
    Y(e, u - 1) = 1.0;
    Y(e, v - 1) = -1.0;
  }
  return Y;
}

int crossing_edges(const GraphInstance& g, const Bipartition& b) {
  if (b.vertex_count() != g.vertex_count()) throw DimensionError("bipartition size mismatch");
  int count = 0;
  for (auto [u, v] : g.edges()) count += b.in_p(u) != b.in_p(v);
  return count;
}

DensestCut densest_cut_bruteforce(const GraphInstance& g) {
  const int n = g.vertex_count();
  require_range(n, 2, kMaxDensestCut, "densest_cut_bruteforce");
  // Vertex 1 stays in Q; P ranges over the nonempty subsets of {2..N}.
  std::uint64_t best_mask = 0;
  long long best_e = -1;
  long long best_pq = 1;
  std::vector<int> best_p;
  for (std::uint64_t mask = 2; mask < (std::uint64_t{1} << n); mask += 2) {
    const auto b = Bipartition::from_mask(n, mask);
    const long long e = crossing_edges(g, b);
    const long long pq = static_cast<long long>(b.p()) * b.q();
    const long long lhs = e * best_pq;
    const long long rhs = best_e * pq;
    if (best_e < 0 || lhs > rhs || (lhs == rhs && lex_less(b.p_side(), best_p))) {
      best_mask = mask;
      best_e = e;
      best_pq = pq;
      best_p = b.p_side();
    }
  }
  return {Bipartition::from_mask(n, best_mask),
          static_cast<double>(best_e) / static_cast<double>(best_pq), static_cast<int>(best_e)};
}

double dcp_objective(const GraphInstance& g, const Bipartition& b) {
  const double e = crossing_edges(g, b);
  return 2.0 * g.edge_count() -
         g.vertex_count() * e / (static_cast<double>(b.p()) * static_cast<double>(b.q()));
}

double dcp_bruteforce_via_ls(const GraphInstance& g) {
  const int n = g.vertex_count();
  require_range(n, 2, kMaxLeastSquares, "dcp_bruteforce_via_ls");
  const Matrix Y = incidence_transpose(g);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> first;
    std::vector<int> second;
    for (int i = 0; i < n; ++i) ((mask >> i) & 1U ? second : first).push_back(i);
    best = std::min(best, group_spread(Y, first) + group_spread(Y, second));
  }
  return best;
}

double reduction_scale(int vertex_count) { return 6.0 * std::pow(vertex_count, 7); }

TrainingMatrix build_reduction(const GraphInstance& g) {
  if (g.vertex_count() < 2) throw InvalidArgument("build_reduction needs N >= 2");
  Matrix Y(g.edge_count() + 1, g.vertex_count());
  Y.row(0).setConstant(reduction_scale(g.vertex_count()));
  Y.bottomRows(g.edge_count()) = incidence_transpose(g);
  return TrainingMatrix(std::move(Y));
}

L0Solution dict_l0_bruteforce(const TrainingMatrix& Yt, int s, int k) {
  if (s != 1 || k != 2) throw InvalidArgument("dict_l0_bruteforce supports s = 1, k = 2 only");
  const Matrix& Y = Yt.matrix();
  const int n = static_cast<int>(Y.cols());
  require_range(n, 1, kMaxLeastSquares, "dict_l0_bruteforce");

  // Assignments with both atoms in use come first so that near-ties resolve
  // towards them.
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> order;
  for (std::uint64_t m = 1; m < full; ++m) order.push_back(m);
  order.push_back(0);
  if (full != 0) order.push_back(full);

  L0Solution best{std::numeric_limits<double>::infinity(), Matrix::Zero(Y.rows(), 2),
                  Matrix::Zero(2, n), 0};
  for (std::uint64_t mask : order) {
    std::vector<int> groups[2];
    for (int i = 0; i < n; ++i) groups[(mask >> i) & 1U].push_back(i);
    Rank1 fits[2];
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
      Matrix G(Y.rows(), static_cast<Eigen::Index>(groups[j].size()));
      for (std::size_t c = 0; c < groups[j].size(); ++c) {
        G.col(static_cast<Eigen::Index>(c)) = Y.col(groups[j][c]);
      }
      fits[j] = best_rank1(G);
      total += fits[j].residual;
    }
    if (total < best.objective - 1e-12 * std::max(1.0, best.objective) ||
        !std::isfinite(best.objective)) {
      best.objective = total;
      best.assignment = mask;
      best.X.setZero();
      for (int j = 0; j < 2; ++j) {
        best.A.col(j) = fits[j].u;
        for (int c : groups[j]) best.X(j, c) = fits[j].u.dot(Y.col(c));
      }
    }
  }
  return best;
}

ClaimsReport verify_claims(const GraphInstance& g) {
  const int n = g.vertex_count();
  require_range(n, 2, kMaxClaims, "verify_claims");
  const double edges2 = 2.0 * g.edge_count();
  ClaimsReport rep;

  const auto cut = densest_cut_bruteforce(g);
  rep.densest_ratio = cut.ratio;
  rep.ls_minimum = dcp_bruteforce_via_ls(g);
  {
    const double expected = edges2 - n * cut.ratio;
    const double err = std::abs(rep.ls_minimum - expected);
    rep.claim1.passed = err <= 1e-9;
    std::ostringstream os;
    os << "ls minimum " << rep.ls_minimum << ", 2|E| - N*ratio " << expected << ", error " << err;
    rep.claim1.witness = os.str();
  }

  {
    // Distinct values of e / (p q), deduplicated exactly.
    std::vector<std::pair<long long, long long>> ratios;
    for (std::uint64_t mask = 2; mask < (std::uint64_t{1} << n); mask += 2) {
      const auto b = Bipartition::from_mask(n, mask);
      const long long e = crossing_edges(g, b);
      const long long pq = static_cast<long long>(b.p()) * b.q();
      const bool dup = std::any_of(ratios.begin(), ratios.end(), [&](const auto& r) {
        return e * r.second == r.first * pq;
      });
      if (!dup) ratios.emplace_back(e, pq);
    }
    std::vector<double> values;
    for (auto [e, pq] : ratios) values.push_back(edges2 - n * static_cast<double>(e) / pq);
    std::sort(values.begin(), values.end());
    rep.min_value_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
      rep.min_value_gap = std::min(rep.min_value_gap, values[i] - values[i - 1]);
    }
    const double bound = 16.0 / std::pow(n, 3);
    rep.claim2.passed = rep.min_value_gap >= bound - 1e-9;
    std::ostringstream os;
    os << values.size() << " distinct values, min gap " << rep.min_value_gap << ", bound " << bound;
    rep.claim2.witness = os.str();
  }

  {
    const double M = reduction_scale(n);
    const auto Y = build_reduction(g);
    auto sol = dict_l0_bruteforce(Y);
    Matrix A = sol.A;
    Matrix X = sol.X;
    for (int j = 0; j < 2; ++j) {
      if (A(0, j) != 0.0) {
        X.row(j) *= A(0, j) / M;
        A.col(j) *= M / A(0, j);
      }
    }
    const Matrix Yp = Y.matrix().bottomRows(g.edge_count());
    const Matrix At = A.bottomRows(g.edge_count());
    const Matrix X_plus = (X.array() != 0.0).cast<double>().matrix();
    rep.h_w = (Yp - At * X).squaredNorm();
    rep.h_w_plus = (Yp - At * X_plus).squaredNorm();
    rep.h_w_prime = rep.ls_minimum;
    const double slack = 28.0 / (3.0 * std::pow(n, 3));
    rep.claim3.passed = rep.h_w <= rep.h_w_prime + 1e-9 && rep.h_w_prime <= rep.h_w_plus + 1e-9 &&
                        rep.h_w_plus <= rep.h_w + slack + 1e-6;
    std::ostringstream os;
    os << "h(w) " << rep.h_w << ", h(w') " << rep.h_w_prime << ", h(w+) " << rep.h_w_plus
       << ", h(w) + 28/(3N^3) " << rep.h_w + slack;
    rep.claim3.witness = os.str();

    rep.max_delta = (1.0 - X.colwise().sum().array()).abs().maxCoeff();
    const double delta = 1.0 / (3.0 * std::pow(n, 6));
    rep.delta.passed = rep.max_delta <= delta;
    std::ostringstream ds;
    ds << "max |1 - x1 - x2| " << rep.max_delta << ", bound " << delta;
    rep.delta.witness = ds.str();
  }
  return rep;
}

}  // namespace sparsedict::hardness

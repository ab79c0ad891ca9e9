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
#include <utility>
#include <vector>

#include "sparsedict/types.hpp"

// Reduction from densest cut to dictionary learning with s = 1, k = 2, and
// brute-force oracles for checking it on small graphs.
//
// Densest cut: over bipartitions (P, Q) of the vertices maximize
// |E(P, Q)| / (|P| |Q|).

namespace sparsedict::hardness {

/// Simple undirected graph on vertices 1..N. Edges are stored as (u, v) with
/// u < v, in input order.
class GraphInstance {
 public:
  GraphInstance(int vertex_count, std::vector<std::pair<int, int>> edges);

  int vertex_count() const noexcept { return n_; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
};

/// Two nonempty sides P and Q.
class Bipartition {
 public:
  /// in_p[v - 1] says whether vertex v is in P.
  explicit Bipartition(std::vector<bool> in_p);
  /// Bit v - 1 of mask set means vertex v is in P.
  static Bipartition from_mask(int vertex_count, std::uint64_t mask);

  bool in_p(int vertex) const { return in_p_.at(static_cast<std::size_t>(vertex - 1)); }
  int vertex_count() const noexcept { return static_cast<int>(in_p_.size()); }
  int p() const noexcept { return p_; }
  int q() const noexcept { return vertex_count() - p_; }
  std::vector<int> p_side() const;
  std::vector<int> q_side() const;

 private:
  std::vector<bool> in_p_;
  int p_ = 0;
};

/// |E| x N; row e has +1 at the smaller endpoint and -1 at the larger one.
Matrix incidence_transpose(const GraphInstance& g);

int crossing_edges(const GraphInstance& g, const Bipartition& b);

struct DensestCut {
  Bipartition best;
  double ratio;
  int crossing;
};

/// Exhaustive over the 2^(N-1) - 1 bipartitions; 2 <= N <= 20. Among
/// maximizers, P is the side without vertex 1 and the lexicographically
/// smallest such P is returned.
DensestCut densest_cut_bruteforce(const GraphInstance& g);

/// 2|E| - N |E(P,Q)| / (p q): the least-squares residual of the two-atom fit
/// whose supports follow b.
double dcp_objective(const GraphInstance& g, const Bipartition& b);

/// Minimum of ||Y' - A' X'||_F^2 over the 2^N - 2 assignments of columns to
/// the two atoms with unit coefficients, A' solved exactly (group means).
/// N <= 12.
double dcp_bruteforce_via_ls(const GraphInstance& g);

/// (|E| + 1) x N: a row of M = 6 N^7 on top of the incidence transpose.
TrainingMatrix build_reduction(const GraphInstance& g);
double reduction_scale(int vertex_count);

struct L0Solution {
  double objective;
  Matrix A;  ///< n x 2, unit-norm columns (zero for an unused atom)
  Matrix X;  ///< 2 x N, one nonzero per column at most
  std::uint64_t assignment;  ///< bit i set: column i uses atom 2
};

/// min ||Y - A X||_F^2 s.t. ||x_i||_0 <= s, for s = 1 and k = 2, by
/// enumerating all 2^N column assignments and fitting each group with its
/// best rank-1 approximation. N <= 12.
L0Solution dict_l0_bruteforce(const TrainingMatrix& Y, int s = 1, int k = 2);

struct ClaimCheck {
  bool passed = false;
  std::string witness;
};

struct ClaimsReport {
  ClaimCheck claim1;  ///< least-squares brute force equals 2|E| - N * densest ratio
  ClaimCheck claim2;  ///< distinct objective values are >= 16 / N^3 apart
  ClaimCheck claim3;  ///< h(w) <= h(w') <= h(w+) <= h(w) + 28 / (3 N^3)
  ClaimCheck delta;   ///< max_i |1 - x_1i - x_2i| <= 1 / (3 N^6)

  double densest_ratio = 0.0;
  double ls_minimum = 0.0;
  double min_value_gap = 0.0;  ///< infinity when fewer than two distinct values
  double h_w = 0.0;
  double h_w_prime = 0.0;
  double h_w_plus = 0.0;
  double max_delta = 0.0;

  bool all_passed() const { return claim1.passed && claim2.passed && claim3.passed && delta.passed; }
};

/// N <= 10.
ClaimsReport verify_claims(const GraphInstance& g);

}  // namespace sparsedict::hardness

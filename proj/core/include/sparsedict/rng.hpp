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
#include <random>
#include <string_view>

#include "sparsedict/types.hpp"

namespace sparsedict {

/// Deterministic stream splitting: every consumer derives its own engine
/// from a root seed plus a name and an index, so adding a consumer never
/// perturbs the draws of another.
class SeedTree {
 public:
  explicit SeedTree(std::uint64_t root) : root_(root) {}

  std::uint64_t root() const noexcept { return root_; }
  /// Child seed for (name, index).
  std::uint64_t derive(std::string_view name, std::uint64_t index = 0) const;
  SeedTree child(std::string_view name, std::uint64_t index = 0) const {
    return SeedTree(derive(name, index));
  }
  std::mt19937_64 engine(std::string_view name, std::uint64_t index = 0) const {
    return std::mt19937_64(derive(name, index));
  }

 private:
  std::uint64_t root_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// rows x cols matrix of i.i.d. standard normal draws.
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
/// rows x cols matrix of i.i.d. uniform [lo, hi) draws.
Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                      double lo = 0.0, double hi = 1.0);

}  // namespace sparsedict

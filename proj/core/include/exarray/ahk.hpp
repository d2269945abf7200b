// Copyright 2026 The exarray Authors.
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

#ifndef EXARRAY_AHK_HPP_
#define EXARRAY_AHK_HPP_

// Synthetic arrays from the Aldous-Hoover-Kallenberg representation: every
// cell is a fixed function of i.i.d. latent factors U_J indexed by the
// nonempty subsets J of the cell's units. Factors are shared by all cells
// containing J, which makes generated joint arrays exchangeable and
// dissociated by construction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "exarray/arrays.hpp"
#include "exarray/random.hpp"

namespace exarray {

using LatentSampler = std::function<double(StreamRng&)>;

LatentSampler uniform_latent();
LatentSampler normal_latent();

// Identifies one latent draw: a unit subset (joint arrays) or a subset of
// dimensions with their indices (separate arrays), plus a component.
struct LatentId {
  std::uint32_t dims_mask = 0;  // 0 for joint arrays
  std::vector<Unit> units;      // sorted for joint, dimension order otherwise
  std::size_t component = 0;
  friend auto operator<=>(const LatentId&, const LatentId&) = default;
};

// Called on every latent access when installed; for instrumentation only.
using LatentObserver =
    std::function<void(std::size_t cell, const LatentId& latent)>;

namespace detail {
struct LatentContext;
}

// The latent factors of one cell, evaluated lazily. Subsets are addressed by
// position masks over the tuple; the canonical ordering is singletons in
// tuple-position order, then pairs in lexicographic position order, then
// triples, and so on up to the full tuple.
class LatentTuple {
 public:
  std::size_t arity() const noexcept { return units_.size(); }
  std::span<const Unit> units() const noexcept { return units_; }

  // U of the unit at `position`.
  double unit(std::size_t position, std::size_t component = 0) const;
  // U_J with J = the units at the positions set in `mask`.
  double subset(std::uint32_t mask, std::size_t component = 0) const;
  // U of the whole tuple.
  double full(std::size_t component = 0) const {
    return subset((1u << arity()) - 1u, component);
  }
  // The `ordinal`-th subset in the canonical ordering.
  double at(std::size_t ordinal, std::size_t component = 0) const;

  // Position masks in canonical order (2^k - 1 entries).
  static std::vector<std::uint32_t> canonical_masks(std::size_t arity);

 private:
  friend struct detail::LatentContext;
  LatentTuple(const detail::LatentContext& context, std::size_t cell,
              std::span<const Unit> units)
      : context_(&context), cell_(cell), units_(units) {}

  const detail::LatentContext* context_;
  std::size_t cell_;
  std::span<const Unit> units_;
};

// Writes one observation vector. `out` arrives empty; its final size is the
// cell dimension and must agree across cells.
using AhkKernel = std::function<void(const LatentTuple&, std::vector<double>&)>;

struct AhkModel {
  std::size_t arity = 2;
  // Independent draws per latent subset (vector-valued U_J).
  std::size_t latent_dim = 1;
  AhkKernel kernel;
  LatentSampler sampler = uniform_latent();
};

// Jointly exchangeable, dissociated array on n units. Deterministic in
// (model, n, seed): latent draws are keyed on (seed, subset, component).
JointArray generate_joint(const AhkModel& model, std::size_t n,
                          std::uint64_t seed,
                          const LatentObserver& observer = {});

// Separately exchangeable array on the grid `dims`; latent factors are
// indexed by (dimension subset, indices in those dimensions).
SeparateArray generate_separate(const AhkModel& model,
                                std::span<const std::size_t> dims,
                                std::uint64_t seed,
                                const LatentObserver& observer = {});

}  // namespace exarray

#endif  // EXARRAY_AHK_HPP_

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

#include "exarray/ahk.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "exarray/error.hpp"

namespace exarray {

LatentSampler uniform_latent() {
  return [](StreamRng& rng) { return rng.uniform(); };
}

LatentSampler normal_latent() {
  return [](StreamRng& rng) { return rng.normal(); };
}

namespace detail {

namespace {
constexpr std::uint64_t kJointTag = 0x6a6f696e74ULL;
constexpr std::uint64_t kSeparateTag = 0x7365706172ULL;
}  // namespace

struct LatentContext {
  std::uint64_t seed = 0;
  bool separate = false;
  std::size_t latent_dim = 1;
  const LatentSampler* sampler = nullptr;
  const LatentObserver* observer = nullptr;
  // Singleton factors, drawn up front. Joint: unit-major. Separate: one block
  // per dimension starting at dim_offsets[j].
  std::vector<double> singletons;
  std::vector<std::size_t> dim_offsets;
  std::vector<std::uint32_t> masks;

  double draw(std::uint64_t subset_key, std::size_t component) const {
    StreamRng rng(derive_key(subset_key, {component}));
    return (*sampler)(rng);
  }

  std::uint64_t joint_key(std::span<const Unit> sorted_units) const {
    std::uint64_t key = derive_key(seed, {kJointTag, sorted_units.size()});
    for (Unit u : sorted_units) key = mix64(key ^ mix64(u + 1ULL));
    return key;
  }

  std::uint64_t separate_key(std::uint32_t mask,
                             std::span<const Unit> indices) const {
    std::uint64_t key = derive_key(seed, {kSeparateTag, mask});
    for (Unit u : indices) key = mix64(key ^ mix64(u + 1ULL));
    return key;
  }

  void fill_singletons(std::span<const std::size_t> dims) {
    if (!separate) {
      singletons.resize(dims[0] * latent_dim);
      for (Unit u = 0; u < dims[0]; ++u) {
        const Unit one[1] = {u};
        const std::uint64_t key = joint_key(one);
        for (std::size_t c = 0; c < latent_dim; ++c)
          singletons[u * latent_dim + c] = draw(key, c);
      }
      return;
    }
    dim_offsets.clear();
    std::size_t total = 0;
    for (std::size_t n : dims) {
      dim_offsets.push_back(total);
      total += n * latent_dim;
    }
    singletons.resize(total);
    for (std::size_t j = 0; j < dims.size(); ++j)
      for (Unit u = 0; u < dims[j]; ++u) {
        const Unit one[1] = {u};
        const std::uint64_t key = separate_key(1u << j, one);
        for (std::size_t c = 0; c < latent_dim; ++c)
          singletons[dim_offsets[j] + u * latent_dim + c] = draw(key, c);
      }
  }

  void notify(std::size_t cell, std::span<const Unit> units,
              std::uint32_t mask, std::size_t component) const {
    LatentId id;
    id.component = component;
    for (std::size_t p = 0; p < units.size(); ++p)
      if (mask & (1u << p)) id.units.push_back(units[p]);
    if (separate) {
      id.dims_mask = mask;
    } else {
      std::sort(id.units.begin(), id.units.end());
    }
    (*observer)(cell, id);
  }

  LatentTuple tuple(std::size_t cell, std::span<const Unit> units) const {
    return LatentTuple(*this, cell, units);
  }

  double value(std::size_t cell, std::span<const Unit> units,
               std::uint32_t mask, std::size_t component) const {
    const std::size_t k = units.size();
    if (mask == 0 || mask >= (1u << k))
      throw ModelError("latent subset mask out of range");
    if (component >= latent_dim)
      throw ModelError("latent component " + std::to_string(component) +
                       " exceeds latent_dim");
    if (observer != nullptr && *observer) notify(cell, units, mask, component);

    if (std::has_single_bit(mask)) {
      const auto position = static_cast<std::size_t>(std::countr_zero(mask));
      const std::size_t base = separate ? dim_offsets[position] : 0;
      return singletons[base + units[position] * latent_dim + component];
    }
    Unit buffer[32];
    std::size_t r = 0;
    for (std::size_t p = 0; p < k; ++p)
      if (mask & (1u << p)) buffer[r++] = units[p];
    std::span<Unit> picked(buffer, r);
    if (separate) return draw(separate_key(mask, picked), component);
    std::sort(picked.begin(), picked.end());
    return draw(joint_key(picked), component);
  }
};

}  // namespace detail

double LatentTuple::unit(std::size_t position, std::size_t component) const {
  return context_->value(cell_, units_, 1u << position, component);
}

double LatentTuple::subset(std::uint32_t mask, std::size_t component) const {
  return context_->value(cell_, units_, mask, component);
}

double LatentTuple::at(std::size_t ordinal, std::size_t component) const {
  if (ordinal >= context_->masks.size())
    throw ModelError("latent ordinal out of range");
  return context_->value(cell_, units_, context_->masks[ordinal], component);
}

std::vector<std::uint32_t> LatentTuple::canonical_masks(std::size_t arity) {
  std::vector<std::uint32_t> masks;
  const std::uint32_t limit = 1u << arity;
  for (std::size_t size = 1; size <= arity; ++size) {
    std::vector<std::uint32_t> level;
    for (std::uint32_t m = 1; m < limit; ++m)
      if (static_cast<std::size_t>(std::popcount(m)) == size)
        level.push_back(m);
    // Lexicographic order of the sorted position lists.
    std::sort(level.begin(), level.end(),
              [arity](std::uint32_t a, std::uint32_t b) {
                for (std::size_t p = 0; p < arity; ++p) {
                  const bool in_a = a & (1u << p);
                  const bool in_b = b & (1u << p);
                  if (in_a != in_b) return in_a;
                }
                return false;
              });
    masks.insert(masks.end(), level.begin(), level.end());
  }
  return masks;
}

namespace {

void validate(const AhkModel& model) {
  if (!model.kernel) throw ModelError("model has no kernel");
  if (!model.sampler) throw ModelError("model has no latent sampler");
  if (model.latent_dim == 0) throw ModelError("latent_dim must be positive");
  if (model.arity == 0 || model.arity > 16)
    throw ModelError("model arity must be in [1, 16]");
}

// Evaluates the kernel for one cell and appends the result to `values`.
void emit(const AhkModel& model, const LatentTuple& latents, std::size_t cell,
          std::vector<double>& scratch, std::size_t& dim,
          std::vector<double>& values) {
  scratch.clear();
  model.kernel(latents, scratch);
  if (cell == 0) {
    if (scratch.empty()) throw ModelError("kernel produced an empty cell");
    dim = scratch.size();
  } else if (scratch.size() != dim) {
    throw ModelError("kernel output dimension changed from " +
                     std::to_string(dim) + " to " +
                     std::to_string(scratch.size()) + " at cell " +
                     std::to_string(cell));
  }
  values.insert(values.end(), scratch.begin(), scratch.end());
}

}  // namespace

JointArray generate_joint(const AhkModel& model, std::size_t n,
                          std::uint64_t seed, const LatentObserver& observer) {
  validate(model);
  if (n < model.arity) throw DomainError("sample smaller than arity");
  detail::LatentContext context;
  context.seed = seed;
  context.latent_dim = model.latent_dim;
  context.sampler = &model.sampler;
  context.observer = &observer;
  context.masks = LatentTuple::canonical_masks(model.arity);
  const std::size_t dims[1] = {n};
  context.fill_singletons(dims);

  const std::size_t k = model.arity;
  const std::vector<Unit> tuples = enumerate_tuples_flat(n, k);
  const std::size_t cells = tuples.size() / k;
  std::vector<double> values;
  std::vector<double> scratch;
  std::size_t dim = 0;
  for (std::size_t r = 0; r < cells; ++r) {
    const std::span<const Unit> units(tuples.data() + r * k, k);
    emit(model, context.tuple(r, units), r, scratch, dim, values);
    if (r == 0) values.reserve(cells * dim);
  }
  return JointArray(n, k, dim, std::move(values));
}

SeparateArray generate_separate(const AhkModel& model,
                                std::span<const std::size_t> dims,
                                std::uint64_t seed,
                                const LatentObserver& observer) {
  validate(model);
  if (dims.empty()) throw DomainError("separate array needs dimensions");
  if (dims.size() != model.arity)
    throw DomainError("model arity differs from number of dimensions");
  std::size_t cells = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw DomainError("every dimension needs at least one unit");
    cells *= d;
  }
  detail::LatentContext context;
  context.seed = seed;
  context.separate = true;
  context.latent_dim = model.latent_dim;
  context.sampler = &model.sampler;
  context.observer = &observer;
  context.masks = LatentTuple::canonical_masks(model.arity);
  context.fill_singletons(dims);

  const std::size_t k = dims.size();
  std::vector<Unit> index(k, 0);
  std::vector<double> values;
  std::vector<double> scratch;
  std::size_t dim = 0;
  for (std::size_t flat = 0; flat < cells; ++flat) {
    emit(model, context.tuple(flat, index), flat, scratch, dim, values);
    if (flat == 0) values.reserve(cells * dim);
    // Row-major odometer: last dimension fastest.
    for (std::size_t j = k; j-- > 0;) {
      if (++index[j] < dims[j]) break;
      index[j] = 0;
    }
  }
  return SeparateArray(std::vector<std::size_t>(dims.begin(), dims.end()),
                       dim, std::move(values));
}

}  // namespace exarray

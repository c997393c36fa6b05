// Copyright 2026 The soficlab Authors
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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/graph.hpp"

namespace soficlab {

// Bijection of {0, ..., n-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<Vertex> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (Vertex y : image_) {
      if (y >= image_.size() || hit[y]) throw invalid_input("image array is not a permutation");
      hit[y] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.image_.resize(n);
    std::iota(p.image_.begin(), p.image_.end(), Vertex{0});
    return p;
  }

  std::size_t size() const noexcept { return image_.size(); }
  Vertex operator()(Vertex x) const { return image_[x]; }
  std::span<const Vertex> image() const noexcept { return image_; }

  Permutation inverse() const {
    Permutation p;
    p.image_.resize(image_.size());
    for (std::size_t x = 0; x < image_.size(); ++x) p.image_[image_[x]] = static_cast<Vertex>(x);
    return p;
  }

  // x -> next(this(x))
  Permutation then(const Permutation& next) const {
    Permutation p;
    p.image_.resize(image_.size());
    for (std::size_t x = 0; x < image_.size(); ++x) p.image_[x] = next.image_[image_[x]];
    return p;
  }

  bool is_identity() const {
    for (std::size_t x = 0; x < image_.size(); ++x) {
      if (image_[x] != x) return false;
    }
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Vertex> image_;
};

// Extends an injective partial map on {0..n-1} to a permutation: sources
// without an image are matched to targets without a preimage, both taken in
// ascending index order.
inline Permutation complete_ascending(std::span<const std::optional<Vertex>> partial) {
  const std::size_t n = partial.size();
  std::vector<bool> hit(n, false);
  for (const auto& y : partial) {
    if (!y) continue;
    if (*y >= n || hit[*y]) throw invalid_input("partial map is not injective");
    hit[*y] = true;
  }
  std::vector<Vertex> image(n);
  Vertex target = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (partial[x]) {
      image[x] = *partial[x];
      continue;
    }
    while (hit[target]) ++target;
    image[x] = target++;
  }
  return Permutation(std::move(image));
}

}  // namespace soficlab

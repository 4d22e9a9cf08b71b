// Copyright 2026 The EFX Lab Authors
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

#ifndef EFX_RNG_H_
#define EFX_RNG_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace efx {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output n of stream s under seed k is a pure
// function of (k, s, n), so independent streams can be handed to workers
// without coordination and every run replays bit for bit.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : key_(Mix64(seed ^ Mix64(stream ^ 0x5851F42D4C957F2DULL))) {}

  uint64_t Next() { return Mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform in [0, bound) by rejection; bound must be positive.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
    uint64_t x = Next();
    while (x >= limit) x = Next();
    return x % bound;
  }

  // Uniform in [lo, hi].
  int64_t Between(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(Below(static_cast<uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace efx

#endif  // EFX_RNG_H_

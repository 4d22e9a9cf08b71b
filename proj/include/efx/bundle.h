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

#ifndef EFX_BUNDLE_H_
#define EFX_BUNDLE_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace efx {

// Goods are identified by a dense 0-based index.
using GoodId = int;

// Hard ceiling on the number of goods a bitmask can carry. Enumeration caps
// are far below this in practice.
inline constexpr int kMaxGoods = 30;

// A set of goods stored as a bitmask; bit j is good j.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(uint32_t bits) : bits_(bits) {}
  constexpr Bundle(std::initializer_list<GoodId> goods) {
    for (GoodId g : goods) bits_ |= uint32_t{1} << g;
  }

  static constexpr Bundle Full(int m) {
    return Bundle(m == 0 ? 0u : (~uint32_t{0} >> (32 - m)));
  }

  constexpr uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool Contains(GoodId g) const { return (bits_ >> g) & 1u; }

  constexpr Bundle With(GoodId g) const {
    return Bundle(bits_ | (uint32_t{1} << g));
  }
  constexpr Bundle Without(GoodId g) const {
    return Bundle(bits_ & ~(uint32_t{1} << g));
  }
  constexpr Bundle Union(Bundle other) const {
    return Bundle(bits_ | other.bits_);
  }
  constexpr Bundle Minus(Bundle other) const {
    return Bundle(bits_ & ~other.bits_);
  }
  constexpr bool Intersects(Bundle other) const {
    return (bits_ & other.bits_) != 0;
  }
  constexpr bool IsSubsetOf(Bundle other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  // Members in ascending order.
  std::vector<GoodId> Goods() const {
    std::vector<GoodId> out;
    for (uint32_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  friend constexpr auto operator<=>(Bundle, Bundle) = default;

 private:
  uint32_t bits_ = 0;
};

}  // namespace efx

#endif  // EFX_BUNDLE_H_

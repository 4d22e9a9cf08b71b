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

#ifndef EFX_RATIONAL_H_
#define EFX_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace efx {

// Arbitrary precision rational. Always kept canonical (reduced, positive
// denominator) by the helpers below.
using Rational = mpq_class;

// Parses "n", "-n" or "p/q" with decimal integers. Anything else, including
// decimal points and exponents, is rejected with ErrorKind::kParse.
Rational ParseRational(std::string_view text);

// Inverse of ParseRational: "n" when the denominator is one, else "p/q".
std::string FormatRational(const Rational& value);

// 2^exponent as an exact rational.
Rational PowerOfTwo(int exponent);

}  // namespace efx

#endif  // EFX_RATIONAL_H_

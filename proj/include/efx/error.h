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

#ifndef EFX_ERROR_H_
#define EFX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace efx {

enum class ErrorKind {
  kMalformedValuation,
  kInstanceTooLarge,
  kInvalidEpsilon,
  kInvalidArgument,
  kPrecondition,
  kDegenerate,
  kNotMmsFeasible,
  kInternalInvariant,
  kThresholdNotMet,
  kStructuralContradiction,
  kDeadEnd,
  kParse,
};

// Stable snake_case name used in CLI error payloads.
std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception type. The kind is
// what callers dispatch on; the message is diagnostic only.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace efx

#endif  // EFX_ERROR_H_

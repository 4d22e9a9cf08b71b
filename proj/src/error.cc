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

#include "efx/error.h"

namespace efx {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedValuation:
      return "malformed_valuation";
    case ErrorKind::kInstanceTooLarge:
      return "instance_too_large";
    case ErrorKind::kInvalidEpsilon:
      return "invalid_epsilon";
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kPrecondition:
      return "precondition";
    case ErrorKind::kDegenerate:
      return "degenerate";
    case ErrorKind::kNotMmsFeasible:
      return "not_mms_feasible";
    case ErrorKind::kInternalInvariant:
      return "internal_invariant";
    case ErrorKind::kThresholdNotMet:
      return "threshold_not_met";
    case ErrorKind::kStructuralContradiction:
      return "structural_contradiction";
    case ErrorKind::kDeadEnd:
      return "dead_end";
    case ErrorKind::kParse:
      return "parse";
  }
  return "unknown";
}

}  // namespace efx

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


#ifndef EFX_CLI_H_
#define EFX_CLI_H_

#include <iosfwd>

namespace efx {

// Runs one efx_lab subcommand. JSON results go to `out`, diagnostics to
// `err`. Returns 0 on success, 1 on a domain error (reported as
// {"error": {"kind", "detail"}} on `out`), and 2 on a usage or parse error.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace efx

#endif  // EFX_CLI_H_

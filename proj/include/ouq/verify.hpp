// Copyright 2026 The ouqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ouq {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick self-test of the library invariants (a few seconds): kernel
// agreement across ISAs, simplex projection, LHS stratification,
// Johnson-Cook identities, network gradients and model round trip, the
// one-dimensional Markov bound, and verdict monotonicity.
std::vector<CheckResult> run_invariant_checks();

// Prints one line per check; true when all pass.
bool report_checks(const std::vector<CheckResult>& checks, std::ostream& out);

}  // namespace ouq

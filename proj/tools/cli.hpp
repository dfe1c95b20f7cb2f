// Copyright 2026 The GeoInfer Authors.
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

// The geoinfer command line: train, predict, eval, synth, movement.

#ifndef GEOINFER_TOOLS_CLI_HPP_
#define GEOINFER_TOOLS_CLI_HPP_

#include <iosfwd>

namespace geoinfer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Parses argv and runs one subcommand. Reports and results that are not
// written to files go to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoinfer::cli

#endif  // GEOINFER_TOOLS_CLI_HPP_

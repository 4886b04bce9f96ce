// Copyright 2026 The qkernel-lab Authors
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

/**
 * @file cli.hpp
 * @brief The `qkl` command line: ingest, kernel, train, sweep, ptri,
 *        variability, resources and report subcommands.
 *
 * Every subcommand that writes a file also writes `<out>.manifest.json`.
 * `qkl --replay <manifest>` re-runs the recorded command; `--out` and
 * `--threads` may override the recorded values.
 */

#include <iosfwd>
#include <span>
#include <string>

namespace qkl {

/// Runs the CLI on `args` (program name excluded). Human-readable output
/// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qkl

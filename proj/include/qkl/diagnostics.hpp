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

#include <functional>
#include <string_view>

namespace qkl {

using WarningSink = std::function<void(std::string_view)>;

/// Routes a warning to the installed sink (stderr by default). Thread safe.
void warn(std::string_view message);

/// Replaces the sink and returns the previous one. A null sink drops
/// warnings.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace qkl

// Copyright 2026 The TDM Pipeline Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace tdm::cli {

// Exit codes: 0 success, 1 validation failure, 2 runtime error.
enum ExitStatus : int { kOk = 0, kValidationFailure = 1, kRuntimeError = 2 };

// Entry point shared by the `tdm` binary and the tests. args excludes the
// program name. Machine output goes to `out`, logs and usage to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tdm::cli

// Copyright 2026 xysurf Contributors
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

#ifndef XYSURF_TOOLS_CLI_H
#define XYSURF_TOOLS_CLI_H

#include <iosfwd>

namespace xysurf::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    usage = 2,
    decode_infeasible = 3,
    fit_degenerate = 4,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace xysurf::cli

#endif  // XYSURF_TOOLS_CLI_H

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

#ifndef XYSURF_ERRORS_H
#define XYSURF_ERRORS_H

#include <stdexcept>
#include <string>

namespace xysurf {

/// Raised for invalid arguments supplied by a caller (bad distance, rates out
/// of range, malformed input files, ...).
struct UsageError : std::invalid_argument {
    explicit UsageError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Raised when a matching problem has no perfect matching.
struct DecodeInfeasible : std::runtime_error {
    explicit DecodeInfeasible(const std::string &what) : std::runtime_error(what) {
    }
};

/// Raised when threshold data cannot support a finite-size scaling fit.
struct FitDegenerate : std::runtime_error {
    explicit FitDegenerate(const std::string &what) : std::runtime_error(what) {
    }
};

/// Raised when an internal consistency check fails. Indicates a bug.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string &what) : std::logic_error(what) {
    }
};

}  // namespace xysurf

#endif  // XYSURF_ERRORS_H

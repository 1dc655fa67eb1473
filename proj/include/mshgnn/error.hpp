// Copyright 2026 The mshgnn Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mshgnn {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidAction,
  kConfigError,
  kParseError,
  kLabelMismatch,
  kNonHomomorphic,
  kConstructionError,
  kDimensionMismatch,
  kNumericError,
  kMissingTrace,
  kLoadError,
  kSchemaMismatch,
  kDivergence,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidAction: return "invalid-action";
    case ErrorKind::kConfigError: return "config-error";
    case ErrorKind::kParseError: return "parse-error";
    case ErrorKind::kLabelMismatch: return "label-mismatch";
    case ErrorKind::kNonHomomorphic: return "non-homomorphic";
    case ErrorKind::kConstructionError: return "construction-error";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kNumericError: return "numeric-error";
    case ErrorKind::kMissingTrace: return "missing-trace";
    case ErrorKind::kLoadError: return "load-error";
    case ErrorKind::kSchemaMismatch: return "schema-mismatch";
    case ErrorKind::kDivergence: return "divergence";
  }
  return "unknown";
}

}  // namespace mshgnn

// Copyright 2026 The MML Authors.
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

#include "mml/status.h"

namespace mml {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidInterval: return "invalid_interval";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kBadVersion: return "bad_version";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kDuplicateKey: return "duplicate_key";
    case ErrorCode::kDanglingKey: return "dangling_key";
    case ErrorCode::kDimMismatch: return "dim_mismatch";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kStaleTape: return "stale_tape";
    case ErrorCode::kDiverged: return "diverged";
    case ErrorCode::kRuntime: return "runtime";
  }
  return "unknown";
}

}  // namespace mml

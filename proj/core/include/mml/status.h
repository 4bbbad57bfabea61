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

#ifndef MML_STATUS_H_
#define MML_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mml {

// Failure classes. The CLI maps these onto process exit codes, so new
// values must be assigned a class in ExitClassFor().
enum class ErrorCode {
  kInvalidArgument,   // precondition violated by the caller
  kConfig,            // malformed or unknown run-config entries
  kIo,                // file could not be opened/written
  kParse,             // malformed manifest / prediction line
  kInvalidInterval,   // Interval invariant violated
  kBadMagic,          // archive does not start with MMLF
  kBadVersion,        // archive version unsupported
  kTruncated,         // archive ended mid-record
  kNonFinite,         // NaN/Inf where finite values are required
  kDuplicateKey,      // archive key appears twice
  kDanglingKey,       // manifest references a missing archive key
  kDimMismatch,       // tensor width disagrees with the expected dim
  kNotFound,          // query/video/feature lookup failed
  kStaleTape,         // backward called without a matching forward record
  kDiverged,          // training produced a non-finite loss
  kRuntime,           // anything else discovered while running
};

std::string_view ErrorCodeName(ErrorCode code);

// Exception type thrown by every mml component.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mml

#endif  // MML_STATUS_H_

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

#include "mml/interval.h"

#include <cmath>
#include <sstream>

#include "mml/status.h"

namespace mml {

bool IsValid(const Interval& interval) {
  return std::isfinite(interval.start) && std::isfinite(interval.end) &&
         interval.start >= 0.0 && interval.end >= interval.start;
}

void ValidateInterval(const Interval& interval, const char* context) {
  if (!IsValid(interval)) {
    std::ostringstream msg;
    msg << "invalid interval " << interval << " (" << context << ")";
    Fail(ErrorCode::kInvalidInterval, msg.str());
  }
}

std::ostream& operator<<(std::ostream& os, const Interval& interval) {
  return os << "[" << interval.start << ", " << interval.end << "]";
}

}  // namespace mml

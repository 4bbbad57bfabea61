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

#ifndef MML_INTERVAL_H_
#define MML_INTERVAL_H_

#include <ostream>

namespace mml {

// A closed time span [start, end] in seconds.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

// True iff both bounds are finite, start >= 0 and end >= start.
bool IsValid(const Interval& interval);

// Throws Error(kInvalidInterval) naming `context` when !IsValid().
void ValidateInterval(const Interval& interval, const char* context);

std::ostream& operator<<(std::ostream& os, const Interval& interval);

}  // namespace mml

#endif  // MML_INTERVAL_H_

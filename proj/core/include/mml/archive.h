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

// MMLF feature archive.
//
// Layout (all integers unsigned 32-bit little-endian):
//
//   "MMLF" | version=1 | record_count
//   per record: key_len | key bytes (UTF-8) | ndim | dim[0..ndim) |
//               product(dims) IEEE-754 binary32 values, little-endian
//
// Values are held as float in memory so that read(write(x)) == x bit for
// bit. Numeric code converts to double at the point of use.

#ifndef MML_ARCHIVE_H_
#define MML_ARCHIVE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mml {

inline constexpr char kArchiveMagic[4] = {'M', 'M', 'L', 'F'};
inline constexpr std::uint32_t kArchiveVersion = 1;

struct TensorRecord {
  std::string key;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;  // row-major

  std::size_t ElementCount() const;
  std::vector<double> ToDouble() const;
  bool operator==(const TensorRecord&) const = default;
};

TensorRecord MakeRecord(std::string key, std::vector<std::uint32_t> shape,
                        std::span<const double> values);

// Checks product(shape) == data.size(), positive dims and finite values.
void ValidateRecord(const TensorRecord& record);

// Serialization. Encode rejects duplicate keys and non-finite values;
// Decode reports kBadMagic, kBadVersion or kTruncated ("truncation at
// record k").
std::string EncodeArchive(std::span<const TensorRecord> records);
std::vector<TensorRecord> DecodeArchive(std::string_view bytes);

void WriteArchive(std::span<const TensorRecord> records,
                  const std::filesystem::path& path);
std::vector<TensorRecord> ReadArchive(const std::filesystem::path& path);

// Key -> record lookup over one or more archives.
class FeatureStore {
 public:
  FeatureStore() = default;

  static FeatureStore FromArchives(
      std::span<const std::filesystem::path> paths);

  // Throws kDuplicateKey when the key is already present.
  void Add(TensorRecord record);

  bool Contains(std::string_view key) const;
  // Throws kDanglingKey naming the key when absent.
  const TensorRecord& Get(std::string_view key) const;
  std::size_t size() const { return records_.size(); }
  const std::map<std::string, TensorRecord, std::less<>>& records() const {
    return records_;
  }

 private:
  std::map<std::string, TensorRecord, std::less<>> records_;
};

}  // namespace mml

#endif  // MML_ARCHIVE_H_

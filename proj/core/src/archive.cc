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

#include "mml/archive.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "mml/status.h"

namespace mml {
namespace {

void PutU32(std::string& out, std::uint32_t value) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((value >> shift) & 0xFFu));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool ReadU32(std::uint32_t& value) {
    if (bytes_.size() - pos_ < 4) return false;
    value = 0;
    for (int i = 0; i < 4; ++i) {
      value |= static_cast<std::uint32_t>(
                   static_cast<unsigned char>(bytes_[pos_ + i]))
               << (8 * i);
    }
    pos_ += 4;
    return true;
  }

  bool ReadBytes(std::size_t n, std::string_view& out) {
    if (bytes_.size() - pos_ < n) return false;
    out = bytes_.substr(pos_, n);
    pos_ += n;
    return true;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void Truncated(std::uint32_t index) {
  Fail(ErrorCode::kTruncated,
       "truncation at record " + std::to_string(index));
}

}  // namespace

std::size_t TensorRecord::ElementCount() const {
  std::size_t n = 1;
  for (std::uint32_t d : shape) n *= d;
  return n;
}

std::vector<double> TensorRecord::ToDouble() const {
  return {data.begin(), data.end()};
}

TensorRecord MakeRecord(std::string key, std::vector<std::uint32_t> shape,
                        std::span<const double> values) {
  TensorRecord record{std::move(key), std::move(shape), {}};
  record.data.reserve(values.size());
  for (double v : values) record.data.push_back(static_cast<float>(v));
  ValidateRecord(record);
  return record;
}

void ValidateRecord(const TensorRecord& record) {
  for (std::uint32_t d : record.shape) {
    if (d == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "record '" + record.key + "' has a zero dimension");
    }
  }
  if (record.ElementCount() != record.data.size()) {
    Fail(ErrorCode::kDimMismatch,
         "record '" + record.key + "' shape holds " +
             std::to_string(record.ElementCount()) + " values but data has " +
             std::to_string(record.data.size()));
  }
  for (float v : record.data) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kNonFinite,
           "record '" + record.key + "' contains a non-finite value");
    }
  }
}

std::string EncodeArchive(std::span<const TensorRecord> records) {
  std::set<std::string_view> keys;
  std::string out(kArchiveMagic, sizeof(kArchiveMagic));
  PutU32(out, kArchiveVersion);
  PutU32(out, static_cast<std::uint32_t>(records.size()));
  for (const TensorRecord& record : records) {
    ValidateRecord(record);
    if (!keys.insert(record.key).second) {
      Fail(ErrorCode::kDuplicateKey, "duplicate key '" + record.key + "'");
    }
    PutU32(out, static_cast<std::uint32_t>(record.key.size()));
    out += record.key;
    PutU32(out, static_cast<std::uint32_t>(record.shape.size()));
    for (std::uint32_t d : record.shape) PutU32(out, d);
    for (float v : record.data) PutU32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<TensorRecord> DecodeArchive(std::string_view bytes) {
  Reader reader(bytes);
  std::string_view magic;
  if (!reader.ReadBytes(4, magic) ||
      magic != std::string_view(kArchiveMagic, 4)) {
    Fail(ErrorCode::kBadMagic, "not an MMLF archive (bad magic)");
  }
  std::uint32_t version = 0;
  if (!reader.ReadU32(version)) Fail(ErrorCode::kTruncated, "truncated header");
  if (version != kArchiveVersion) {
    Fail(ErrorCode::kBadVersion,
         "unsupported archive version " + std::to_string(version));
  }
  std::uint32_t count = 0;
  if (!reader.ReadU32(count)) Fail(ErrorCode::kTruncated, "truncated header");

  std::vector<TensorRecord> records;
  std::set<std::string, std::less<>> keys;
  for (std::uint32_t index = 0; index < count; ++index) {
    TensorRecord record;
    std::uint32_t key_len = 0;
    std::string_view key;
    if (!reader.ReadU32(key_len) || !reader.ReadBytes(key_len, key)) {
      Truncated(index);
    }
    record.key = std::string(key);
    std::uint32_t ndim = 0;
    if (!reader.ReadU32(ndim)) Truncated(index);
    // Each dim needs four bytes; reject absurd ndim before allocating.
    if (reader.remaining() / 4 < ndim) Truncated(index);
    record.shape.resize(ndim);
    for (std::uint32_t& d : record.shape) reader.ReadU32(d);
    std::size_t n = record.ElementCount();
    if (reader.remaining() / 4 < n) Truncated(index);
    record.data.resize(n);
    for (float& v : record.data) {
      std::uint32_t bits = 0;
      reader.ReadU32(bits);
      v = std::bit_cast<float>(bits);
    }
    ValidateRecord(record);
    if (!keys.insert(record.key).second) {
      Fail(ErrorCode::kDuplicateKey, "duplicate key '" + record.key + "'");
    }
    records.push_back(std::move(record));
  }
  if (reader.remaining() != 0) {
    Fail(ErrorCode::kParse, std::to_string(reader.remaining()) +
                                " trailing bytes after last record");
  }
  return records;
}

void WriteArchive(std::span<const TensorRecord> records,
                  const std::filesystem::path& path) {
  std::string bytes = EncodeArchive(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<TensorRecord> ReadArchive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  try {
    return DecodeArchive(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

FeatureStore FeatureStore::FromArchives(
    std::span<const std::filesystem::path> paths) {
  FeatureStore store;
  for (const auto& path : paths) {
    for (TensorRecord& record : ReadArchive(path)) store.Add(std::move(record));
  }
  return store;
}

void FeatureStore::Add(TensorRecord record) {
  std::string key = record.key;
  if (!records_.emplace(key, std::move(record)).second) {
    Fail(ErrorCode::kDuplicateKey, "duplicate key '" + key + "'");
  }
}

bool FeatureStore::Contains(std::string_view key) const {
  return records_.find(key) != records_.end();
}

const TensorRecord& FeatureStore::Get(std::string_view key) const {
  auto it = records_.find(key);
  if (it == records_.end()) {
    Fail(ErrorCode::kDanglingKey,
         "dangling archive key '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace mml

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

// Checkpoint container, all integers little-endian:
//
//   magic    8 bytes  "SKYCKPT\0"
//   version  u32      (currently 1)
//   count    u32      number of records
//   record:
//     name_len u32, name bytes (UTF-8, no terminator)
//     dtype    u8     1 = float32, 2 = float64
//     ndim     u8
//     extents  u64 x ndim
//     payload  numel x dtype size, little-endian IEEE-754

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "skycast/numcore/params.hpp"

namespace skycast::numcore {

inline constexpr std::array<char, 8> kCheckpointMagic{'S', 'K', 'Y', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class DType : std::uint8_t { f32 = 1, f64 = 2 };

/// One named array. The payload is kept as raw little-endian bytes so a
/// decode/encode cycle reproduces every bit, NaN payloads included.
struct ArrayRecord {
  std::string name;
  DType dtype = DType::f32;
  Shape shape;
  std::string payload;

  std::size_t element_size() const { return dtype == DType::f32 ? 4 : 8; }

  double value(std::size_t i) const {
    std::uint64_t v = 0;
    const std::size_t es = element_size();
    for (std::size_t b = 0; b < es; ++b)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(payload[i * es + b])) << (8 * b);
    return dtype == DType::f32 ? static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(v)))
                               : std::bit_cast<double>(v);
  }
};

namespace detail {

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(const std::string& buf) : buf_(buf) {}
  std::uint64_t le(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    auto s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw InputError("checkpoint truncated");
  }
  const std::string& buf_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode_checkpoint(const std::vector<ArrayRecord>& records) {
  std::string out(kCheckpointMagic.begin(), kCheckpointMagic.end());
  detail::put_le(out, kCheckpointVersion, 4);
  detail::put_le(out, records.size(), 4);
  for (const auto& r : records) {
    if (numel_of(r.shape) * r.element_size() != r.payload.size())
      throw ShapeError("checkpoint record '" + r.name + "' shape mismatch");
    detail::put_le(out, r.name.size(), 4);
    out += r.name;
    out.push_back(static_cast<char>(r.dtype));
    out.push_back(static_cast<char>(r.shape.size()));
    for (auto e : r.shape) detail::put_le(out, e, 8);
    out += r.payload;
  }
  return out;
}

inline std::vector<ArrayRecord> decode_checkpoint(const std::string& buf) {
  detail::ByteReader rd(buf);
  if (rd.bytes(8) != std::string(kCheckpointMagic.begin(), kCheckpointMagic.end()))
    throw InputError("not a checkpoint (bad magic)");
  const auto version = rd.le(4);
  if (version != kCheckpointVersion) throw InputError("unsupported checkpoint version " + std::to_string(version));
  const auto count = rd.le(4);
  std::vector<ArrayRecord> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ArrayRecord r;
    r.name = rd.bytes(rd.le(4));
    const auto tag = rd.le(1);
    if (tag != 1 && tag != 2) throw InputError("checkpoint record '" + r.name + "' has unknown dtype tag");
    r.dtype = static_cast<DType>(tag);
    const auto ndim = rd.le(1);
    for (std::uint64_t d = 0; d < ndim; ++d) r.shape.push_back(rd.le(8));
    r.payload = rd.bytes(numel_of(r.shape) * r.element_size());
    records.push_back(std::move(r));
  }
  if (!rd.done()) throw InputError("checkpoint has trailing bytes");
  return records;
}

template <typename T>
std::vector<ArrayRecord> to_records(const ParamSet<T>& params) {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  constexpr DType tag = sizeof(T) == 4 ? DType::f32 : DType::f64;
  std::vector<ArrayRecord> out;
  for (const auto& p : params.items()) {
    ArrayRecord r{p.name, tag, p.tensor.shape(), {}};
    r.payload.reserve(p.tensor.numel() * sizeof(T));
    for (T v : p.tensor.data()) detail::put_le(r.payload, std::bit_cast<Bits>(v), sizeof(T));
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

template <typename T>
void save_checkpoint(const ParamSet<T>& params, const std::filesystem::path& path) {
  write_file_bytes(path, encode_checkpoint(to_records(params)));
}

struct LoadSummary {
  std::size_t loaded = 0;
  std::vector<std::string> missing;     // in the model, absent from the file
  std::vector<std::string> unexpected;  // in the file, absent from the model
};

/// Copies records into parameters by name. Shape mismatches are errors;
/// name mismatches are reported.
template <typename T>
LoadSummary load_records(ParamSet<T>& params, const std::vector<ArrayRecord>& records) {
  LoadSummary s;
  std::vector<bool> used(records.size(), false);
  for (auto& p : params.items()) {
    bool found = false;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].name != p.name) continue;
      if (records[i].shape != p.tensor.shape())
        throw ShapeError("checkpoint '" + p.name + "' has shape " + shape_str(records[i].shape) + ", model expects " +
                         shape_str(p.tensor.shape()));
      auto dst = p.tensor.mutable_data();
      const bool same_width = records[i].element_size() == sizeof(T);
      for (std::size_t k = 0; k < dst.size(); ++k) {
        if (same_width) {
          using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
          Bits b = 0;
          for (std::size_t j = 0; j < sizeof(T); ++j)
            b |= static_cast<Bits>(static_cast<unsigned char>(records[i].payload[k * sizeof(T) + j])) << (8 * j);
          dst[k] = std::bit_cast<T>(b);
        } else {
          dst[k] = static_cast<T>(records[i].value(k));
        }
      }
      used[i] = true;
      found = true;
      ++s.loaded;
      break;
    }
    if (!found) s.missing.push_back(p.name);
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!used[i]) s.unexpected.push_back(records[i].name);
  return s;
}

template <typename T>
LoadSummary load_checkpoint(ParamSet<T>& params, const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingPrerequisite("checkpoint not found: " + path.string());
  return load_records(params, decode_checkpoint(read_file_bytes(path)));
}

}  // namespace skycast::numcore

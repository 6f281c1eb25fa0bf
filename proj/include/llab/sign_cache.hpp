#pragma once

// Binary cache for sign sequences.
//
// Layout (all integers little-endian):
//   bytes 0-3   magic "LLAB"
//   bytes 4-5   version (u16, currently 1)
//   bytes 6-7   flags (u16, bit 0 set when the first index is signed)
//   bytes 8-15  first index (u64, two's complement if flag bit 0)
//   bytes 16-23 number of signs (u64)
//   then ceil(count / 8) bytes, one bit per sign, LSB first; bit 1 = -1.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "llab/error.hpp"

namespace llab {

inline constexpr std::uint16_t kSignCacheVersion = 1;
inline constexpr std::uint16_t kSignCacheSignedStart = 1;

struct SignSequence {
  std::int64_t start = 1;
  std::vector<std::int8_t> signs;
  friend bool operator==(const SignSequence&, const SignSequence&) = default;
};

namespace detail {

inline void put_le(std::ostream& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xff));
}

inline std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) fail(ErrorKind::FormatError, "truncated sign cache");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
  }
  return value;
}

}  // namespace detail

inline void write_sign_cache(std::ostream& out, const SignSequence& seq) {
  out.write("LLAB", 4);
  detail::put_le(out, kSignCacheVersion, 2);
  detail::put_le(out, seq.start < 0 ? kSignCacheSignedStart : 0, 2);
  detail::put_le(out, static_cast<std::uint64_t>(seq.start), 8);
  detail::put_le(out, seq.signs.size(), 8);
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < seq.signs.size(); ++i) {
    if (seq.signs[i] < 0) byte |= static_cast<std::uint8_t>(1u << (i % 8));
    if (i % 8 == 7) {
      out.put(static_cast<char>(byte));
      byte = 0;
    }
  }
  if (seq.signs.size() % 8 != 0) out.put(static_cast<char>(byte));
}

inline SignSequence read_sign_cache(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::string(magic.data(), 4) != "LLAB") fail(ErrorKind::FormatError, "bad sign cache magic");
  const auto version = detail::get_le(in, 2);
  if (version != kSignCacheVersion) fail(ErrorKind::FormatError, "unsupported sign cache version");
  detail::get_le(in, 2);  // flags only describe how the start was written
  SignSequence seq;
  seq.start = static_cast<std::int64_t>(detail::get_le(in, 8));
  const auto count = detail::get_le(in, 8);
  seq.signs.resize(count);
  for (std::uint64_t i = 0; i < count; i += 8) {
    const auto byte = detail::get_le(in, 1);
    for (std::uint64_t j = i; j < std::min<std::uint64_t>(count, i + 8); ++j)
      seq.signs[j] = (byte >> (j - i)) & 1 ? -1 : 1;
  }
  return seq;
}

}  // namespace llab

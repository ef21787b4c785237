#pragma once

// Little-endian primitive readers/writers shared by the recording, hypervector
// and model file formats. Readers report truncation with the name of the field
// being read.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "hdsz/error.hpp"

namespace hdsz::io {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
  requires std::is_integral_v<T>
void WriteLe(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto bits = static_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
  requires std::is_integral_v<T>
T ReadLe(std::istream& in, std::string_view field) {
  using U = std::make_unsigned_t<T>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw DataError("truncated input while reading " + std::string(field));
  }
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<U>(static_cast<U>(bytes[i]) << (8 * i));
  }
  return static_cast<T>(bits);
}

inline void WriteMagic(std::ostream& out, std::string_view magic) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void ExpectMagic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  in.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (in.gcount() != static_cast<std::streamsize>(got.size())) {
    throw DataError("truncated input while reading magic");
  }
  if (got != magic) {
    throw DataError("bad magic: expected \"" + std::string(magic) + "\"");
  }
}

}  // namespace hdsz::io

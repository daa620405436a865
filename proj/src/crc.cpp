#include "decodex/crc.hpp"

#include <array>

#include "decodex/error.hpp"

namespace decodex {

namespace {

using Table = std::array<std::uint32_t, 256>;

constexpr Table make_table(std::uint32_t poly) {
  Table t{};
  for (std::uint32_t byte = 0; byte < 256; ++byte) {
    std::uint32_t reg = byte << 16;
    for (int i = 0; i < 8; ++i) {
      reg = (reg & 0x800000) ? ((reg << 1) ^ poly) : (reg << 1);
    }
    t[byte] = reg & 0xFFFFFF;
  }
  return t;
}

constexpr Table kTableA = make_table(kCrc24APoly);
constexpr Table kTableB = make_table(kCrc24BPoly);

}  // namespace

std::uint32_t crc24(std::span<const Bit> bits, CrcVariant variant) {
  if (bits.empty()) throw ArgumentError("crc24: empty input");
  const Table& table = variant == CrcVariant::a ? kTableA : kTableB;
  const std::uint32_t poly = variant == CrcVariant::a ? kCrc24APoly : kCrc24BPoly;

  std::uint32_t reg = 0;
  std::size_t i = 0;
  for (; i + 8 <= bits.size(); i += 8) {
    std::uint32_t byte = 0;
    for (int j = 0; j < 8; ++j) byte = (byte << 1) | (bits[i + j] & 1u);
    reg = ((reg << 8) ^ table[((reg >> 16) ^ byte) & 0xFF]) & 0xFFFFFF;
  }
  for (; i < bits.size(); ++i) {
    const std::uint32_t top = ((reg >> 23) ^ (bits[i] & 1u)) & 1u;
    reg = (reg << 1) & 0xFFFFFF;
    if (top) reg ^= poly;
  }
  return reg;
}

void attach_crc24(BitVector& bits, CrcVariant variant) {
  const std::uint32_t crc = crc24(bits, variant);
  for (int i = kCrcBits - 1; i >= 0; --i) bits.push_back(static_cast<Bit>((crc >> i) & 1u));
}

bool check_crc24(std::span<const Bit> bits_with_crc, CrcVariant variant) {
  if (bits_with_crc.size() <= static_cast<std::size_t>(kCrcBits)) {
    throw ArgumentError("check_crc24: input shorter than the CRC");
  }
  const auto body = bits_with_crc.first(bits_with_crc.size() - kCrcBits);
  const std::uint32_t crc = crc24(body, variant);
  for (int i = 0; i < kCrcBits; ++i) {
    if (((crc >> (kCrcBits - 1 - i)) & 1u) != (bits_with_crc[body.size() + i] & 1u)) return false;
  }
  return true;
}

}  // namespace decodex

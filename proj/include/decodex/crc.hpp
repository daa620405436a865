#pragma once

#include <cstdint>
#include <span>

#include "decodex/ldpc.hpp"

namespace decodex {

// 3GPP 24-bit CRCs: zero initial state, no final XOR, MSB-first.
enum class CrcVariant { a, b };

inline constexpr std::uint32_t kCrc24APoly = 0x864CFB;
inline constexpr std::uint32_t kCrc24BPoly = 0x800063;
inline constexpr int kCrcBits = 24;

std::uint32_t crc24(std::span<const Bit> bits, CrcVariant variant);

// Appends the 24 CRC bits (MSB first) to `bits`.
void attach_crc24(BitVector& bits, CrcVariant variant);

// True iff the trailing 24 bits equal the CRC of the preceding bits.
bool check_crc24(std::span<const Bit> bits_with_crc, CrcVariant variant);

}  // namespace decodex

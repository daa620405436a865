#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "decodex/ldpc.hpp"

namespace decodex {

inline constexpr int kTbCrcBits = 24;
inline constexpr int kCbCrcBits = 24;
inline constexpr int kMaxCbBitsBg1 = 8448;
inline constexpr int kMaxCbBitsBg2 = 3840;
// Largest single-layer TB this library segments (guards C * K_cb growth).
inline constexpr long kMaxTbBits = 1277992;

// Entry of the 64QAM MCS table (rate = rate_num / 1024).
struct McsEntry {
  int index = 0;
  int qm = 2;
  int rate_num = 0;

  double rate() const { return rate_num / 1024.0; }
  friend bool operator==(const McsEntry&, const McsEntry&) = default;
};

inline constexpr int kMaxMcsIndex = 27;

std::span<const McsEntry> mcs_table();
McsEntry mcs_lookup(int index);
// Parses the `index,qm,rate_num` CSV format of the bundled table.
std::vector<McsEntry> parse_mcs_table(std::string_view csv);

// Simplified TB size: 12 subcarriers x 13 data symbols per PRB, one layer,
// byte-aligned and floored at 24 bits.
long compute_tb_size(int prb, const McsEntry& mcs);

BaseGraphId select_base_graph(long payload_bits, double target_rate);

struct SegmentationPlan {
  BaseGraphId bg = BaseGraphId::bg1;
  int c = 1;            // number of code blocks
  int k_prime = 0;      // bits per CB before filler, CB-CRC included
  int cb_crc_bits = 0;  // 24 when c > 1
  int kb = 0;
  int zc = 0;
  std::vector<CodeBlockParams> params;  // e set to the full buffer length

  int payload_per_cb() const { return k_prime - cb_crc_bits; }
};

// `payload_bits` excludes the TB CRC, which is accounted for internally.
SegmentationPlan segment(long payload_bits, BaseGraphId bg);

// Circular-buffer read order: codeword indices [2*zc, n_full) with known-zero
// positions removed. rate_match reads it from k0 = 0 and wraps.
std::vector<int> circular_buffer_positions(const CodeBlockParams& params);

BitVector rate_match(std::span<const Bit> codeword, const CodeBlockParams& params);
LlrBlock rate_dematch(std::span<const Llr> llrs, const CodeBlockParams& params);

}  // namespace decodex

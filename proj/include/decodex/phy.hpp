#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "decodex/ldpc.hpp"

namespace decodex {

using Sample = std::complex<double>;

struct SymbolBlock {
  std::vector<Sample> samples;
  int qm = 2;
};

// Gray-mapped QPSK/16/64/256QAM with unit average energy. Bits are
// zero-padded to a multiple of qm.
SymbolBlock modulate(std::span<const Bit> bits, int qm);

// Per-complex-symbol SNR (Es/N0). An infinite snr_db disables the noise.
struct ChannelConfig {
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  bool noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
  double noise_variance() const;  // 10^(-snr_db/10), split evenly over I and Q
};

SymbolBlock transmit(const SymbolBlock& symbols, const ChannelConfig& channel);

// Scale from natural-log LLR units to the 8-bit integer range; QPSK at 10 dB
// lands near +-64.
inline constexpr double kLlrQuantGain = 3.2;

// Max-log soft demapper; returns qm LLRs per symbol, positive meaning bit 0.
LlrBlock demap_llr(const SymbolBlock& symbols, int qm, double sigma2);

// Unquantized max-log LLRs, exposed for tests.
std::vector<double> demap_llr_float(const SymbolBlock& symbols, int qm, double sigma2);

}  // namespace decodex

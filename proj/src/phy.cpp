#include "decodex/phy.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "decodex/error.hpp"

namespace decodex {

namespace {

double norm_for(int qm) {
  switch (qm) {
    case 2: return 1.0 / std::sqrt(2.0);
    case 4: return 1.0 / std::sqrt(10.0);
    case 6: return 1.0 / std::sqrt(42.0);
    case 8: return 1.0 / std::sqrt(170.0);
    default: throw ArgumentError("unsupported modulation order qm=" + std::to_string(qm));
  }
}

// Amplitude of one axis from its m bits (c[0] is the sign bit).
double axis_amplitude(const int* c, int m) {
  int t = 1;
  for (int j = m - 1; j >= 1; --j) t = (1 << (m - j)) - (1 - 2 * c[j]) * t;
  return (1 - 2 * c[0]) * t;
}

// Levels of one axis indexed by the pattern whose bit j is c[j].
std::vector<double> axis_levels(int qm) {
  const int m = qm / 2;
  const double norm = norm_for(qm);
  std::vector<double> levels(1u << m);
  for (unsigned pattern = 0; pattern < levels.size(); ++pattern) {
    std::array<int, 4> c{};
    for (int j = 0; j < m; ++j) c[j] = (pattern >> j) & 1;
    levels[pattern] = axis_amplitude(c.data(), m) * norm;
  }
  return levels;
}

}  // namespace

SymbolBlock modulate(std::span<const Bit> bits, int qm) {
  const auto levels = axis_levels(qm);
  const int m = qm / 2;
  SymbolBlock out;
  out.qm = qm;
  const std::size_t count = (bits.size() + qm - 1) / qm;
  out.samples.resize(count);
  auto bit_at = [&](std::size_t i) -> unsigned { return i < bits.size() ? (bits[i] & 1u) : 0u; };
  for (std::size_t s = 0; s < count; ++s) {
    unsigned pi = 0, pq = 0;
    for (int j = 0; j < m; ++j) {
      pi |= bit_at(s * qm + 2 * j) << j;
      pq |= bit_at(s * qm + 2 * j + 1) << j;
    }
    out.samples[s] = {levels[pi], levels[pq]};
  }
  return out;
}

double ChannelConfig::noise_variance() const { return std::pow(10.0, -snr_db / 10.0); }

SymbolBlock transmit(const SymbolBlock& symbols, const ChannelConfig& channel) {
  SymbolBlock out = symbols;
  if (channel.noiseless()) return out;
  if (!std::isfinite(channel.snr_db)) throw ArgumentError("transmit: snr_db must be finite or +inf");
  std::mt19937_64 rng(channel.seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(channel.noise_variance() / 2.0));
  for (auto& s : out.samples) {
    const double ni = noise(rng);
    const double nq = noise(rng);
    s += Sample(ni, nq);
  }
  return out;
}

std::vector<double> demap_llr_float(const SymbolBlock& symbols, int qm, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("demap_llr: sigma2 must be positive");
  const auto levels = axis_levels(qm);
  const int m = qm / 2;
  std::vector<double> out(symbols.samples.size() * static_cast<std::size_t>(qm));
  std::array<double, 16> dist{};
  auto axis = [&](double y, double* llr_out) {
    for (std::size_t p = 0; p < levels.size(); ++p) {
      const double d = y - levels[p];
      dist[p] = d * d;
    }
    for (int j = 0; j < m; ++j) {
      double min0 = INFINITY, min1 = INFINITY;
      for (std::size_t p = 0; p < levels.size(); ++p) {
        if ((p >> j) & 1u) min1 = std::min(min1, dist[p]);
        else min0 = std::min(min0, dist[p]);
      }
      llr_out[2 * j] = (min1 - min0) / sigma2;
    }
  };
  for (std::size_t s = 0; s < symbols.samples.size(); ++s) {
    double* dst = out.data() + s * qm;
    axis(symbols.samples[s].real(), dst);
    axis(symbols.samples[s].imag(), dst + 1);
  }
  return out;
}

LlrBlock demap_llr(const SymbolBlock& symbols, int qm, double sigma2) {
  const auto soft = demap_llr_float(symbols, qm, sigma2);
  LlrBlock out(soft.size());
  for (std::size_t i = 0; i < soft.size(); ++i) {
    const double scaled = soft[i] * kLlrQuantGain;
    out[i] = scaled >= kLlrMax ? kLlrMax
             : scaled <= -kLlrMax ? static_cast<Llr>(-kLlrMax)
                                  : static_cast<Llr>(std::lround(scaled));
  }
  return out;
}

}  // namespace decodex

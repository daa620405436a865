#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "decodex/error.hpp"
#include "decodex/ldpc.hpp"

namespace decodex {

namespace {

constexpr int kPosteriorMax = 32000;

inline std::int16_t sat(int v) { return static_cast<std::int16_t>(std::clamp(v, -kLlrMax, kLlrMax)); }

inline std::int16_t sat_posterior(int v) {
  return static_cast<std::int16_t>(std::clamp(v, -kPosteriorMax, kPosteriorMax));
}

}  // namespace

DecodeResult decode_layered_minsum(std::span<const Llr> llr, const ParityCheckMatrix& h, int k,
                                   const DecoderOptions& options, BitVector* full_hard_decision) {
  const int n = h.cols();
  const int zc = h.zc();
  if (llr.size() != static_cast<std::size_t>(n)) {
    throw ArgumentError("decode: LLR block length " + std::to_string(llr.size()) + " != " + std::to_string(n));
  }
  if (options.max_iterations < 1) throw ArgumentError("decode: max_iterations must be >= 1");
  if (!(options.norm_factor > 0.0 && options.norm_factor <= 1.0)) {
    throw ArgumentError("decode: norm_factor must be in (0, 1]");
  }
  if (k < 0 || k > n) throw ArgumentError("decode: k out of range");

  // Q8 fixed-point scaling; 0.75 is exactly 192/256.
  const int scale = std::clamp(static_cast<int>(std::lround(options.norm_factor * 256.0)), 1, 256);

  std::vector<std::int16_t> posterior(llr.begin(), llr.end());
  for (auto& v : posterior) v = sat(v);
  std::vector<std::int16_t> messages(h.block_count() * zc, 0);
  std::vector<std::int16_t> q(h.max_layer_degree() * zc);
  std::vector<std::int16_t> min1(zc), min2(zc);
  std::vector<std::int16_t> min_idx(zc);
  std::vector<std::uint8_t> sign(zc);
  BitVector hard(n, 0);

  DecodeResult result;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    std::size_t msg_off = 0;
    for (int r = 0; r < h.base_rows(); ++r) {
      const auto blocks = h.layer(r);
      std::fill(min1.begin(), min1.end(), std::int16_t{32767});
      std::fill(min2.begin(), min2.end(), std::int16_t{32767});
      std::fill(min_idx.begin(), min_idx.end(), std::int16_t{0});
      std::fill(sign.begin(), sign.end(), std::uint8_t{0});

      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        const std::int16_t* col = posterior.data() + static_cast<std::size_t>(b.col) * zc;
        const std::int16_t* rmsg = messages.data() + (msg_off + bi) * zc;
        std::int16_t* qb = q.data() + bi * zc;
        const int head = zc - b.shift;
        for (int z = 0; z < head; ++z) qb[z] = sat_posterior(col[z + b.shift] - rmsg[z]);
        for (int z = head; z < zc; ++z) qb[z] = sat_posterior(col[z - head] - rmsg[z]);
        const auto idx = static_cast<std::int16_t>(bi);
        for (int z = 0; z < zc; ++z) {
          const std::int16_t a = static_cast<std::int16_t>(std::abs(qb[z]));
          sign[z] ^= static_cast<std::uint8_t>(qb[z] < 0);
          const bool below = a < min1[z];
          min2[z] = std::min(min2[z], std::max(min1[z], a));
          min_idx[z] = below ? idx : min_idx[z];
          min1[z] = std::min(min1[z], a);
        }
      }

      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        std::int16_t* col = posterior.data() + static_cast<std::size_t>(b.col) * zc;
        std::int16_t* rmsg = messages.data() + (msg_off + bi) * zc;
        const std::int16_t* qb = q.data() + bi * zc;
        const auto idx = static_cast<std::int16_t>(bi);
        for (int z = 0; z < zc; ++z) {
          const int mag = ((min_idx[z] == idx ? min2[z] : min1[z]) * scale) >> 8;
          const bool neg = (sign[z] ^ static_cast<std::uint8_t>(qb[z] < 0)) != 0;
          rmsg[z] = sat(neg ? -mag : mag);
        }
        const int head = zc - b.shift;
        for (int z = 0; z < head; ++z) col[z + b.shift] = sat_posterior(qb[z] + rmsg[z]);
        for (int z = head; z < zc; ++z) col[z - head] = sat_posterior(qb[z] + rmsg[z]);
      }
      msg_off += blocks.size();
    }

    for (int i = 0; i < n; ++i) hard[i] = posterior[i] < 0 ? 1 : 0;
    result.iterations_used = iter;
    if (options.early_termination && syndrome_check(h, hard)) {
      result.converged = true;
      break;
    }
  }
  if (!options.early_termination) result.converged = syndrome_check(h, hard);

  result.bits.assign(hard.begin(), hard.begin() + k);
  if (full_hard_decision) *full_hard_decision = std::move(hard);
  return result;
}

DecodeResult decode_layered_minsum(std::span<const Llr> llr, const CodeBlockParams& params,
                                   const DecoderOptions& options) {
  validate(params);
  if (llr.size() != static_cast<std::size_t>(params.n_full)) {
    throw ArgumentError("decode: LLR block length " + std::to_string(llr.size()) + " != n_full " +
                        std::to_string(params.n_full));
  }
  return decode_layered_minsum(llr, *lifted_matrix(params.bg, params.zc), params.k, options);
}

DecodeResult decode_layered_minsum(std::span<const Llr> llr, const CodeBlockParams& params, int max_iterations,
                                   double norm_factor) {
  DecoderOptions options;
  options.max_iterations = max_iterations;
  options.norm_factor = norm_factor;
  return decode_layered_minsum(llr, params, options);
}

}  // namespace decodex

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "decodex/base_graph.hpp"

namespace decodex {

using Bit = std::uint8_t;  // 0 or 1
using BitVector = std::vector<Bit>;

// Signed 8-bit saturating log-likelihood ratio, positive means bit 0.
using Llr = std::int8_t;
using LlrBlock = std::vector<Llr>;
inline constexpr int kLlrMax = 127;

constexpr Llr saturate_llr(int v) {
  return static_cast<Llr>(v > kLlrMax ? kLlrMax : (v < -kLlrMax ? -kLlrMax : v));
}

// Coding configuration of one code block.
//
// Codeword layout (length n_full): systematic base columns first. Positions
// [k_prime, k) are filler bits, and for BG2 with kb < 10 the systematic columns
// [k, info_cols*zc) are shortened. Both are known zeros: the encoder expects
// them zeroed, rate matching skips them, de-matching writes +127.
struct CodeBlockParams {
  BaseGraphId bg = BaseGraphId::bg1;
  int zc = 0;
  int set_index = 0;
  int kb = 0;        // systematic base columns carrying payload (k = kb * zc)
  int k = 0;
  int k_prime = 0;   // payload + CB-CRC bits
  int n_full = 0;
  int n_cb = 0;      // n_full - 2 * zc
  int n_filler = 0;  // k - k_prime
  int e = 0;         // rate-matched length

  int info_cols() const;
  int n_shortened() const { return info_cols() * zc - k; }
  // Number of bits in the circular buffer once known-zero positions are removed.
  int buffer_bits() const { return n_cb - n_filler - n_shortened(); }
  bool is_known_zero(int pos) const { return pos >= k_prime && pos < info_cols() * zc; }

  friend bool operator==(const CodeBlockParams&, const CodeBlockParams&) = default;
};

// Full-codeword parameters for a base graph and lifting size without filler
// (k_prime = k = info_cols * zc, e = buffer length).
CodeBlockParams make_code_params(BaseGraphId bg, int zc);

// Throws ConfigError if the invariants of CodeBlockParams do not hold.
void validate(const CodeBlockParams& params);

struct CirculantBlock {
  int col = 0;
  int shift = 0;  // already reduced mod zc
};

// Lifted parity-check matrix kept as one layer per base-graph row. Layer r,
// block (col, s) connects check r*zc + z with variable col*zc + (z + s) mod zc.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix(BaseGraphId bg, int base_rows, int base_cols, int info_cols, int zc,
                    std::vector<std::vector<CirculantBlock>> layers);

  BaseGraphId graph() const { return bg_; }
  int zc() const { return zc_; }
  int base_rows() const { return base_rows_; }
  int base_cols() const { return base_cols_; }
  int info_cols() const { return info_cols_; }
  int rows() const { return base_rows_ * zc_; }
  int cols() const { return base_cols_ * zc_; }
  std::span<const CirculantBlock> layer(int r) const { return layers_[r]; }
  std::size_t block_count() const { return block_count_; }
  std::size_t max_layer_degree() const { return max_degree_; }

  // Element access on the lifted matrix (slow; for tests and tooling).
  bool at(int row, int col) const;

 private:
  BaseGraphId bg_;
  int base_rows_;
  int base_cols_;
  int info_cols_;
  int zc_;
  std::vector<std::vector<CirculantBlock>> layers_;
  std::size_t block_count_ = 0;
  std::size_t max_degree_ = 0;
};

ParityCheckMatrix expand_base_graph(const BaseGraph& graph, int zc, int set_index);

// Shared, immutable lifted matrix for (bg, zc); built once per process.
std::shared_ptr<const ParityCheckMatrix> lifted_matrix(BaseGraphId bg, int zc);

bool syndrome_check(const ParityCheckMatrix& h, std::span<const Bit> codeword);

// Systematic QC-LDPC encoder: solves the 4-row core by a precomputed GF(2)
// inverse, then each extension row's single degree-one parity block directly.
class Encoder {
 public:
  explicit Encoder(std::shared_ptr<const ParityCheckMatrix> h);

  // `info` holds the first info_cols*zc codeword bits (shortened tail may be
  // omitted). Returns the full n_full codeword.
  BitVector encode(std::span<const Bit> info) const;
  const ParityCheckMatrix& matrix() const { return *h_; }

 private:
  std::shared_ptr<const ParityCheckMatrix> h_;
  int core_size_ = 0;                          // lifted core dimension, 4*zc
  std::vector<std::vector<std::uint64_t>> core_inverse_;  // rows of the inverse
};

std::shared_ptr<const Encoder> encoder_for(BaseGraphId bg, int zc);

// Encodes k = kb*zc info bits (filler positions zeroed) into n_full bits.
BitVector encode(std::span<const Bit> info_bits, const CodeBlockParams& params);

struct DecodeResult {
  BitVector bits;  // hard decisions of the first k codeword positions
  int iterations_used = 0;
  bool converged = false;

  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

struct DecoderOptions {
  int max_iterations = 20;
  double norm_factor = 0.75;
  bool early_termination = true;  // false forces exactly max_iterations sweeps
};

// Layered normalized min-sum over base-graph rows 0..rows-1, with a syndrome
// check after every sweep. Posteriors accumulate in saturating int16; check
// messages are re-saturated to the 8-bit LLR range on write-back.
DecodeResult decode_layered_minsum(std::span<const Llr> llr, const CodeBlockParams& params,
                                   int max_iterations, double norm_factor);
DecodeResult decode_layered_minsum(std::span<const Llr> llr, const CodeBlockParams& params,
                                   const DecoderOptions& options);
DecodeResult decode_layered_minsum(std::span<const Llr> llr, const ParityCheckMatrix& h, int k,
                                   const DecoderOptions& options, BitVector* full_hard_decision = nullptr);

}  // namespace decodex

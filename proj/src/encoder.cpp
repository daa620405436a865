#include <bit>
#include <map>
#include <mutex>
#include <string>

#include "decodex/error.hpp"
#include "decodex/ldpc.hpp"

namespace decodex {

namespace {

constexpr int kCoreRows = 4;

using Row = std::vector<std::uint64_t>;

inline void set_bit(Row& row, int i) { row[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline bool get_bit(const Row& row, int i) { return (row[i >> 6] >> (i & 63)) & 1; }

// Gauss-Jordan inversion over GF(2); throws if the core is singular.
std::vector<Row> invert(std::vector<Row> m, int n) {
  const int words = (n + 63) / 64;
  std::vector<Row> inv(n, Row(words, 0));
  for (int i = 0; i < n; ++i) set_bit(inv[i], i);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (get_bit(m[r], col)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw ConfigError("LDPC encoder: parity core is singular");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    for (int r = 0; r < n; ++r) {
      if (r != col && get_bit(m[r], col)) {
        for (int w = 0; w < words; ++w) {
          m[r][w] ^= m[col][w];
          inv[r][w] ^= inv[col][w];
        }
      }
    }
  }
  return inv;
}

}  // namespace

Encoder::Encoder(std::shared_ptr<const ParityCheckMatrix> h) : h_(std::move(h)) {
  const auto& H = *h_;
  const int zc = H.zc();
  const int info = H.info_cols();
  if (H.base_rows() < kCoreRows || H.base_cols() - info != H.base_rows()) {
    throw ConfigError("LDPC encoder: base graph lacks a 4-row parity core");
  }
  for (int r = kCoreRows; r < H.base_rows(); ++r) {
    int ext = 0;
    for (const auto& b : H.layer(r)) {
      if (b.col >= info + kCoreRows) {
        ++ext;
        if (b.col != info + r) throw ConfigError("LDPC encoder: extension row is not lower-triangular");
      }
    }
    if (ext != 1) throw ConfigError("LDPC encoder: extension row needs exactly one new parity block");
  }

  core_size_ = kCoreRows * zc;
  const int words = (core_size_ + 63) / 64;
  std::vector<Row> core(core_size_, Row(words, 0));
  for (int r = 0; r < kCoreRows; ++r) {
    for (const auto& b : H.layer(r)) {
      if (b.col < info) continue;
      if (b.col >= info + kCoreRows) throw ConfigError("LDPC encoder: core row touches extension parity");
      const int base = (b.col - info) * zc;
      for (int z = 0; z < zc; ++z) set_bit(core[r * zc + z], base + (z + b.shift) % zc);
    }
  }
  core_inverse_ = invert(std::move(core), core_size_);
}

BitVector Encoder::encode(std::span<const Bit> info_bits) const {
  const auto& H = *h_;
  const int zc = H.zc();
  const int info = H.info_cols();
  const std::size_t sys_len = static_cast<std::size_t>(info) * zc;
  if (info_bits.size() > sys_len) {
    throw ArgumentError("encode: " + std::to_string(info_bits.size()) + " info bits exceed " +
                        std::to_string(sys_len));
  }
  BitVector c(static_cast<std::size_t>(H.cols()), 0);
  for (std::size_t i = 0; i < info_bits.size(); ++i) c[i] = info_bits[i] & 1;

  auto accumulate = [&](int row, int skip_from_col, Bit* acc) {
    for (const auto& b : H.layer(row)) {
      if (b.col >= skip_from_col) continue;
      const Bit* src = c.data() + static_cast<std::size_t>(b.col) * zc;
      for (int z = 0; z < zc; ++z) {
        int v = z + b.shift;
        if (v >= zc) v -= zc;
        acc[z] ^= src[v];
      }
    }
  };

  // Core parity from the systematic part.
  const int words = (core_size_ + 63) / 64;
  Row lambda(words, 0);
  std::vector<Bit> acc(zc);
  for (int r = 0; r < kCoreRows; ++r) {
    std::fill(acc.begin(), acc.end(), 0);
    accumulate(r, info, acc.data());
    for (int z = 0; z < zc; ++z) {
      if (acc[z]) set_bit(lambda, r * zc + z);
    }
  }
  Bit* core_out = c.data() + sys_len;
  for (int i = 0; i < core_size_; ++i) {
    const auto& row = core_inverse_[i];
    int ones = 0;
    for (int w = 0; w < words; ++w) ones += std::popcount(row[w] & lambda[w]);
    core_out[i] = static_cast<Bit>(ones & 1);
  }

  // Extension rows: one identity-like block each, solved in row order.
  for (int r = kCoreRows; r < H.base_rows(); ++r) {
    const int ext_col = info + r;
    int ext_shift = 0;
    for (const auto& b : H.layer(r)) {
      if (b.col == ext_col) ext_shift = b.shift;
    }
    std::fill(acc.begin(), acc.end(), 0);
    accumulate(r, ext_col, acc.data());
    Bit* dst = c.data() + static_cast<std::size_t>(ext_col) * zc;
    for (int z = 0; z < zc; ++z) dst[(z + ext_shift) % zc] = acc[z];
  }
  return c;
}

std::shared_ptr<const Encoder> encoder_for(BaseGraphId bg, int zc) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const Encoder>> cache;
  const auto key = std::make_pair(static_cast<int>(bg), zc);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto enc = std::make_shared<const Encoder>(lifted_matrix(bg, zc));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(enc)).first->second;
}

BitVector encode(std::span<const Bit> info_bits, const CodeBlockParams& params) {
  validate(params);
  if (info_bits.size() != static_cast<std::size_t>(params.k)) {
    throw ArgumentError("encode: expected " + std::to_string(params.k) + " info bits, got " +
                        std::to_string(info_bits.size()));
  }
  for (int i = params.k_prime; i < params.k; ++i) {
    if (info_bits[i]) throw ArgumentError("encode: filler bit " + std::to_string(i) + " is not zero");
  }
  return encoder_for(params.bg, params.zc)->encode(info_bits);
}

}  // namespace decodex

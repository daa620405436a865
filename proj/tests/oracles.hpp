#pragma once

// Reference computations used only by tests. They work from first principles
// (raw table entries, textbook formulas) and never call the code under test
// for the quantity being checked.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "decodex/base_graph.hpp"
#include "decodex/ldpc.hpp"

namespace oracle {

using decodex::Bit;
using decodex::BitVector;

// Bit-serial GF(2) long division of msg * x^24 by the 25-bit generator.
inline std::uint32_t crc24_long_division(const BitVector& msg, std::uint32_t poly) {
  std::vector<int> dividend(msg.begin(), msg.end());
  dividend.resize(msg.size() + 24, 0);
  std::vector<int> gen(25);
  gen[0] = 1;
  for (int i = 0; i < 24; ++i) gen[1 + i] = (poly >> (23 - i)) & 1;
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (dividend[i] == 0) continue;
    for (int j = 0; j < 25; ++j) dividend[i + j] ^= gen[j];
  }
  std::uint32_t rem = 0;
  for (std::size_t i = msg.size(); i < dividend.size(); ++i) rem = (rem << 1) | static_cast<std::uint32_t>(dividend[i]);
  return rem;
}

// Check rows of the lifted matrix built straight from raw table entries:
// block (r, c) with coefficient V is the identity shifted right by V mod zc.
inline std::vector<std::vector<int>> lifted_rows(const decodex::BaseGraph& g, int zc, int set_index) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(g.rows * zc));
  for (const auto& e : g.entries) {
    const int v = e.shift[set_index] % zc;
    for (int z = 0; z < zc; ++z) rows[e.row * zc + z].push_back(e.col * zc + (z + v) % zc);
  }
  return rows;
}

inline bool syndrome_zero(const std::vector<std::vector<int>>& rows, const BitVector& c) {
  for (const auto& row : rows) {
    int parity = 0;
    for (int col : row) parity ^= c[col];
    if (parity != 0) return false;
  }
  return true;
}

// All codewords of a code with n <= 64 as bit masks: nullspace of H by
// Gauss-Jordan elimination, then every combination of the basis.
inline std::vector<std::uint64_t> codebook(const std::vector<std::vector<int>>& rows, int n) {
  std::vector<std::uint64_t> h;
  for (const auto& row : rows) {
    std::uint64_t m = 0;
    for (int c : row) m ^= std::uint64_t{1} << c;
    h.push_back(m);
  }
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < h.size(); ++col) {
    std::size_t p = rank;
    while (p < h.size() && !((h[p] >> col) & 1)) ++p;
    if (p == h.size()) continue;
    std::swap(h[p], h[rank]);
    for (std::size_t r = 0; r < h.size(); ++r) {
      if (r != rank && ((h[r] >> col) & 1)) h[r] ^= h[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::uint64_t> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (std::size_t r = 0; r < rank; ++r) {
      if ((h[r] >> f) & 1) v |= std::uint64_t{1} << pivot_col[r];
    }
    basis.push_back(v);
  }
  std::vector<std::uint64_t> words(std::size_t{1} << basis.size(), 0);
  for (std::size_t m = 1; m < words.size(); ++m) {
    const int low = std::countr_zero(m);
    words[m] = words[m & (m - 1)] ^ basis[low];
  }
  return words;
}

// Nearest codeword; `unique` is false on ties.
struct MlDecision {
  std::uint64_t word = 0;
  int distance = 0;
  bool unique = false;
};
inline MlDecision ml_decode(const std::vector<std::uint64_t>& book, std::uint64_t received) {
  MlDecision d{0, 65, false};
  for (auto w : book) {
    const int dist = std::popcount(w ^ received);
    if (dist < d.distance) {
      d = {w, dist, true};
    } else if (dist == d.distance) {
      d.unique = false;
    }
  }
  return d;
}

// Lifting sizes enumerated from Zc = a * 2^j, sorted, then scanned.
inline int smallest_lifting_size(int kb, int k_prime) {
  std::vector<int> sizes;
  for (int a : {2, 3, 5, 7, 9, 11, 13, 15}) {
    for (int z = a; z <= 384; z *= 2) sizes.push_back(z);
  }
  std::sort(sizes.begin(), sizes.end());
  for (int z : sizes) {
    if (kb * z >= k_prime) return z;
  }
  return -1;
}

struct Segmentation {
  int c = 0;
  int k_prime = 0;
  int kb = 0;
  int zc = 0;
  int n_filler = 0;
};
// Segmentation by the textbook formulas.
inline Segmentation segment(long b, bool bg1) {
  const long kcb = bg1 ? 8448 : 3840;
  Segmentation s;
  const long with_crc = b + 24;
  s.c = with_crc <= kcb ? 1 : static_cast<int>((with_crc + (kcb - 24) - 1) / (kcb - 24));
  const long total = with_crc + (s.c > 1 ? 24L * s.c : 0L);
  s.k_prime = static_cast<int>((total + s.c - 1) / s.c);
  if (bg1) s.kb = 22;
  else s.kb = b > 640 ? 10 : b > 560 ? 9 : b > 192 ? 8 : 6;
  s.zc = smallest_lifting_size(s.kb, s.k_prime);
  s.n_filler = s.kb * s.zc - s.k_prime;
  return s;
}

// Rate-match by walking codeword indices: skip the first 2*zc and every
// known-zero index, read circularly.
inline BitVector rate_match_walk(const BitVector& codeword, int zc, int k_prime, int info_cols, int e) {
  std::vector<int> order;
  for (int i = 2 * zc; i < static_cast<int>(codeword.size()); ++i) {
    if (i >= k_prime && i < info_cols * zc) continue;
    order.push_back(i);
  }
  BitVector out;
  for (int j = 0; j < e; ++j) out.push_back(codeword[order[j % order.size()]]);
  return out;
}

// Max-log QPSK LLR of the first bit in natural-log units.
inline double qpsk_llr_b0(double re, double sigma2) { return 2.0 * std::sqrt(2.0) * re / sigma2; }

// Simplified TBS as stated: floor(12*13*prb*qm*rate / 8) * 8, floored at 24.
inline long tb_size(int prb, int qm, int rate_num) {
  const double raw = 12.0 * 13.0 * prb * qm * rate_num / 1024.0;
  return std::max(24L, static_cast<long>(std::floor(raw / 8.0)) * 8);
}

inline BitVector to_bits(std::uint64_t mask, int n) {
  BitVector v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = static_cast<Bit>((mask >> i) & 1U);
  return v;
}

inline std::uint64_t to_mask(const BitVector& v) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) m |= static_cast<std::uint64_t>(v[i] & 1U) << i;
  return m;
}

}  // namespace oracle

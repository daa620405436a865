#include <random>

#include "doctest.h"
#include "decodex/error.hpp"
#include "decodex/ldpc.hpp"
#include "decodex/phy.hpp"
#include "oracles.hpp"

using namespace decodex;

namespace {

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVector v(n);
  for (auto& b : v) b = static_cast<Bit>(rng() & 1U);
  return v;
}

LlrBlock noiseless_llr(const BitVector& c, int magnitude = kLlrMax) {
  LlrBlock llr(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) llr[i] = static_cast<Llr>(c[i] ? -magnitude : magnitude);
  return llr;
}

LlrBlock awgn_llr(const BitVector& c, double snr_db, std::uint64_t seed) {
  ChannelConfig ch;
  ch.snr_db = snr_db;
  ch.seed = seed;
  auto llr = demap_llr(transmit(modulate(c, 2), ch), 2, ch.noise_variance());
  llr.resize(c.size());
  return llr;
}

}  // namespace

TEST_CASE("expand: null and zero-shift blocks") {
  BaseGraph g;
  g.id = BaseGraphId::toy;
  g.rows = 1;
  g.cols = 2;
  g.info_cols = 1;
  BaseEntry e;
  e.row = 0;
  e.col = 0;
  e.shift.fill(0);
  g.entries.push_back(e);
  const auto h = expand_base_graph(g, 4, 0);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(h.at(r, c) == (r == c));
    for (int c = 4; c < 8; ++c) CHECK_FALSE(h.at(r, c));
  }
}

TEST_CASE("expand: BG2 at zc=2 is 84 x 104") {
  const auto h = expand_base_graph(standard_base_graph(BaseGraphId::bg2), 2, 0);
  CHECK(h.rows() == 84);
  CHECK(h.cols() == 104);
}

TEST_CASE("expand: invalid zc/set pairing is a configuration error") {
  CHECK_THROWS_AS(expand_base_graph(standard_base_graph(BaseGraphId::bg1), 9, 0), ConfigError);
  CHECK_THROWS_AS(expand_base_graph(standard_base_graph(BaseGraphId::bg1), 17, 0), ConfigError);
}

TEST_CASE("expand: every lifted block is a permutation for all (bg, zc)") {
  for (auto id : {BaseGraphId::bg1, BaseGraphId::bg2}) {
    const auto& g = standard_base_graph(id);
    for (int zc : lifting_sizes()) {
      const int set = lifting_set_index(zc);
      const auto h = expand_base_graph(g, zc, set);
      REQUIRE(h.rows() == g.rows * zc);
      REQUIRE(h.cols() == g.cols * zc);
      const auto rows = oracle::lifted_rows(g, zc, set);
      std::size_t blocks = 0;
      for (int r = 0; r < g.rows; ++r) {
        for (const auto& b : h.layer(r)) {
          CHECK(b.shift >= 0);
          CHECK(b.shift < zc);
          ++blocks;
        }
        // One 1 per lifted row within each block: row degree equals layer size.
        for (int z = 0; z < zc; ++z) CHECK(rows[r * zc + z].size() == h.layer(r).size());
      }
      CHECK(blocks == g.entries.size());
      std::vector<int> col_count(static_cast<std::size_t>(h.cols()), 0);
      for (const auto& row : rows) {
        for (int c : row) ++col_count[c];
      }
      std::vector<int> base_col_degree(static_cast<std::size_t>(g.cols), 0);
      for (const auto& e : g.entries) ++base_col_degree[e.col];
      bool columns_ok = true;
      for (int c = 0; c < h.cols(); ++c) columns_ok = columns_ok && col_count[c] == base_col_degree[c / zc];
      CHECK(columns_ok);
    }
  }
}

TEST_CASE("expand: element access agrees with the raw-table oracle") {
  for (int zc : {2, 5, 13}) {
    const auto& g = standard_base_graph(BaseGraphId::bg2);
    const int set = lifting_set_index(zc);
    const auto h = expand_base_graph(g, zc, set);
    const auto rows = oracle::lifted_rows(g, zc, set);
    bool same = true;
    for (int r = 0; r < h.rows(); ++r) {
      std::vector<bool> dense(static_cast<std::size_t>(h.cols()), false);
      for (int c : rows[r]) dense[c] = true;
      for (int c = 0; c < h.cols(); ++c) same = same && (h.at(r, c) == dense[c]);
    }
    CHECK(same);
  }
}

TEST_CASE("encode: all-zero info gives the all-zero codeword") {
  const auto p = make_code_params(BaseGraphId::bg1, 16);
  const auto c = encode(BitVector(static_cast<std::size_t>(p.k), 0), p);
  CHECK(c.size() == static_cast<std::size_t>(p.n_full));
  CHECK(std::count(c.begin(), c.end(), 1) == 0);
}

TEST_CASE("encode: random info, BG2 zc=9 satisfies the sparse GF(2) oracle") {
  std::mt19937_64 rng(9);
  const auto p = make_code_params(BaseGraphId::bg2, 9);
  const auto rows = oracle::lifted_rows(standard_base_graph(BaseGraphId::bg2), 9, p.set_index);
  for (int t = 0; t < 20; ++t) {
    const auto info = random_bits(static_cast<std::size_t>(p.k), rng);
    const auto c = encode(info, p);
    CHECK(oracle::syndrome_zero(rows, c));
    CHECK(syndrome_check(*lifted_matrix(BaseGraphId::bg2, 9), c));
    CHECK(std::equal(info.begin(), info.end(), c.begin()));
  }
}

TEST_CASE("encode: oracle syndrome holds across lifting sizes of both graphs") {
  std::mt19937_64 rng(21);
  for (auto id : {BaseGraphId::bg1, BaseGraphId::bg2}) {
    for (int zc : {2, 3, 7, 15, 36, 52, 104, 176, 384}) {
      const auto p = make_code_params(id, zc);
      const auto info = random_bits(static_cast<std::size_t>(p.k), rng);
      const auto c = encode(info, p);
      CHECK(oracle::syndrome_zero(oracle::lifted_rows(standard_base_graph(id), zc, p.set_index), c));
    }
  }
}

TEST_CASE("encode: precondition violations") {
  auto p = make_code_params(BaseGraphId::bg2, 8);
  CHECK_THROWS_AS(encode(BitVector(static_cast<std::size_t>(p.k - 1), 0), p), ArgumentError);
  p.k_prime = p.k - 4;
  p.n_filler = 4;
  BitVector info(static_cast<std::size_t>(p.k), 0);
  info.back() = 1;
  CHECK_THROWS_AS(encode(info, p), ArgumentError);
}

TEST_CASE("syndrome: zero word passes, any single flip fails") {
  std::mt19937_64 rng(3);
  for (auto id : {BaseGraphId::bg1, BaseGraphId::bg2}) {
    const int zc = 4;
    const auto p = make_code_params(id, zc);
    const auto h = lifted_matrix(id, zc);
    CHECK(syndrome_check(*h, BitVector(static_cast<std::size_t>(p.n_full), 0)));
    const auto c = encode(random_bits(static_cast<std::size_t>(p.k), rng), p);
    bool all_detected = true;
    for (int i = 0; i < p.n_full; ++i) {
      auto bad = c;
      bad[i] ^= 1;
      all_detected = all_detected && !syndrome_check(*h, bad);
    }
    CHECK(all_detected);
    CHECK_THROWS_AS(syndrome_check(*h, BitVector(3, 0)), ArgumentError);
  }
}

TEST_CASE("decode: noiseless codeword converges in one iteration") {
  std::mt19937_64 rng(5);
  for (auto id : {BaseGraphId::bg1, BaseGraphId::bg2}) {
    for (int zc : {6, 64, 384}) {
      const auto p = make_code_params(id, zc);
      const auto info = random_bits(static_cast<std::size_t>(p.k), rng);
      const auto r = decode_layered_minsum(noiseless_llr(encode(info, p)), p, 20, 0.75);
      CHECK(r.converged);
      CHECK(r.iterations_used == 1);
      CHECK(r.bits == info);
    }
  }
}

TEST_CASE("decode: punctured systematic columns are recovered") {
  std::mt19937_64 rng(6);
  const auto p = make_code_params(BaseGraphId::bg1, 32);
  const auto info = random_bits(static_cast<std::size_t>(p.k), rng);
  auto llr = noiseless_llr(encode(info, p), 16);
  std::fill(llr.begin(), llr.begin() + 2 * p.zc, Llr{0});
  const auto r = decode_layered_minsum(llr, p, 20, 0.75);
  CHECK(r.converged);
  CHECK(r.bits == info);
}

TEST_CASE("decode: converged implies zero syndrome, iterations within bounds, deterministic") {
  std::mt19937_64 rng(8);
  const auto p = make_code_params(BaseGraphId::bg2, 20);
  const auto h = lifted_matrix(BaseGraphId::bg2, 20);
  for (int t = 0; t < 30; ++t) {
    const auto c = encode(random_bits(static_cast<std::size_t>(p.k), rng), p);
    const auto llr = awgn_llr(c, -1.0 + 0.1 * t, 100 + t);
    DecoderOptions opt;
    opt.max_iterations = 12;
    BitVector hard;
    const auto r = decode_layered_minsum(llr, *h, p.k, opt, &hard);
    CHECK(r.iterations_used >= 1);
    CHECK(r.iterations_used <= 12);
    if (r.converged) CHECK(syndrome_check(*h, hard));
    CHECK(decode_layered_minsum(llr, *h, p.k, opt) == r);
  }
}

TEST_CASE("decode: early termination off runs exactly max_iterations") {
  const auto p = make_code_params(BaseGraphId::bg2, 10);
  DecoderOptions opt;
  opt.max_iterations = 7;
  opt.early_termination = false;
  const auto r = decode_layered_minsum(noiseless_llr(BitVector(static_cast<std::size_t>(p.n_full), 0)), p, opt);
  CHECK(r.iterations_used == 7);
  CHECK(r.converged);
}

TEST_CASE("decode: precondition violations") {
  const auto p = make_code_params(BaseGraphId::bg2, 10);
  const LlrBlock llr(static_cast<std::size_t>(p.n_full), 10);
  CHECK_THROWS_AS(decode_layered_minsum(LlrBlock(5, 0), p, 20, 0.75), ArgumentError);
  CHECK_THROWS_AS(decode_layered_minsum(llr, p, 0, 0.75), ArgumentError);
  CHECK_THROWS_AS(decode_layered_minsum(llr, p, 20, 0.0), ArgumentError);
  CHECK_THROWS_AS(decode_layered_minsum(llr, p, 20, 1.5), ArgumentError);
}

TEST_CASE("decode: mean iterations non-decreasing as SNR falls") {
  std::mt19937_64 rng(12);
  const auto p = make_code_params(BaseGraphId::bg2, 36);
  std::vector<double> mean_iters;
  for (double snr : {6.0, 3.0, 1.0, -1.0}) {
    long total = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      const auto c = encode(random_bits(static_cast<std::size_t>(p.k), rng), p);
      total += decode_layered_minsum(awgn_llr(c, snr, 1000 + t), p, 20, 0.75).iterations_used;
    }
    mean_iters.push_back(static_cast<double>(total) / trials);
  }
  for (std::size_t i = 1; i < mean_iters.size(); ++i) CHECK(mean_iters[i] >= mean_iters[i - 1]);
}

TEST_CASE("toy code: weight-1 patterns at |LLR|=16 decode to the exhaustive-ML codeword") {
  const auto& toy = standard_base_graph(BaseGraphId::toy);
  for (int zc : {2, 4}) {
    const int n = toy.cols * zc;
    const auto rows = oracle::lifted_rows(toy, zc, 0);
    const auto book = oracle::codebook(rows, n);
    CHECK(book.size() == (std::size_t{1} << (toy.info_cols * zc)));
    const auto h = expand_base_graph(toy, zc, 0);
    int agree = 0, total = 0;
    for (std::size_t t = 0; t < book.size(); t += book.size() / 8) {
      for (int i = 0; i < n; ++i) {
        const std::uint64_t rx = book[t] ^ (std::uint64_t{1} << i);
        const auto ml = oracle::ml_decode(book, rx);
        LlrBlock llr(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) llr[j] = static_cast<Llr>(((rx >> j) & 1U) ? -16 : 16);
        BitVector hard;
        decode_layered_minsum(llr, h, toy.info_cols * zc, DecoderOptions{}, &hard);
        ++total;
        agree += oracle::to_mask(hard) == ml.word;
      }
    }
    CHECK(agree == total);
  }
}

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "decodex/error.hpp"
#include "decodex/ldpc.hpp"

namespace decodex {

int CodeBlockParams::info_cols() const { return standard_base_graph(bg).info_cols; }

CodeBlockParams make_code_params(BaseGraphId bg, int zc) {
  const auto& g = standard_base_graph(bg);
  CodeBlockParams p;
  p.bg = bg;
  p.zc = zc;
  p.set_index = lifting_set_index(zc);
  p.kb = g.info_cols;
  p.k = g.info_cols * zc;
  p.k_prime = p.k;
  p.n_full = g.cols * zc;
  p.n_cb = p.n_full - 2 * zc;
  p.n_filler = 0;
  p.e = p.n_cb;
  return p;
}

void validate(const CodeBlockParams& p) {
  const auto& g = standard_base_graph(p.bg);
  auto fail = [](const std::string& msg) { throw ConfigError("CodeBlockParams: " + msg); };
  if (!lifting_size_in_set(p.zc, p.set_index)) fail("lifting size / set index mismatch");
  if (p.kb < 1 || p.kb > g.info_cols) fail("kb out of range");
  if (p.k != p.kb * p.zc) fail("k != kb * zc");
  if (p.k_prime < 1 || p.k_prime > p.k) fail("k_prime out of range");
  if (p.n_filler != p.k - p.k_prime) fail("n_filler != k - k_prime");
  if (p.n_full != g.cols * p.zc) fail("n_full != cols * zc");
  if (p.n_cb != p.n_full - 2 * p.zc) fail("n_cb != n_full - 2 * zc");
  if (p.e <= 0) fail("e must be positive");
  if (p.e < p.k_prime - 2 * p.zc) fail("e shorter than the transmitted payload (rate > 1)");
}

ParityCheckMatrix::ParityCheckMatrix(BaseGraphId bg, int base_rows, int base_cols, int info_cols, int zc,
                                     std::vector<std::vector<CirculantBlock>> layers)
    : bg_(bg),
      base_rows_(base_rows),
      base_cols_(base_cols),
      info_cols_(info_cols),
      zc_(zc),
      layers_(std::move(layers)) {
  for (const auto& l : layers_) {
    block_count_ += l.size();
    max_degree_ = std::max(max_degree_, l.size());
  }
}

bool ParityCheckMatrix::at(int row, int col) const {
  const int r = row / zc_;
  const int z = row % zc_;
  const int c = col / zc_;
  const int v = col % zc_;
  for (const auto& b : layers_[r]) {
    if (b.col == c) return (z + b.shift) % zc_ == v;
  }
  return false;
}

ParityCheckMatrix expand_base_graph(const BaseGraph& graph, int zc, int set_index) {
  if (!lifting_size_in_set(zc, set_index)) {
    throw ConfigError("lifting size " + std::to_string(zc) + " is not in set " + std::to_string(set_index));
  }
  std::vector<std::vector<CirculantBlock>> layers(graph.rows);
  for (const auto& e : graph.entries) {
    layers[e.row].push_back({e.col, e.shift[set_index] % zc});
  }
  for (auto& l : layers) {
    std::sort(l.begin(), l.end(), [](const CirculantBlock& a, const CirculantBlock& b) { return a.col < b.col; });
  }
  return ParityCheckMatrix(graph.id, graph.rows, graph.cols, graph.info_cols, zc, std::move(layers));
}

std::shared_ptr<const ParityCheckMatrix> lifted_matrix(BaseGraphId bg, int zc) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ParityCheckMatrix>> cache;
  const auto key = std::make_pair(static_cast<int>(bg), zc);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto h = std::make_shared<const ParityCheckMatrix>(
      expand_base_graph(standard_base_graph(bg), zc, lifting_set_index(zc)));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(h)).first->second;
}

bool syndrome_check(const ParityCheckMatrix& h, std::span<const Bit> codeword) {
  if (codeword.size() != static_cast<std::size_t>(h.cols())) {
    throw ArgumentError("syndrome_check: codeword length " + std::to_string(codeword.size()) +
                        " != " + std::to_string(h.cols()));
  }
  const int zc = h.zc();
  std::vector<Bit> parity(zc);
  for (int r = 0; r < h.base_rows(); ++r) {
    std::fill(parity.begin(), parity.end(), 0);
    for (const auto& b : h.layer(r)) {
      const Bit* col = codeword.data() + static_cast<std::size_t>(b.col) * zc;
      const int head = zc - b.shift;
      for (int z = 0; z < head; ++z) parity[z] ^= col[z + b.shift];
      for (int z = head; z < zc; ++z) parity[z] ^= col[z - head];
    }
    for (Bit p : parity) {
      if (p & 1) return false;
    }
  }
  return true;
}

}  // namespace decodex

#include "decodex/nr_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>

#include "decodex/error.hpp"

namespace decodex {

namespace detail {
extern const std::string_view kMcsTable1Csv;
}  // namespace detail

std::vector<McsEntry> parse_mcs_table(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("MCS table: empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,qm,rate_num") throw ConfigError("MCS table: bad header '" + line + "'");
  std::vector<McsEntry> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    McsEntry e;
    char sep1 = 0, sep2 = 0;
    std::istringstream fields(line);
    if (!(fields >> e.index >> sep1 >> e.qm >> sep2 >> e.rate_num) || sep1 != ',' || sep2 != ',') {
      throw ConfigError("MCS table: bad row '" + line + "'");
    }
    if (e.index != static_cast<int>(out.size())) throw ConfigError("MCS table: indices must be 0,1,2,...");
    if (e.qm != 2 && e.qm != 4 && e.qm != 6 && e.qm != 8) throw ConfigError("MCS table: bad qm");
    if (e.rate_num <= 0 || e.rate_num >= 1024) throw ConfigError("MCS table: bad rate");
    out.push_back(e);
  }
  return out;
}

std::span<const McsEntry> mcs_table() {
  static const std::vector<McsEntry> table = parse_mcs_table(detail::kMcsTable1Csv);
  return table;
}

McsEntry mcs_lookup(int index) {
  const auto table = mcs_table();
  if (index < 0 || index > kMaxMcsIndex || index >= static_cast<int>(table.size())) {
    throw ArgumentError("MCS index " + std::to_string(index) + " outside [0, 27]");
  }
  return table[index];
}

long compute_tb_size(int prb, const McsEntry& mcs) {
  if (prb < 1) throw ArgumentError("compute_tb_size: prb must be >= 1");
  const long n_re = 12L * 13L * prb;
  const long bytes = n_re * mcs.qm * mcs.rate_num / (1024L * 8L);
  return std::max(bytes * 8, 24L);
}

BaseGraphId select_base_graph(long payload_bits, double target_rate) {
  if (payload_bits <= 0) throw ArgumentError("select_base_graph: payload must be positive");
  const bool bg2 = payload_bits <= 292 || (payload_bits <= 3824 && target_rate <= 2.0 / 3.0) ||
                   target_rate <= 0.25;
  return bg2 ? BaseGraphId::bg2 : BaseGraphId::bg1;
}

SegmentationPlan segment(long payload_bits, BaseGraphId bg) {
  if (payload_bits <= 0) throw ArgumentError("segment: payload must be positive");
  if (payload_bits > kMaxTbBits) {
    throw ConfigError("segment: TB of " + std::to_string(payload_bits) + " bits exceeds the supported maximum");
  }
  if (bg != BaseGraphId::bg1 && bg != BaseGraphId::bg2) throw ConfigError("segment: needs BG1 or BG2");

  const long with_crc = payload_bits + kTbCrcBits;
  const long k_cb = bg == BaseGraphId::bg1 ? kMaxCbBitsBg1 : kMaxCbBitsBg2;

  SegmentationPlan plan;
  plan.bg = bg;
  if (with_crc <= k_cb) {
    plan.c = 1;
    plan.cb_crc_bits = 0;
  } else {
    plan.c = static_cast<int>((with_crc + (k_cb - kCbCrcBits) - 1) / (k_cb - kCbCrcBits));
    plan.cb_crc_bits = kCbCrcBits;
  }
  const long total = with_crc + static_cast<long>(plan.c) * plan.cb_crc_bits;
  plan.k_prime = static_cast<int>((total + plan.c - 1) / plan.c);

  if (bg == BaseGraphId::bg1) {
    plan.kb = 22;
  } else if (payload_bits > 640) {
    plan.kb = 10;
  } else if (payload_bits > 560) {
    plan.kb = 9;
  } else if (payload_bits > 192) {
    plan.kb = 8;
  } else {
    plan.kb = 6;
  }

  for (int z : lifting_sizes()) {
    if (plan.kb * z >= plan.k_prime) {
      plan.zc = z;
      break;
    }
  }
  if (plan.zc == 0) throw ConfigError("segment: no lifting size fits K'=" + std::to_string(plan.k_prime));

  const auto& g = standard_base_graph(bg);
  CodeBlockParams p;
  p.bg = bg;
  p.zc = plan.zc;
  p.set_index = lifting_set_index(plan.zc);
  p.kb = plan.kb;
  p.k = plan.kb * plan.zc;
  p.k_prime = plan.k_prime;
  p.n_full = g.cols * plan.zc;
  p.n_cb = p.n_full - 2 * plan.zc;
  p.n_filler = p.k - p.k_prime;
  p.e = p.buffer_bits();
  validate(p);
  plan.params.assign(plan.c, p);
  return plan;
}

std::vector<int> circular_buffer_positions(const CodeBlockParams& params) {
  std::vector<int> pos;
  pos.reserve(static_cast<std::size_t>(params.n_cb));
  for (int i = 2 * params.zc; i < params.n_full; ++i) {
    if (!params.is_known_zero(i)) pos.push_back(i);
  }
  return pos;
}

BitVector rate_match(std::span<const Bit> codeword, const CodeBlockParams& params) {
  if (codeword.size() != static_cast<std::size_t>(params.n_full)) {
    throw ArgumentError("rate_match: codeword length " + std::to_string(codeword.size()) + " != n_full " +
                        std::to_string(params.n_full));
  }
  if (params.e <= 0) throw ConfigError("rate_match: E must be positive");
  const auto pos = circular_buffer_positions(params);
  if (pos.empty()) throw ConfigError("rate_match: circular buffer is empty");
  BitVector out(static_cast<std::size_t>(params.e));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = codeword[pos[i % pos.size()]];
  return out;
}

LlrBlock rate_dematch(std::span<const Llr> llrs, const CodeBlockParams& params) {
  if (llrs.size() != static_cast<std::size_t>(params.e)) {
    throw ArgumentError("rate_dematch: got " + std::to_string(llrs.size()) + " LLRs, expected E=" +
                        std::to_string(params.e));
  }
  const auto pos = circular_buffer_positions(params);
  if (pos.empty()) throw ConfigError("rate_dematch: circular buffer is empty");
  std::vector<int> acc(static_cast<std::size_t>(params.n_full), 0);
  for (std::size_t i = 0; i < llrs.size(); ++i) acc[pos[i % pos.size()]] += llrs[i];
  LlrBlock out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = saturate_llr(acc[i]);
  for (int i = params.k_prime; i < params.info_cols() * params.zc; ++i) out[i] = kLlrMax;
  return out;
}

}  // namespace decodex

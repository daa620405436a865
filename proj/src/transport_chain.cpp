#include <algorithm>
#include <string>

#include "decodex/crc.hpp"
#include "decodex/error.hpp"
#include "decodex/transport.hpp"

namespace decodex {

TbConfig TbConfig::from_mcs(const McsEntry& mcs, int prb) {
  TbConfig c;
  c.payload_bits = compute_tb_size(prb, mcs);
  c.qm = mcs.qm;
  c.rate_num = mcs.rate_num;
  c.coded_bits = 12L * 13L * prb * mcs.qm;
  return c;
}

TransportBlock make_transport_block(BitVector payload, int mcs, int prb) {
  if (payload.empty() || payload.size() % 8 != 0) {
    throw ArgumentError("transport block payload must be non-empty and a multiple of 8 bits");
  }
  if (prb < 1) throw ArgumentError("transport block needs prb >= 1");
  mcs_lookup(mcs);
  TransportBlock tb;
  tb.tb_crc = crc24(payload, CrcVariant::a);
  tb.payload_bits = std::move(payload);
  tb.mcs = mcs;
  tb.prb = prb;
  return tb;
}

TbPlan plan_transport_block(const TbConfig& config) {
  if (config.payload_bits <= 0) throw ConfigError("TB config: payload must be positive");
  if (config.coded_bits <= 0) throw ConfigError("TB config: coded bits must be positive");
  TbPlan plan;
  plan.config = config;
  plan.segmentation = segment(config.payload_bits, select_base_graph(config.payload_bits, config.rate_num / 1024.0));
  const int c = plan.segmentation.c;
  const long base_e = config.coded_bits / c;
  if (base_e <= 0) throw ConfigError("TB config: fewer coded bits than code blocks");
  long offset = 0;
  for (int r = 0; r < c; ++r) {
    CodeBlockParams p = plan.segmentation.params[r];
    p.e = static_cast<int>(r == c - 1 ? config.coded_bits - base_e * (c - 1) : base_e);
    validate(p);
    plan.cbs.push_back(p);
    plan.output_slots.push_back(static_cast<std::size_t>(r) * plan.segmentation.payload_per_cb());
    plan.coded_offsets.push_back(offset);
    offset += p.e;
  }
  return plan;
}

EncodedTb encode_transport_block(std::span<const Bit> payload, const TbConfig& config) {
  if (payload.size() != static_cast<std::size_t>(config.payload_bits)) {
    throw ArgumentError("encode_transport_block: payload length does not match config");
  }
  EncodedTb out;
  out.plan = plan_transport_block(config);
  const auto& seg = out.plan.segmentation;

  BitVector tb(payload.begin(), payload.end());
  attach_crc24(tb, CrcVariant::a);
  tb.resize(static_cast<std::size_t>(seg.c) * seg.payload_per_cb(), 0);

  out.coded.reserve(static_cast<std::size_t>(config.coded_bits));
  for (int r = 0; r < seg.c; ++r) {
    const auto& p = out.plan.cbs[r];
    const auto first = tb.begin() + static_cast<std::ptrdiff_t>(out.plan.output_slots[r]);
    BitVector cb(first, first + seg.payload_per_cb());
    if (seg.cb_crc_bits > 0) attach_crc24(cb, CrcVariant::b);
    cb.resize(static_cast<std::size_t>(p.k), 0);
    const BitVector codeword = encode(cb, p);
    const BitVector matched = rate_match(codeword, p);
    out.coded.insert(out.coded.end(), matched.begin(), matched.end());
  }
  return out;
}

std::vector<DecodeDescriptor> make_descriptors(const TbPlan& plan, std::span<const Llr> received, int tb_id,
                                               int max_iterations) {
  if (received.size() != static_cast<std::size_t>(plan.config.coded_bits)) {
    throw ArgumentError("make_descriptors: expected " + std::to_string(plan.config.coded_bits) + " LLRs, got " +
                        std::to_string(received.size()));
  }
  std::vector<DecodeDescriptor> out;
  out.reserve(plan.cbs.size());
  for (int r = 0; r < plan.num_cbs(); ++r) {
    const auto& p = plan.cbs[r];
    DecodeDescriptor d;
    d.cb_params = p;
    d.llr = rate_dematch(received.subspan(static_cast<std::size_t>(plan.coded_offsets[r]),
                                          static_cast<std::size_t>(p.e)),
                         p);
    d.max_iterations = max_iterations;
    d.output_slot = plan.output_slots[r];
    d.tb_id = tb_id;
    d.cb_id = r;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DecodeDescriptor> build_tb_descriptors(const TransportBlock& tb, int max_iterations, int tb_id) {
  const auto config = TbConfig::from_mcs(mcs_lookup(tb.mcs), tb.prb);
  if (static_cast<long>(tb.payload_bits.size()) != config.payload_bits) {
    throw ArgumentError("build_tb_descriptors: payload size does not match MCS/PRB sizing");
  }
  const auto plan = plan_transport_block(config);
  const LlrBlock erased(static_cast<std::size_t>(config.coded_bits), 0);
  return make_descriptors(plan, erased, tb_id, max_iterations);
}

bool TbDecodeOutcome::ok() const {
  return tb_crc_ok && std::all_of(cb_crc_ok.begin(), cb_crc_ok.end(), [](bool b) { return b; });
}

TbDecodeOutcome reassemble_transport_block(const TbPlan& plan, std::span<const DecodeResult> results) {
  const auto& seg = plan.segmentation;
  if (results.size() != static_cast<std::size_t>(seg.c)) {
    throw ArgumentError("reassemble: expected " + std::to_string(seg.c) + " CB results");
  }
  TbDecodeOutcome out;
  BitVector tb;
  tb.reserve(static_cast<std::size_t>(seg.c) * seg.payload_per_cb());
  for (int r = 0; r < seg.c; ++r) {
    const auto& bits = results[r].bits;
    if (bits.size() < static_cast<std::size_t>(seg.k_prime)) throw ArgumentError("reassemble: short CB result");
    if (seg.cb_crc_bits > 0) {
      out.cb_crc_ok.push_back(check_crc24(std::span(bits).first(seg.k_prime), CrcVariant::b));
    }
    tb.insert(tb.end(), bits.begin(), bits.begin() + seg.payload_per_cb());
  }
  const auto with_crc = static_cast<std::size_t>(plan.config.payload_bits + kTbCrcBits);
  out.tb_crc_ok = check_crc24(std::span(tb).first(with_crc), CrcVariant::a);
  out.payload.assign(tb.begin(), tb.begin() + plan.config.payload_bits);
  return out;
}

}  // namespace decodex

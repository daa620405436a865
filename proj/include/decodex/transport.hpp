#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "decodex/ldpc.hpp"
#include "decodex/nr_pipeline.hpp"

namespace decodex {

// One offload operation, mirroring a bbdev LDPC decode op: soft input plus
// coding parameters and where the decoded payload lands in its TB.
struct DecodeDescriptor {
  CodeBlockParams cb_params;
  LlrBlock llr;  // n_full values, post de-rate-matching
  int max_iterations = 20;
  std::size_t output_slot = 0;  // bit offset of this CB's payload in the TB
  int tb_id = 0;
  int cb_id = 0;
};

// Everything needed to size and code one TB.
struct TbConfig {
  long payload_bits = 0;  // B, TB-CRC excluded
  int qm = 2;
  int rate_num = 0;       // target rate x/1024, drives base-graph selection
  long coded_bits = 0;    // G, total rate-matched bits over all CBs

  static TbConfig from_mcs(const McsEntry& mcs, int prb);
};

struct TransportBlock {
  BitVector payload_bits;
  int mcs = 0;
  int prb = 1;
  std::uint32_t tb_crc = 0;
};

// Computes the TB CRC; payload must be non-empty and byte aligned.
TransportBlock make_transport_block(BitVector payload, int mcs, int prb);

struct TbPlan {
  TbConfig config;
  SegmentationPlan segmentation;
  std::vector<CodeBlockParams> cbs;       // per-CB params with E filled in
  std::vector<std::size_t> output_slots;  // payload offset of each CB
  std::vector<long> coded_offsets;        // offset of each CB's E bits in G

  int num_cbs() const { return static_cast<int>(cbs.size()); }
};

// Segments and splits G evenly across CBs, remainder to the last one.
TbPlan plan_transport_block(const TbConfig& config);

struct EncodedTb {
  TbPlan plan;
  BitVector coded;  // G bits, CB-major
};

// TB-CRC attach, segmentation, CB-CRC attach (C > 1), LDPC encode, rate match.
EncodedTb encode_transport_block(std::span<const Bit> payload, const TbConfig& config);

// Splits G received LLRs per CB and de-rate-matches into descriptors.
std::vector<DecodeDescriptor> make_descriptors(const TbPlan& plan, std::span<const Llr> received, int tb_id,
                                               int max_iterations);

// Descriptors with erased (zero) channel LLRs, one per CB.
std::vector<DecodeDescriptor> build_tb_descriptors(const TransportBlock& tb, int max_iterations = 20,
                                                   int tb_id = 0);

struct TbDecodeOutcome {
  BitVector payload;
  std::vector<bool> cb_crc_ok;  // empty when C = 1
  bool tb_crc_ok = false;

  bool ok() const;
};

// Desegments decoded CBs (results in CB order) and checks both CRC levels.
TbDecodeOutcome reassemble_transport_block(const TbPlan& plan, std::span<const DecodeResult> results);

}  // namespace decodex

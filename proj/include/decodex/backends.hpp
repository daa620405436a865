#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decodex/latency_model.hpp"
#include "decodex/ldpc.hpp"
#include "decodex/transport.hpp"

namespace decodex {

enum class ClockType { wall, virtual_time };
std::string_view to_string(ClockType clock);

struct TbLatency {
  int tb_id = 0;
  double latency_us = 0.0;
};

struct BackendReport {
  ClockType clock_type = ClockType::virtual_time;
  std::vector<TbLatency> tb_latencies;  // in order of first appearance of each tb_id
  std::vector<DecodeResult> results;    // index-aligned with the submitted descriptors
  std::vector<int> iterations;          // per CB, index-aligned as well
  double total_us = 0.0;                // makespan of the whole submission
  double kernel_us = 0.0;               // inline: device kernel time only
  double utilization = 0.0;             // inline: mean over launches
  std::vector<double> launch_utilization;
  std::uint64_t enqueued = 0;           // lookaside counters
  std::uint64_t dequeued = 0;
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

// Decodes one descriptor with the real layered decoder.
DecodeResult decode_descriptor(const DecodeDescriptor& op, const DecoderOptions& options);

// Descriptor indices grouped by tb_id, in order of first appearance.
std::vector<std::vector<std::size_t>> group_by_tb(std::span<const DecodeDescriptor> ops);

// ---------------------------------------------------------------------------
// CPU: one TB per worker task, real wall-clock timing.

BackendReport cpu_decode_batch(std::span<const DecodeDescriptor> ops, int workers,
                               const DecoderOptions& decoder = {});

// ---------------------------------------------------------------------------
// Lookaside accelerator: a single bbdev-style queue pair in virtual time.

struct CompletedOp {
  std::size_t index = 0;  // caller's descriptor index
  DecodeResult result;
  VirtualTime enqueued_at{};
  VirtualTime completes_at{};
};

class QueuePair {
 public:
  QueuePair(const LatencyModel& model, std::size_t depth, const DecoderOptions& decoder = {});

  // Returns false when `depth` ops are outstanding (enqueued, not dequeued).
  bool enqueue(const DecodeDescriptor& op, std::size_t index, VirtualTime now);
  // Up to max_ops ops whose completion time is <= now, FIFO. Decoding runs here.
  std::vector<CompletedOp> dequeue(std::size_t max_ops, VirtualTime now);

  std::size_t outstanding() const { return pending_.size(); }
  std::size_t depth() const { return depth_; }
  std::uint64_t enqueued() const { return enqueued_; }
  std::uint64_t dequeued() const { return dequeued_; }

 private:
  struct Pending {
    const DecodeDescriptor* op;
    std::size_t index;
    VirtualTime enqueued_at;
    VirtualTime completes_at;
  };

  LatencyModel model_;
  std::size_t depth_;
  DecoderOptions decoder_;
  std::deque<Pending> pending_;
  std::optional<VirtualTime> last_start_;
  VirtualTime last_completion_{};
  std::uint64_t enqueued_ = 0;
  std::uint64_t dequeued_ = 0;
};

struct LookasideKnobs {
  std::size_t queue_depth = 1024;
  long max_dequeue_retries = 1'000'000;  // MAX of the bulk drain loop
  double inter_symbol_gap = 0.0;         // us between descriptor arrivals
  DecoderOptions decoder;
};

// Enqueue one op, poll until it returns, then the next.
BackendReport run_lookaside_sequential(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                       const LookasideKnobs& knobs = {});
// Enqueue every op on arrival, then one bulk drain bounded by max_dequeue_retries.
BackendReport run_lookaside_bulk(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                 const LookasideKnobs& knobs = {});

// ---------------------------------------------------------------------------
// Inline accelerator: kernel launches over codewords in virtual time. Kernel
// time excludes host transfers; total time adds dma_overhead, transfer_per_byte
// and return_overhead per launch.

BackendReport inline_decode_sequential(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                       const DecoderOptions& decoder = {});
BackendReport inline_decode_parallel(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                     const DecoderOptions& decoder = {});

// ---------------------------------------------------------------------------
// Uniform backend contract.

enum class BackendKind { cpu, lookaside, inline_gpu, inline_unified };
std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);  // throws ConfigError

enum class LookasideMode { bulk, sequential };
enum class InlineMode { parallel, sequential };

struct BackendKnobs {
  int workers = 1;
  LookasideMode lookaside_mode = LookasideMode::bulk;
  InlineMode inline_mode = InlineMode::parallel;
  std::size_t queue_depth = 1024;
  long max_dequeue_retries = 1'000'000;
  double inter_symbol_gap = 0.0;
  DecoderOptions decoder;  // max_iterations comes from each descriptor
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const = 0;
  virtual ClockType clock_type() const = 0;
  virtual BackendReport submit(std::span<const DecodeDescriptor> ops) = 0;
};

std::unique_ptr<Backend> make_backend(BackendKind kind, const LatencyModel& model, const BackendKnobs& knobs = {});
std::unique_ptr<Backend> make_backend(std::string_view kind, const LatencyModel& model,
                                      const BackendKnobs& knobs = {});

// Default model for a backend kind (cpu ignores it).
LatencyModel default_model(BackendKind kind);

}  // namespace decodex

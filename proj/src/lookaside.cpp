#include <algorithm>
#include <map>
#include <string>

#include "decodex/backends.hpp"
#include "decodex/error.hpp"

namespace decodex {

namespace {

std::size_t input_bytes(const DecodeDescriptor& op) { return static_cast<std::size_t>(op.cb_params.e); }
std::size_t output_bytes(const DecodeDescriptor& op) {
  return static_cast<std::size_t>((op.cb_params.k_prime + 7) / 8);
}

// Tracks per-TB first-enqueue and last-dequeue times.
class TbClock {
 public:
  explicit TbClock(std::span<const DecodeDescriptor> ops) : groups_(group_by_tb(ops)), ops_(ops) {
    for (std::size_t g = 0; g < groups_.size(); ++g) group_of_tb_[ops[groups_[g].front()].tb_id] = g;
    first_.assign(groups_.size(), VirtualTime::max());
    last_.assign(groups_.size(), VirtualTime::min());
  }

  void enqueued(std::size_t index, VirtualTime t) {
    auto& f = first_[group_of_tb_.at(ops_[index].tb_id)];
    f = std::min(f, t);
  }
  void observed(std::size_t index, VirtualTime t) {
    auto& l = last_[group_of_tb_.at(ops_[index].tb_id)];
    l = std::max(l, t);
  }

  std::vector<TbLatency> latencies() const {
    std::vector<TbLatency> out;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const bool done = last_[g] != VirtualTime::min() && first_[g] != VirtualTime::max();
      out.push_back({ops_[groups_[g].front()].tb_id, done ? to_microseconds(last_[g] - first_[g]) : 0.0});
    }
    return out;
  }

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::span<const DecodeDescriptor> ops_;
  std::map<int, std::size_t> group_of_tb_;
  std::vector<VirtualTime> first_;
  std::vector<VirtualTime> last_;
};

void collect(BackendReport& report, TbClock& clock, std::vector<CompletedOp>&& done, VirtualTime now) {
  for (auto& c : done) {
    clock.observed(c.index, now);
    report.iterations[c.index] = c.result.iterations_used;
    report.results[c.index] = std::move(c.result);
  }
}

BackendReport empty_report(std::size_t n) {
  BackendReport r;
  r.clock_type = ClockType::virtual_time;
  r.results.resize(n);
  r.iterations.assign(n, 0);
  return r;
}

}  // namespace

QueuePair::QueuePair(const LatencyModel& model, std::size_t depth, const DecoderOptions& decoder)
    : model_(model), depth_(depth), decoder_(decoder) {
  validate(model_);
  if (depth_ == 0) throw ConfigError("queue depth must be >= 1");
}

bool QueuePair::enqueue(const DecodeDescriptor& op, std::size_t index, VirtualTime now) {
  if (pending_.size() >= depth_) return false;
  const VirtualTime arrival = now + to_virtual(model_.dma_overhead) + model_.transfer(input_bytes(op));
  VirtualTime start = arrival;
  if (last_start_) start = std::max(start, *last_start_ + to_virtual(model_.pipeline_ii));
  VirtualTime done = start + to_virtual(model_.op_service) + to_virtual(model_.return_overhead) +
                     model_.transfer(output_bytes(op));
  done = std::max(done, last_completion_);  // FIFO completion
  last_start_ = start;
  last_completion_ = done;
  pending_.push_back({&op, index, now, done});
  ++enqueued_;
  return true;
}

std::vector<CompletedOp> QueuePair::dequeue(std::size_t max_ops, VirtualTime now) {
  std::vector<CompletedOp> out;
  while (out.size() < max_ops && !pending_.empty() && pending_.front().completes_at <= now) {
    const Pending p = pending_.front();
    pending_.pop_front();
    out.push_back({p.index, decode_descriptor(*p.op, decoder_), p.enqueued_at, p.completes_at});
    ++dequeued_;
  }
  return out;
}

BackendReport run_lookaside_sequential(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                       const LookasideKnobs& knobs) {
  QueuePair q(model, knobs.queue_depth, knobs.decoder);
  BackendReport report = empty_report(ops.size());
  TbClock clock(ops);
  const VirtualTime poll = to_virtual(model.poll_interval);
  VirtualTime now{};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    now = std::max(now, to_virtual(knobs.inter_symbol_gap * static_cast<double>(i)));
    while (!q.enqueue(ops[i], i, now)) now += poll;
    clock.enqueued(i, now);
    while (true) {
      auto done = q.dequeue(1, now);
      if (!done.empty()) {
        collect(report, clock, std::move(done), now);
        break;
      }
      now += poll;
    }
  }
  report.enqueued = q.enqueued();
  report.dequeued = q.dequeued();
  report.total_us = to_microseconds(now);
  report.tb_latencies = clock.latencies();
  return report;
}

BackendReport run_lookaside_bulk(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                 const LookasideKnobs& knobs) {
  QueuePair q(model, knobs.queue_depth, knobs.decoder);
  BackendReport report = empty_report(ops.size());
  TbClock clock(ops);
  const VirtualTime poll = to_virtual(model.poll_interval);
  VirtualTime now{};

  for (std::size_t i = 0; i < ops.size(); ++i) {
    now = std::max(now, to_virtual(knobs.inter_symbol_gap * static_cast<double>(i)));
    // Backpressure: free ring slots by dequeuing, then retry.
    while (!q.enqueue(ops[i], i, now)) {
      auto done = q.dequeue(q.outstanding(), now);
      if (done.empty()) now += poll;
      else collect(report, clock, std::move(done), now);
    }
    clock.enqueued(i, now);
  }

  long retry = 0;
  while (q.dequeued() < q.enqueued() && retry < knobs.max_dequeue_retries) {
    auto done = q.dequeue(static_cast<std::size_t>(q.enqueued() - q.dequeued()), now);
    collect(report, clock, std::move(done), now);
    ++retry;
    if (q.dequeued() < q.enqueued()) now += poll;
  }

  report.enqueued = q.enqueued();
  report.dequeued = q.dequeued();
  if (report.enqueued != report.dequeued) {
    report.failure = "lookaside drain shortfall: enq=" + std::to_string(report.enqueued) +
                     " deq=" + std::to_string(report.dequeued) + " after " + std::to_string(retry) + " retries";
  }
  report.total_us = to_microseconds(now);
  report.tb_latencies = clock.latencies();
  return report;
}

}  // namespace decodex

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <string>
#include <thread>

#include "decodex/backends.hpp"
#include "decodex/error.hpp"

namespace decodex {

std::string_view to_string(ClockType clock) { return clock == ClockType::wall ? "wall" : "virtual"; }

DecodeResult decode_descriptor(const DecodeDescriptor& op, const DecoderOptions& options) {
  DecoderOptions o = options;
  o.max_iterations = op.max_iterations;
  return decode_layered_minsum(op.llr, op.cb_params, o);
}

std::vector<std::vector<std::size_t>> group_by_tb(std::span<const DecodeDescriptor> ops) {
  std::vector<std::vector<std::size_t>> groups;
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    auto [it, fresh] = slot.try_emplace(ops[i].tb_id, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

BackendReport cpu_decode_batch(std::span<const DecodeDescriptor> ops, int workers, const DecoderOptions& decoder) {
  if (workers < 1) throw ConfigError("cpu backend: workers must be >= 1");
  using Clock = std::chrono::steady_clock;

  const auto groups = group_by_tb(ops);
  BackendReport report;
  report.clock_type = ClockType::wall;
  report.results.resize(ops.size());
  report.iterations.assign(ops.size(), 0);
  std::vector<double> latency(groups.size(), 0.0);

  std::atomic<std::size_t> next{0};
  auto lane = [&] {
    for (std::size_t g = next.fetch_add(1); g < groups.size(); g = next.fetch_add(1)) {
      const auto t0 = Clock::now();
      for (std::size_t i : groups[g]) report.results[i] = decode_descriptor(ops[i], decoder);
      latency[g] = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    }
  };

  const auto start = Clock::now();
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(lane);
  }
  report.total_us = std::chrono::duration<double, std::micro>(Clock::now() - start).count();

  for (std::size_t i = 0; i < ops.size(); ++i) report.iterations[i] = report.results[i].iterations_used;
  for (std::size_t g = 0; g < groups.size(); ++g) report.tb_latencies.push_back({ops[groups[g].front()].tb_id, latency[g]});
  return report;
}

namespace {

struct LaunchCost {
  VirtualTime kernel;
  VirtualTime total;
  double utilization;
};

LaunchCost launch_cost(std::span<const DecodeDescriptor> ops, std::span<const std::size_t> members,
                       const LatencyModel& m) {
  std::size_t in = 0, out = 0;
  for (std::size_t i : members) {
    in += static_cast<std::size_t>(ops[i].cb_params.e);
    out += static_cast<std::size_t>((ops[i].cb_params.k_prime + 7) / 8);
  }
  const auto codewords = static_cast<long>(members.size());
  const long waves = (codewords + m.capacity - 1) / m.capacity;
  LaunchCost c;
  c.kernel = to_virtual(m.launch_overhead) + waves * to_virtual(m.per_codeword_time);
  c.total = to_virtual(m.dma_overhead) + m.transfer(in) + c.kernel + m.transfer(out) + to_virtual(m.return_overhead);
  c.utilization = std::min<double>(static_cast<double>(codewords), m.capacity) / m.capacity;
  return c;
}

BackendReport decode_all(std::span<const DecodeDescriptor> ops, const DecoderOptions& decoder) {
  BackendReport r;
  r.clock_type = ClockType::virtual_time;
  r.results.reserve(ops.size());
  for (const auto& op : ops) {
    r.results.push_back(decode_descriptor(op, decoder));
    r.iterations.push_back(r.results.back().iterations_used);
  }
  return r;
}

}  // namespace

BackendReport inline_decode_sequential(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                       const DecoderOptions& decoder) {
  validate(model);
  BackendReport report = decode_all(ops, decoder);
  VirtualTime now{}, kernel{};
  for (const auto& members : group_by_tb(ops)) {
    const auto cost = launch_cost(ops, members, model);
    now += cost.total;
    kernel += cost.kernel;
    report.launch_utilization.push_back(cost.utilization);
    report.tb_latencies.push_back({ops[members.front()].tb_id, to_microseconds(now)});
  }
  report.kernel_us = to_microseconds(kernel);
  report.total_us = to_microseconds(now);
  if (!report.launch_utilization.empty()) {
    double sum = 0.0;
    for (double u : report.launch_utilization) sum += u;
    report.utilization = sum / static_cast<double>(report.launch_utilization.size());
  }
  return report;
}

BackendReport inline_decode_parallel(std::span<const DecodeDescriptor> ops, const LatencyModel& model,
                                     const DecoderOptions& decoder) {
  validate(model);
  BackendReport report = decode_all(ops, decoder);
  if (ops.empty()) return report;
  std::vector<std::size_t> all(ops.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto cost = launch_cost(ops, all, model);
  report.kernel_us = to_microseconds(cost.kernel);
  report.total_us = to_microseconds(cost.total);
  report.launch_utilization = {cost.utilization};
  report.utilization = cost.utilization;
  for (const auto& members : group_by_tb(ops)) {
    report.tb_latencies.push_back({ops[members.front()].tb_id, report.total_us});
  }
  return report;
}

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::cpu: return "cpu";
    case BackendKind::lookaside: return "lookaside";
    case BackendKind::inline_gpu: return "inline";
    case BackendKind::inline_unified: return "inline-unified";
  }
  return "?";
}

BackendKind parse_backend_kind(std::string_view name) {
  for (auto k : {BackendKind::cpu, BackendKind::lookaside, BackendKind::inline_gpu, BackendKind::inline_unified}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown backend kind '" + std::string(name) + "'");
}

LatencyModel default_model(BackendKind kind) {
  switch (kind) {
    case BackendKind::lookaside: return LatencyModel::lookaside_defaults();
    case BackendKind::inline_unified: return LatencyModel::inline_unified_defaults();
    case BackendKind::cpu:
    case BackendKind::inline_gpu: return LatencyModel::inline_defaults();
  }
  return {};
}

namespace {

class CpuBackend final : public Backend {
 public:
  explicit CpuBackend(const BackendKnobs& knobs) : knobs_(knobs) {
    if (knobs_.workers < 1) throw ConfigError("cpu backend: workers must be >= 1");
  }
  BackendKind kind() const override { return BackendKind::cpu; }
  ClockType clock_type() const override { return ClockType::wall; }
  BackendReport submit(std::span<const DecodeDescriptor> ops) override {
    return cpu_decode_batch(ops, knobs_.workers, knobs_.decoder);
  }

 private:
  BackendKnobs knobs_;
};

class LookasideBackend final : public Backend {
 public:
  LookasideBackend(const LatencyModel& model, const BackendKnobs& knobs) : model_(model), knobs_(knobs) {
    validate(model_);
  }
  BackendKind kind() const override { return BackendKind::lookaside; }
  ClockType clock_type() const override { return ClockType::virtual_time; }
  BackendReport submit(std::span<const DecodeDescriptor> ops) override {
    LookasideKnobs k;
    k.queue_depth = knobs_.queue_depth;
    k.max_dequeue_retries = knobs_.max_dequeue_retries;
    k.inter_symbol_gap = knobs_.inter_symbol_gap;
    k.decoder = knobs_.decoder;
    return knobs_.lookaside_mode == LookasideMode::bulk ? run_lookaside_bulk(ops, model_, k)
                                                        : run_lookaside_sequential(ops, model_, k);
  }

 private:
  LatencyModel model_;
  BackendKnobs knobs_;
};

class InlineBackend final : public Backend {
 public:
  InlineBackend(BackendKind kind, const LatencyModel& model, const BackendKnobs& knobs)
      : kind_(kind), model_(model), knobs_(knobs) {
    if (kind_ == BackendKind::inline_unified) {
      model_.transfer_per_byte = 0.0;
      model_.dma_overhead = 0.0;
      model_.return_overhead = 0.0;
    }
    validate(model_);
  }
  BackendKind kind() const override { return kind_; }
  ClockType clock_type() const override { return ClockType::virtual_time; }
  BackendReport submit(std::span<const DecodeDescriptor> ops) override {
    return knobs_.inline_mode == InlineMode::parallel ? inline_decode_parallel(ops, model_, knobs_.decoder)
                                                      : inline_decode_sequential(ops, model_, knobs_.decoder);
  }

 private:
  BackendKind kind_;
  LatencyModel model_;
  BackendKnobs knobs_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(BackendKind kind, const LatencyModel& model, const BackendKnobs& knobs) {
  switch (kind) {
    case BackendKind::cpu: return std::make_unique<CpuBackend>(knobs);
    case BackendKind::lookaside: return std::make_unique<LookasideBackend>(model, knobs);
    case BackendKind::inline_gpu:
    case BackendKind::inline_unified: return std::make_unique<InlineBackend>(kind, model, knobs);
  }
  throw ConfigError("unknown backend kind");
}

std::unique_ptr<Backend> make_backend(std::string_view kind, const LatencyModel& model, const BackendKnobs& knobs) {
  return make_backend(parse_backend_kind(kind), model, knobs);
}

}  // namespace decodex

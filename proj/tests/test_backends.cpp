#include <limits>
#include <random>
#include <thread>

#include "doctest.h"
#include "decodex/backends.hpp"
#include "decodex/bench.hpp"
#include "decodex/error.hpp"

using namespace decodex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// n TBs of a small multi-CB configuration, tb_id = index.
std::vector<DecodeDescriptor> tb_ops(int n_tb, double snr_db, std::uint64_t seed = 1, long payload = 4000) {
  TbConfig cfg;
  cfg.payload_bits = payload;
  cfg.qm = 2;
  cfg.rate_num = 512;
  cfg.coded_bits = 2 * payload + 200;
  std::vector<DecodeDescriptor> ops;
  for (int t = 0; t < n_tb; ++t) {
    auto v = make_tb_vector(cfg, snr_db, seed + static_cast<std::uint64_t>(t), t, 20);
    for (auto& d : v.descriptors) ops.push_back(std::move(d));
  }
  return ops;
}

std::vector<BitVector> bits_of(const BackendReport& r) {
  std::vector<BitVector> out;
  for (const auto& x : r.results) out.push_back(x.bits);
  return out;
}

}  // namespace

TEST_CASE("cpu: one TB on one worker equals the direct decoder") {
  const auto ops = tb_ops(1, 2.0);
  const auto report = cpu_decode_batch(ops, 1);
  CHECK(report.clock_type == ClockType::wall);
  REQUIRE(report.results.size() == ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    CHECK(report.results[i] == decode_layered_minsum(ops[i].llr, ops[i].cb_params, 20, 0.75));
  }
  REQUIRE(report.tb_latencies.size() == 1);
  CHECK(report.tb_latencies[0].latency_us > 0.0);
}

TEST_CASE("cpu: results are identical for every worker count") {
  const auto ops = tb_ops(8, 1.5, 40, 1200);
  const auto base = cpu_decode_batch(ops, 1);
  for (int w : {2, 4, 8}) {
    const auto r = cpu_decode_batch(ops, w);
    CHECK(r.results == base.results);
    CHECK(r.iterations == base.iterations);
    CHECK(r.tb_latencies.size() == 8);
  }
  CHECK_THROWS_AS(cpu_decode_batch(ops, 0), ConfigError);
}

TEST_CASE("cpu: more workers speed up identical TBs" * doctest::skip(std::thread::hardware_concurrency() < 2)) {
  auto one = tb_ops(1, 1.0, 5, 8000);
  std::vector<DecodeDescriptor> ops;
  for (int t = 0; t < 8; ++t) {
    for (auto d : one) {
      d.tb_id = t;
      ops.push_back(d);
    }
  }
  const unsigned lanes = std::min(8U, std::thread::hardware_concurrency());
  const double serial = cpu_decode_batch(ops, 1).total_us;
  const double parallel = cpu_decode_batch(ops, static_cast<int>(lanes)).total_us;
  CHECK(parallel / serial < 1.0);
}

TEST_CASE("queue pair: single-op completion time") {
  LatencyModel m;
  m.transfer_per_byte = 0.01;
  QueuePair q(m, 4);
  const auto ops = make_bulk_ops(1);
  const VirtualTime now = to_virtual(5.0);
  REQUIRE(q.enqueue(ops[0], 0, now));
  const VirtualTime t_in = m.transfer(static_cast<std::size_t>(ops[0].cb_params.e));
  const VirtualTime t_out = m.transfer(static_cast<std::size_t>((ops[0].cb_params.k_prime + 7) / 8));
  const VirtualTime done = now + to_virtual(m.dma_overhead) + t_in + to_virtual(m.op_service) +
                           to_virtual(m.return_overhead) + t_out;
  CHECK(q.dequeue(1, done - VirtualTime(1)).empty());
  const auto out = q.dequeue(1, done);
  REQUIRE(out.size() == 1);
  CHECK(out[0].completes_at == done);
  CHECK(out[0].result == decode_layered_minsum(ops[0].llr, ops[0].cb_params, 20, 0.75));
}

TEST_CASE("queue pair: backpressure at depth") {
  QueuePair q(LatencyModel{}, 2);
  const auto ops = make_bulk_ops(3);
  CHECK(q.enqueue(ops[0], 0, {}));
  CHECK(q.enqueue(ops[1], 1, {}));
  CHECK_FALSE(q.enqueue(ops[2], 2, {}));
  CHECK(q.outstanding() == 2);
  CHECK_THROWS_AS(QueuePair(LatencyModel{}, 0), ConfigError);
}

TEST_CASE("queue pair: back-to-back ops are spaced by the initiation interval") {
  LatencyModel m;
  QueuePair q(m, 8);
  const auto ops = make_bulk_ops(2);
  q.enqueue(ops[0], 0, {});
  q.enqueue(ops[1], 1, {});
  const auto out = q.dequeue(8, VirtualTime::max());
  REQUIRE(out.size() == 2);
  const VirtualTime first_start = to_virtual(m.dma_overhead);
  CHECK(out[0].completes_at == first_start + to_virtual(m.op_service + m.return_overhead));
  CHECK(out[1].completes_at == first_start + to_virtual(m.pipeline_ii + m.op_service + m.return_overhead));
}

TEST_CASE("queue pair: drain at the end of time is complete and FIFO") {
  QueuePair q(LatencyModel{}, 64);
  const auto ops = make_bulk_ops(20);
  for (std::size_t i = 0; i < ops.size(); ++i) q.enqueue(ops[i], i, to_virtual(static_cast<double>(i % 3)));
  CHECK(q.dequeue(64, {}).empty());
  const auto out = q.dequeue(64, VirtualTime::max());
  REQUIRE(out.size() == 20);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].index == i);
    if (i > 0) CHECK(out[i].completes_at >= out[i - 1].completes_at);
  }
  CHECK(q.enqueued() == q.dequeued());
}

TEST_CASE("lookaside: n=1 sequential equals bulk, lower bound holds") {
  const LatencyModel m;
  const auto one = make_bulk_ops(1);
  CHECK(run_lookaside_sequential(one, m).total_us == run_lookaside_bulk(one, m).total_us);
  const auto ops = make_bulk_ops(50);
  const auto seq = run_lookaside_sequential(ops, m);
  CHECK(seq.total_us >= 50 * (m.dma_overhead + m.op_service));
  CHECK(seq.enqueued == 50);
  CHECK(seq.dequeued == 50);
}

TEST_CASE("lookaside: bulk drain shortfall is an explicit failure") {
  const auto ops = make_bulk_ops(10);
  LookasideKnobs k;
  k.max_dequeue_retries = 3;
  const auto r = run_lookaside_bulk(ops, LatencyModel{}, k);
  CHECK_FALSE(r.ok());
  CHECK(r.enqueued == 10);
  CHECK(r.dequeued < r.enqueued);
}

TEST_CASE("lookaside: bulk with a shallow queue still completes") {
  const auto ops = make_bulk_ops(40);
  LookasideKnobs k;
  k.queue_depth = 3;
  const auto r = run_lookaside_bulk(ops, LatencyModel{}, k);
  CHECK(r.ok());
  CHECK(r.dequeued == 40);
}

TEST_CASE("lookaside: bulk never slower than sequential over random models") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    LatencyModel m;
    m.transfer_per_byte = u(rng) * 0.05;
    m.dma_overhead = u(rng) * 20;
    m.op_service = 0.5 + u(rng) * 30;
    m.pipeline_ii = u(rng) * m.op_service;
    m.return_overhead = u(rng) * 5;
    m.poll_interval = 0.1 + u(rng) * 3;
    const int n = 1 + static_cast<int>(rng() % 60);
    const auto ops = make_bulk_ops(n, 9);
    CHECK(run_lookaside_bulk(ops, m).total_us <= run_lookaside_sequential(ops, m).total_us);
  }
}

TEST_CASE("monotonicity: total virtual time is non-decreasing in each cost field") {
  const auto ops = make_bulk_ops(30);
  const auto inline_ops = tb_ops(3, kInf);
  auto totals = [&](const LatencyModel& m) {
    return std::array<double, 4>{run_lookaside_sequential(ops, m).total_us, run_lookaside_bulk(ops, m).total_us,
                                 inline_decode_sequential(inline_ops, m).total_us,
                                 inline_decode_parallel(inline_ops, m).total_us};
  };
  using Field = double LatencyModel::*;
  for (Field f : {&LatencyModel::transfer_per_byte, &LatencyModel::dma_overhead, &LatencyModel::pipeline_ii,
                  &LatencyModel::op_service, &LatencyModel::return_overhead, &LatencyModel::launch_overhead,
                  &LatencyModel::per_codeword_time}) {
    LatencyModel m;
    m.transfer_per_byte = 0.001;
    auto prev = totals(m);
    for (int step = 0; step < 4; ++step) {
      m.*f += f == &LatencyModel::transfer_per_byte ? 0.002 : 1.5;
      if (m.pipeline_ii > m.op_service) m.op_service = m.pipeline_ii;
      const auto cur = totals(m);
      for (int i = 0; i < 4; ++i) CHECK(cur[i] >= prev[i]);
      prev = cur;
    }
  }
  SUBCASE("poll interval, integer multiples") {
    LatencyModel m;
    auto prev = totals(m);
    for (double p : {2.0, 4.0, 8.0}) {
      m.poll_interval = p;
      const auto cur = totals(m);
      for (int i = 0; i < 2; ++i) CHECK(cur[i] >= prev[i]);
      prev = cur;
    }
  }
  SUBCASE("capacity: more slots never cost time") {
    LatencyModel m;
    m.capacity = 1;
    auto prev = totals(m);
    for (int c : {2, 3, 8, 256}) {
      m.capacity = c;
      const auto cur = totals(m);
      for (int i = 2; i < 4; ++i) CHECK(cur[i] <= prev[i]);
      prev = cur;
    }
  }
}

TEST_CASE("inline: kernel time follows the launch model") {
  const LatencyModel m;
  const auto one = make_bulk_ops(1);
  const auto seq1 = inline_decode_sequential(one, m);
  CHECK(seq1.kernel_us == m.launch_overhead + m.per_codeword_time);
  const auto par1 = inline_decode_parallel(one, m);
  CHECK(par1.kernel_us == seq1.kernel_us);
  CHECK(par1.total_us == seq1.total_us);

  const auto ten = tb_ops(10, kInf);
  const int c = static_cast<int>(ten.size()) / 10;
  CHECK(inline_decode_sequential(ten, m).kernel_us == 10 * (m.launch_overhead + c * m.per_codeword_time));
  CHECK(inline_decode_parallel(ten, m).kernel_us == m.launch_overhead + m.per_codeword_time);

  LatencyModel small = m;
  small.capacity = 4;
  CHECK(inline_decode_parallel(ten, small).kernel_us ==
        small.launch_overhead + ((static_cast<int>(ten.size()) + 3) / 4) * small.per_codeword_time);
}

TEST_CASE("inline: utilization, sequential flat and parallel linear until capacity") {
  LatencyModel m;
  m.capacity = 16;
  std::vector<double> seq_util, par_util;
  for (int n : {1, 2, 4, 8, 12}) {
    const auto ops = make_bulk_ops(n);
    seq_util.push_back(inline_decode_sequential(ops, m).utilization);
    par_util.push_back(inline_decode_parallel(ops, m).utilization);
  }
  for (double u : seq_util) CHECK(u == doctest::Approx(1.0 / 16));
  CHECK(par_util[0] == doctest::Approx(1.0 / 16));
  CHECK(par_util[2] == doctest::Approx(4.0 / 16));
  CHECK(par_util[4] == doctest::Approx(12.0 / 16));
  CHECK(inline_decode_parallel(make_bulk_ops(40), m).utilization == 1.0);
}

TEST_CASE("inline: parallel kernel time never exceeds sequential") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    LatencyModel m;
    m.capacity = 1 + static_cast<int>(rng() % 20);
    m.launch_overhead = static_cast<double>(rng() % 30);
    m.per_codeword_time = static_cast<double>(rng() % 5);
    auto ops = make_bulk_ops(1 + static_cast<int>(rng() % 30));
    for (auto& d : ops) d.tb_id = static_cast<int>(rng() % 5);
    CHECK(inline_decode_parallel(ops, m).kernel_us <= inline_decode_sequential(ops, m).kernel_us);
  }
}

TEST_CASE("make_backend: uniform contract across kinds") {
  const auto ops = tb_ops(3, 1.0, 77, 2000);
  std::vector<std::vector<BitVector>> decoded;
  for (auto kind : {BackendKind::cpu, BackendKind::lookaside, BackendKind::inline_gpu, BackendKind::inline_unified}) {
    auto b = make_backend(kind, default_model(kind));
    CHECK(b->kind() == kind);
    CHECK(b->clock_type() == (kind == BackendKind::cpu ? ClockType::wall : ClockType::virtual_time));
    const auto r = b->submit(ops);
    CHECK(r.ok());
    CHECK(r.tb_latencies.size() == 3);
    decoded.push_back(bits_of(r));
  }
  for (const auto& d : decoded) CHECK(d == decoded.front());
  CHECK_THROWS_AS(make_backend("fpga", LatencyModel{}), ConfigError);
  CHECK(parse_backend_kind("inline-unified") == BackendKind::inline_unified);
  CHECK(to_string(BackendKind::inline_gpu) == "inline");
}

TEST_CASE("make_backend: inline-unified equals inline with zero transfer costs") {
  const auto ops = tb_ops(2, kInf);
  LatencyModel m = LatencyModel::inline_defaults();
  const auto unified = make_backend(BackendKind::inline_unified, m)->submit(ops);
  m.transfer_per_byte = 0.0;
  m.dma_overhead = 0.0;
  m.return_overhead = 0.0;
  const auto plain = make_backend(BackendKind::inline_gpu, m)->submit(ops);
  CHECK(unified.total_us == plain.total_us);
  CHECK(unified.kernel_us == plain.kernel_us);
  CHECK(LatencyModel::inline_unified_defaults() == m);
}

TEST_CASE("latency model validation and overrides") {
  LatencyModel m;
  m.pipeline_ii = 20;
  CHECK_THROWS_AS(validate(m), ConfigError);
  m = LatencyModel{};
  m.capacity = 0;
  CHECK_THROWS_AS(validate(m), ConfigError);
  m = LatencyModel{};
  m.dma_overhead = -1;
  CHECK_THROWS_AS(validate(m), ConfigError);
  m = LatencyModel{};
  apply_overrides(m, {{"op_service", "25"}, {"capacity", "128"}});
  CHECK(m.op_service == 25.0);
  CHECK(m.capacity == 128);
  CHECK_THROWS_AS(apply_overrides(m, {{"latency", "1"}}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(m, {{"op_service", "fast"}}), ConfigError);
}

TEST_CASE("virtual backends are bit-reproducible") {
  const auto ops = tb_ops(4, 0.5, 3, 1500);
  for (auto kind : {BackendKind::lookaside, BackendKind::inline_gpu, BackendKind::inline_unified}) {
    auto a = make_backend(kind, default_model(kind))->submit(ops);
    auto b = make_backend(kind, default_model(kind))->submit(ops);
    CHECK(a.results == b.results);
    CHECK(a.total_us == b.total_us);
    for (std::size_t i = 0; i < a.tb_latencies.size(); ++i) {
      CHECK(a.tb_latencies[i].latency_us == b.tb_latencies[i].latency_us);
    }
  }
}

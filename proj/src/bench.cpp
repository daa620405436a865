#include "decodex/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "decodex/error.hpp"
#include "decodex/phy.hpp"

namespace decodex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

BitVector random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitVector bits(n);
  for (std::size_t i = 0; i < n; i += 64) {
    const std::uint64_t word = rng();
    for (std::size_t j = 0; j < 64 && i + j < n; ++j) bits[i + j] = static_cast<Bit>((word >> j) & 1U);
  }
  return bits;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SweepConfig::SweepConfig() {
  for (int m = 0; m <= 19; ++m) mcs_set.push_back(m);
  for (int s = -2; s <= 10; s += 2) snr_grid_db.push_back(s);
}

void validate(const SweepConfig& c) {
  if (c.backends.empty() || c.mcs_set.empty() || c.snr_grid_db.empty() || c.prb_set.empty()) {
    throw ConfigError("sweep: backends, mcs, snr_db and prb lists must be non-empty");
  }
  if (c.n_tb < 1) throw ConfigError("sweep: n_tb must be >= 1");
  if (c.max_iterations < 1) throw ConfigError("sweep: max_iterations must be >= 1");
  if (c.knobs.workers < 1) throw ConfigError("sweep: workers must be >= 1");
  for (const auto& b : c.backends) parse_backend_kind(b);
  for (int m : c.mcs_set) {
    if (m < 0 || m > kMaxMcsIndex) throw ConfigError("sweep: mcs index out of range: " + std::to_string(m));
  }
  for (int p : c.prb_set) {
    if (p < 1) throw ConfigError("sweep: prb must be >= 1");
  }
  for (double s : c.snr_grid_db) {
    if (std::isnan(s)) throw ConfigError("sweep: snr_db must be a number");
  }
  for (const auto& [name, values] : c.model_overrides) model_for(c, parse_backend_kind(name));
}

LatencyModel model_for(const SweepConfig& config, BackendKind kind) {
  LatencyModel m = default_model(kind == BackendKind::inline_unified ? BackendKind::inline_gpu : kind);
  auto apply = [&](std::string_view name) {
    if (auto it = config.model_overrides.find(std::string(name)); it != config.model_overrides.end()) {
      apply_overrides(m, it->second);
    }
  };
  if (kind == BackendKind::inline_unified) apply(to_string(BackendKind::inline_gpu));
  apply(to_string(kind));
  if (kind == BackendKind::inline_unified) {
    m.transfer_per_byte = 0.0;
    m.dma_overhead = 0.0;
    m.return_overhead = 0.0;
  }
  validate(m);
  return m;
}

std::uint64_t cell_seed(std::uint64_t master, int mcs, double snr_db, int prb) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(mcs));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(snr_db));
  h = splitmix64(h ^ static_cast<std::uint64_t>(prb));
  return h;
}

TbVector make_tb_vector(const TbConfig& config, double snr_db, std::uint64_t seed, int tb_id, int max_iterations) {
  TbVector v;
  v.payload = random_bits(static_cast<std::size_t>(config.payload_bits), seed);
  EncodedTb enc = encode_transport_block(v.payload, config);
  v.plan = std::move(enc.plan);

  ChannelConfig channel;
  channel.snr_db = snr_db;
  channel.seed = splitmix64(seed);
  const SymbolBlock rx = transmit(modulate(enc.coded, config.qm), channel);
  const double sigma2 = channel.noiseless() ? 1e-3 : channel.noise_variance();
  v.received = demap_llr(rx, config.qm, sigma2);
  v.received.resize(enc.coded.size());
  v.descriptors = make_descriptors(v.plan, v.received, tb_id, max_iterations);
  return v;
}

SweepRecord run_cell(Backend& backend, int mcs, double snr_db, int prb, int n_tb, std::uint64_t seed,
                     int max_iterations) {
  if (n_tb < 1) throw ConfigError("run_cell: n_tb must be >= 1");
  SweepRecord rec;
  rec.backend = std::string(to_string(backend.kind()));
  rec.mcs = mcs;
  rec.snr_db = snr_db;
  rec.prb = prb;
  rec.n_tb = n_tb;
  rec.clock_type = std::string(to_string(backend.clock_type()));

  const TbConfig config = TbConfig::from_mcs(mcs_lookup(mcs), prb);
  std::vector<double> latency;
  std::vector<double> utilization;
  long failed = 0, cb_count = 0, iteration_sum = 0;
  for (int t = 0; t < n_tb; ++t) {
    const TbVector v = make_tb_vector(config, snr_db, seed ^ static_cast<std::uint64_t>(t), t, max_iterations);
    const BackendReport report = backend.submit(v.descriptors);
    if (!report.ok() && !rec.failure) rec.failure = report.failure;
    for (const auto& l : report.tb_latencies) latency.push_back(l.latency_us);
    utilization.push_back(report.utilization);
    for (int it : report.iterations) iteration_sum += it;
    cb_count += static_cast<long>(report.iterations.size());
    if (!report.ok() || !reassemble_transport_block(v.plan, report.results).ok()) ++failed;
  }
  rec.bler = static_cast<double>(failed) / n_tb;
  rec.mean_iterations = cb_count > 0 ? static_cast<double>(iteration_sum) / static_cast<double>(cb_count) : 0.0;
  rec.p50_us = percentile(latency, 0.50);
  rec.p99_us = percentile(latency, 0.99);
  rec.mean_us = mean(latency);
  rec.utilization = mean(utilization);
  return rec;
}

SweepRecord run_cell(const SweepConfig& config, BackendKind kind, int mcs, double snr_db, int prb) {
  auto backend = make_backend(kind, model_for(config, kind), config.knobs);
  return run_cell(*backend, mcs, snr_db, prb, config.n_tb, cell_seed(config.seed, mcs, snr_db, prb),
                  config.max_iterations);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  validate(config);
  std::vector<SweepRecord> out;
  for (const auto& name : config.backends) {
    const BackendKind kind = parse_backend_kind(name);
    for (int mcs : config.mcs_set) {
      for (double snr : config.snr_grid_db) {
        for (int prb : config.prb_set) {
          try {
            out.push_back(run_cell(config, kind, mcs, snr, prb));
          } catch (const ConfigError&) {
            throw;
          } catch (const std::exception& e) {
            SweepRecord rec;
            rec.backend = name;
            rec.mcs = mcs;
            rec.snr_db = snr;
            rec.prb = prb;
            rec.n_tb = config.n_tb;
            rec.bler = 1.0;
            rec.clock_type = std::string(to_string(make_backend(kind, model_for(config, kind))->clock_type()));
            rec.failure = e.what();
            out.push_back(std::move(rec));
          }
        }
      }
    }
  }
  return out;
}

std::vector<ParallelStudyRow> run_parallel_study(const std::vector<int>& n_ue_list, int prb_total, int mcs,
                                                 const LatencyModel& model) {
  if (prb_total < 1) throw ConfigError("parallel study: prb_total must be >= 1");
  const McsEntry entry = mcs_lookup(mcs);
  std::vector<ParallelStudyRow> rows;
  for (int n_ue : n_ue_list) {
    if (n_ue < 1) throw ConfigError("parallel study: n_ue must be >= 1");
    if (n_ue > prb_total) throw ConfigError("parallel study: n_ue exceeds prb_total");
    std::vector<DecodeDescriptor> ops;
    const int share = prb_total / n_ue;
    for (int ue = 0; ue < n_ue; ++ue) {
      const int prb = ue == n_ue - 1 ? prb_total - share * (n_ue - 1) : share;
      auto v = make_tb_vector(TbConfig::from_mcs(entry, prb), std::numeric_limits<double>::infinity(),
                              static_cast<std::uint64_t>(ue + 1), ue, 20);
      for (auto& d : v.descriptors) ops.push_back(std::move(d));
    }
    const BackendReport seq = inline_decode_sequential(ops, model);
    const BackendReport par = inline_decode_parallel(ops, model);
    ParallelStudyRow row;
    row.n_ue = n_ue;
    row.codewords = static_cast<int>(ops.size());
    row.sequential_kernel_us = seq.kernel_us;
    row.parallel_kernel_us = par.kernel_us;
    row.sequential_total_us = seq.total_us;
    row.parallel_total_us = par.total_us;
    row.sequential_utilization = seq.utilization;
    row.parallel_utilization = par.utilization;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DecodeDescriptor> make_bulk_ops(int n, std::uint64_t seed) {
  if (n < 0) throw ArgumentError("make_bulk_ops: n must be >= 0");
  TbConfig config;
  config.payload_bits = 64;
  config.qm = 2;
  config.rate_num = 512;
  config.coded_bits = 180;
  std::vector<DecodeDescriptor> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto v = make_tb_vector(config, std::numeric_limits<double>::infinity(), seed ^ static_cast<std::uint64_t>(i), i,
                            20);
    ops.push_back(std::move(v.descriptors.front()));
  }
  return ops;
}

std::vector<BulkStudyRow> run_bulk_study(const std::vector<int>& n_ops_list, const LatencyModel& model,
                                         const LookasideKnobs& knobs) {
  std::vector<BulkStudyRow> rows;
  for (int n : n_ops_list) {
    if (n < 1) throw ConfigError("bulk study: n_ops must be >= 1");
    const auto ops = make_bulk_ops(n);
    const BackendReport seq = run_lookaside_sequential(ops, model, knobs);
    const BackendReport bulk = run_lookaside_bulk(ops, model, knobs);
    BulkStudyRow row;
    row.n_ops = n;
    row.sequential_tput = seq.total_us > 0 ? n / (seq.total_us * 1e-6) : 0.0;
    row.bulk_tput = bulk.total_us > 0 ? n / (bulk.total_us * 1e-6) : 0.0;
    row.ratio = bulk.total_us > 0 ? seq.total_us / bulk.total_us : 1.0;
    row.ok = seq.ok() && bulk.ok();
    rows.push_back(row);
  }
  return rows;
}

std::vector<IterationStudyRow> run_iteration_study(const std::vector<long>& k_list,
                                                   const std::vector<double>& rate_list,
                                                   const std::vector<int>& iter_list, int repetitions) {
  if (k_list.size() != rate_list.size()) throw ConfigError("iteration study: k and rate lists differ in length");
  if (repetitions < 1) throw ConfigError("iteration study: repetitions must be >= 1");
  for (int it : iter_list) {
    if (it < 1) throw ArgumentError("iteration study: iterations must be >= 1");
  }
  std::vector<IterationStudyRow> rows;
  for (std::size_t p = 0; p < k_list.size(); ++p) {
    const long k = k_list[p];
    const double rate = rate_list[p];
    if (k < 8 || k % 8 != 0) throw ConfigError("iteration study: K must be a positive multiple of 8");
    if (!(rate > 0.0 && rate < 1.0)) throw ConfigError("iteration study: rate must be in (0, 1)");
    TbConfig config;
    config.payload_bits = k;
    config.qm = 2;
    config.rate_num = static_cast<int>(std::lround(rate * 1024.0));
    config.coded_bits = static_cast<long>(std::ceil(static_cast<double>(k) / rate));
    const TbVector v = make_tb_vector(config, 4.0, static_cast<std::uint64_t>(k), 0, 1);

    for (int iters : iter_list) {
      std::vector<DecodeDescriptor> ops = v.descriptors;
      for (auto& d : ops) d.max_iterations = iters;
      DecoderOptions forced;
      forced.early_termination = false;
      cpu_decode_batch(ops, 1, forced);  // warm-up
      std::vector<double> samples;
      for (int r = 0; r < repetitions; ++r) {
        samples.push_back(cpu_decode_batch(ops, 1, forced).tb_latencies.front().latency_us);
      }
      rows.push_back({k, rate, iters, mean(samples)});
    }
  }
  return rows;
}

void dump_golden_vectors(std::ostream& out, std::uint64_t seed) {
  struct Case {
    int mcs;
    int prb;
    double snr_db;
  };
  const Case cases[] = {{0, 4, 2.0}, {4, 20, 4.0}, {9, 10, 8.0}, {12, 8, 12.0}, {19, 6, 20.0}};
  char buf[32];
  for (const auto& c : cases) {
    const std::uint64_t s = cell_seed(seed, c.mcs, c.snr_db, c.prb);
    const TbVector v = make_tb_vector(TbConfig::from_mcs(mcs_lookup(c.mcs), c.prb), c.snr_db, s, 0, 20);
    const auto& seg = v.plan.segmentation;
    for (int r = 0; r < v.plan.num_cbs(); ++r) {
      const auto& p = v.plan.cbs[r];
      const std::size_t first = v.plan.output_slots[r];
      const std::size_t last = std::min<std::size_t>(first + seg.payload_per_cb(), v.payload.size());
      std::string hex;
      for (std::size_t i = first; i < last; i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j) nibble = (nibble << 1) | (i + j < last ? v.payload[i + j] : 0U);
        hex.push_back("0123456789abcdef"[nibble]);
      }
      if (hex.empty()) hex = "-";
      std::snprintf(buf, sizeof buf, "%g", c.snr_db);
      out << static_cast<int>(p.bg) << ',' << p.zc << ',' << p.e << ',' << buf << ',' << s << ',' << hex;
      for (long i = 0; i < p.e; ++i) out << ',' << static_cast<int>(v.received[v.plan.coded_offsets[r] + i]);
      out << '\n';
    }
  }
}

}  // namespace decodex

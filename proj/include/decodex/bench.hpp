#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decodex/backends.hpp"
#include "decodex/latency_model.hpp"

namespace decodex {

struct SweepConfig {
  std::vector<std::string> backends{"cpu", "lookaside", "inline", "inline-unified"};
  std::vector<int> mcs_set;           // default 0..19
  std::vector<double> snr_grid_db;    // default -2..10 step 2
  std::vector<int> prb_set{50, 100, 150, 200};
  int n_tb = 100;
  std::vector<int> n_ue{1, 2, 5, 10};
  int prb_total = 200;
  std::uint64_t seed = 1;
  int max_iterations = 20;
  BackendKnobs knobs;
  // `[model.<backend>]` key/value overrides, keyed by backend name.
  std::map<std::string, std::map<std::string, std::string>> model_overrides;

  SweepConfig();
};

// Throws ConfigError on empty lists, n_tb < 1, unknown backends or bad ranges.
void validate(const SweepConfig& config);

// Latency model for a backend with the config's overrides applied. The
// inline-unified model starts from the inline one.
LatencyModel model_for(const SweepConfig& config, BackendKind kind);

struct SweepRecord {
  std::string backend;
  int mcs = 0;
  double snr_db = 0.0;
  int prb = 0;
  int n_tb = 0;
  double bler = 0.0;
  double mean_iterations = 0.0;
  double p50_us = 0.0;
  double p99_us = 0.0;
  double mean_us = 0.0;
  double utilization = 0.0;
  std::string clock_type;
  std::optional<std::string> failure;  // not emitted
};

// Seed of one sweep cell; independent of the backend so every backend sees
// identical vectors.
std::uint64_t cell_seed(std::uint64_t master, int mcs, double snr_db, int prb);

// One simulated TB: random payload through encode, modulation, AWGN, demapping
// and de-rate-matching. Pure function of its arguments.
struct TbVector {
  TbPlan plan;
  BitVector payload;
  LlrBlock received;  // G channel LLRs
  std::vector<DecodeDescriptor> descriptors;
};
TbVector make_tb_vector(const TbConfig& config, double snr_db, std::uint64_t seed, int tb_id, int max_iterations);

SweepRecord run_cell(Backend& backend, int mcs, double snr_db, int prb, int n_tb, std::uint64_t seed,
                     int max_iterations = 20);
SweepRecord run_cell(const SweepConfig& config, BackendKind kind, int mcs, double snr_db, int prb);

// Cartesian product backend x mcs x snr x prb in that nesting order.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

struct ParallelStudyRow {
  int n_ue = 0;
  int codewords = 0;
  double sequential_kernel_us = 0.0;
  double parallel_kernel_us = 0.0;
  double sequential_total_us = 0.0;
  double parallel_total_us = 0.0;
  double sequential_utilization = 0.0;
  double parallel_utilization = 0.0;
};
std::vector<ParallelStudyRow> run_parallel_study(const std::vector<int>& n_ue_list, int prb_total, int mcs,
                                                 const LatencyModel& model);

struct BulkStudyRow {
  int n_ops = 0;
  double sequential_tput = 0.0;  // ops per second of virtual time
  double bulk_tput = 0.0;
  double ratio = 0.0;
  bool ok = true;
};
std::vector<BulkStudyRow> run_bulk_study(const std::vector<int>& n_ops_list, const LatencyModel& model,
                                         const LookasideKnobs& knobs = {});
// n small noiseless BG2 descriptors, one CB each, tb_id = index.
std::vector<DecodeDescriptor> make_bulk_ops(int n, std::uint64_t seed = 7);

struct IterationStudyRow {
  long k = 0;
  double rate = 0.0;
  int iters = 0;
  double mean_us = 0.0;
};
// Zips k_list with rate_list; every pair is decoded at every iteration count
// with early termination disabled.
std::vector<IterationStudyRow> run_iteration_study(const std::vector<long>& k_list,
                                                   const std::vector<double>& rate_list,
                                                   const std::vector<int>& iter_list, int repetitions = 5);

// Golden vectors: one line per CB, `bg,zc,e,snr_db,seed,payload_hex,llr_csv`.
void dump_golden_vectors(std::ostream& out, std::uint64_t seed);

}  // namespace decodex

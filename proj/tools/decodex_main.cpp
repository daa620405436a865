#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "decodex/bench.hpp"
#include "decodex/config.hpp"
#include "decodex/emit.hpp"
#include "decodex/error.hpp"

namespace {

using namespace decodex;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCellFailure = 2;

SweepConfig load_or_default(const std::string& path) {
  SweepConfig config = path.empty() ? SweepConfig{} : load_sweep_config(path);
  apply_seed_env(config);
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decodex: 5G NR LDPC decoding benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  auto* sweep = app.add_subcommand("sweep", "Backend x MCS x SNR x PRB latency/BLER grid");
  sweep->add_option("--config", config_path, "INI file with [sweep] and [model.<backend>] sections")
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "Output path (default stdout)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string n_ops = "1,10,100,1000";
  auto* bulk = app.add_subcommand("bulk-study", "Lookaside sequential vs bulk throughput");
  bulk->add_option("--n-ops", n_ops, "Comma-separated op counts");
  bulk->add_option("--config", config_path, "INI file for [model.lookaside]")->check(CLI::ExistingFile);
  bulk->add_option("--out", out_path, "Output path (default stdout)");

  std::string ue = "1,2,5,10";
  int prb_total = 200, mcs = 4;
  auto* parallel = app.add_subcommand("parallel-study", "Inline sequential vs parallel launches");
  parallel->add_option("--ue", ue, "Comma-separated UE counts");
  parallel->add_option("--prb", prb_total, "Total PRBs shared by the UEs");
  parallel->add_option("--mcs", mcs, "MCS index");
  parallel->add_option("--config", config_path, "INI file for [model.inline]")->check(CLI::ExistingFile);
  parallel->add_option("--out", out_path, "Output path (default stdout)");

  std::string k_list = "1936,4224,8440", rate_list = "0.33,0.33,0.88", iter_list = "2,4,8";
  int reps = 5;
  auto* iter = app.add_subcommand("iter-study", "Forced-iteration CPU decode latency vs K");
  iter->add_option("--k", k_list, "Information bits per TB");
  iter->add_option("--rate", rate_list, "Code rate per K");
  iter->add_option("--iters", iter_list, "Iteration counts");
  iter->add_option("--reps", reps, "Repetitions per point");
  iter->add_option("--out", out_path, "Output path (default stdout)");

  std::string dump_path;
  std::uint64_t seed = 1;
  auto* vectors = app.add_subcommand("vectors", "Golden test vectors");
  vectors->add_option("--dump", dump_path, "Output path, - for stdout")->required();
  vectors->add_option("--seed", seed, "Master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const SweepConfig config = load_or_default(config_path);
      const auto records = run_sweep(config);
      write_text(out_path, format_records(records, parse_emit_format(format)));
      int status = kExitOk;
      for (const auto& r : records) {
        if (r.failure) {
          std::cerr << "cell " << r.backend << " mcs=" << r.mcs << " snr=" << r.snr_db << " prb=" << r.prb
                    << ": " << *r.failure << '\n';
          status = kExitCellFailure;
        }
      }
      return status;
    }
    if (bulk->parsed()) {
      const SweepConfig config = load_or_default(config_path);
      LookasideKnobs knobs;
      knobs.queue_depth = config.knobs.queue_depth;
      knobs.max_dequeue_retries = config.knobs.max_dequeue_retries;
      knobs.inter_symbol_gap = config.knobs.inter_symbol_gap;
      const auto rows = run_bulk_study(parse_int_list(n_ops), model_for(config, BackendKind::lookaside), knobs);
      std::string text = "n_ops,sequential_tput,bulk_tput,ratio\n";
      bool ok = true;
      for (const auto& r : rows) {
        text += std::to_string(r.n_ops) + ',' + g6(r.sequential_tput) + ',' + g6(r.bulk_tput) + ',' + g6(r.ratio) + '\n';
        ok = ok && r.ok;
      }
      write_text(out_path, text);
      return ok ? kExitOk : kExitCellFailure;
    }
    if (parallel->parsed()) {
      const SweepConfig config = load_or_default(config_path);
      const auto rows =
          run_parallel_study(parse_int_list(ue), prb_total, mcs, model_for(config, BackendKind::inline_gpu));
      std::string text =
          "n_ue,codewords,sequential_kernel_us,parallel_kernel_us,sequential_total_us,parallel_total_us,"
          "sequential_utilization,parallel_utilization\n";
      for (const auto& r : rows) {
        text += std::to_string(r.n_ue) + ',' + std::to_string(r.codewords) + ',' + g6(r.sequential_kernel_us) + ',' +
                g6(r.parallel_kernel_us) + ',' + g6(r.sequential_total_us) + ',' + g6(r.parallel_total_us) + ',' +
                g6(r.sequential_utilization) + ',' + g6(r.parallel_utilization) + '\n';
      }
      write_text(out_path, text);
      return kExitOk;
    }
    if (iter->parsed()) {
      const auto rows =
          run_iteration_study(parse_long_list(k_list), parse_double_list(rate_list), parse_int_list(iter_list), reps);
      std::string text = "k,rate,iters,mean_us\n";
      for (const auto& r : rows) {
        text += std::to_string(r.k) + ',' + g6(r.rate) + ',' + std::to_string(r.iters) + ',' + g6(r.mean_us) + '\n';
      }
      write_text(out_path, text);
      return kExitOk;
    }
    if (vectors->parsed()) {
      SweepConfig seeded;
      seeded.seed = seed;
      apply_seed_env(seeded);
      if (dump_path == "-") {
        dump_golden_vectors(std::cout, seeded.seed);
        if (!std::cout.flush()) throw IoError("failed writing stdout");
        return kExitOk;
      }
      std::ofstream out(dump_path, std::ios::trunc);
      if (!out) throw IoError("cannot open " + dump_path + " for writing");
      dump_golden_vectors(out, seeded.seed);
      if (!out) throw IoError("failed writing " + dump_path);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

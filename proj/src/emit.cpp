#include "decodex/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "decodex/error.hpp"

namespace decodex {

namespace {

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) { return std::stod(sig6(v)); }

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

EmitFormat parse_emit_format(std::string_view name) {
  if (name == "csv") return EmitFormat::csv;
  if (name == "json") return EmitFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_records(std::span<const SweepRecord> records, EmitFormat format) {
  if (records.empty()) throw ArgumentError("emit: no records");
  if (format == EmitFormat::json) {
    auto array = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      array.push_back({{"backend", r.backend},
                       {"mcs", r.mcs},
                       {"snr_db", round6(r.snr_db)},
                       {"prb", r.prb},
                       {"n_tb", r.n_tb},
                       {"bler", round6(r.bler)},
                       {"mean_iterations", round6(r.mean_iterations)},
                       {"p50_us", round6(r.p50_us)},
                       {"p99_us", round6(r.p99_us)},
                       {"mean_us", round6(r.mean_us)},
                       {"utilization", round6(r.utilization)},
                       {"clock_type", r.clock_type}});
    }
    return array.dump(2) + "\n";
  }
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.backend << ',' << r.mcs << ',' << sig6(r.snr_db) << ',' << r.prb << ',' << r.n_tb << ','
        << sig6(r.bler) << ',' << sig6(r.mean_iterations) << ',' << sig6(r.p50_us) << ',' << sig6(r.p99_us) << ','
        << sig6(r.mean_us) << ',' << sig6(r.utilization) << ',' << r.clock_type << '\n';
  }
  return out.str();
}

void emit(std::span<const SweepRecord> records, EmitFormat format, const std::filesystem::path& path) {
  const std::string text = format_records(records, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<SweepRecord> parse_records(std::string_view text, EmitFormat format) {
  std::vector<SweepRecord> out;
  if (format == EmitFormat::json) {
    const auto array = nlohmann::json::parse(text);
    for (const auto& o : array) {
      SweepRecord r;
      r.backend = o.at("backend").get<std::string>();
      r.mcs = o.at("mcs").get<int>();
      r.snr_db = o.at("snr_db").get<double>();
      r.prb = o.at("prb").get<int>();
      r.n_tb = o.at("n_tb").get<int>();
      r.bler = o.at("bler").get<double>();
      r.mean_iterations = o.at("mean_iterations").get<double>();
      r.p50_us = o.at("p50_us").get<double>();
      r.p99_us = o.at("p99_us").get<double>();
      r.mean_us = o.at("mean_us").get<double>();
      r.utilization = o.at("utilization").get<double>();
      r.clock_type = o.at("clock_type").get<std::string>();
      out.push_back(std::move(r));
    }
    return out;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ArgumentError("parse_records: missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw ArgumentError("parse_records: expected 12 fields: " + line);
    SweepRecord r;
    r.backend = f[0];
    r.mcs = std::stoi(f[1]);
    r.snr_db = std::stod(f[2]);
    r.prb = std::stoi(f[3]);
    r.n_tb = std::stoi(f[4]);
    r.bler = std::stod(f[5]);
    r.mean_iterations = std::stod(f[6]);
    r.p50_us = std::stod(f[7]);
    r.p99_us = std::stod(f[8]);
    r.mean_us = std::stod(f[9]);
    r.utilization = std::stod(f[10]);
    r.clock_type = f[11];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace decodex

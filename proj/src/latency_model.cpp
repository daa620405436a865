#include "decodex/latency_model.hpp"

#include <cmath>
#include <stdexcept>

#include "decodex/error.hpp"

namespace decodex {

LatencyModel LatencyModel::lookaside_defaults() { return LatencyModel{}; }

LatencyModel LatencyModel::inline_defaults() {
  LatencyModel m;
  m.transfer_per_byte = 1e-4;  // ~10 GB/s host link
  return m;
}

LatencyModel LatencyModel::inline_unified_defaults() {
  LatencyModel m = inline_defaults();
  m.transfer_per_byte = 0.0;
  m.dma_overhead = 0.0;
  m.return_overhead = 0.0;
  return m;
}

VirtualTime LatencyModel::transfer(std::size_t bytes) const {
  return VirtualTime(std::llround(static_cast<double>(bytes) * transfer_per_byte * 1000.0));
}

VirtualTime to_virtual(double microseconds) { return VirtualTime(std::llround(microseconds * 1000.0)); }

double to_microseconds(VirtualTime t) { return static_cast<double>(t.count()) / 1000.0; }

void validate(const LatencyModel& m) {
  for (double v : {m.transfer_per_byte, m.dma_overhead, m.pipeline_ii, m.op_service, m.return_overhead,
                   m.launch_overhead, m.per_codeword_time, m.poll_interval}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("latency model: fields must be finite and >= 0");
  }
  if (m.capacity < 1) throw ConfigError("latency model: capacity must be >= 1");
  if (m.pipeline_ii > m.op_service) throw ConfigError("latency model: pipeline_ii must not exceed op_service");
  if (!(m.poll_interval > 0.0)) throw ConfigError("latency model: poll_interval must be > 0");
}

void apply_overrides(LatencyModel& m, const std::map<std::string, std::string>& values) {
  for (const auto& [key, text] : values) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("latency model: '" + key + "' is not a number: " + text);
    }
    if (key == "transfer_per_byte") m.transfer_per_byte = v;
    else if (key == "dma_overhead") m.dma_overhead = v;
    else if (key == "pipeline_ii") m.pipeline_ii = v;
    else if (key == "op_service") m.op_service = v;
    else if (key == "return_overhead") m.return_overhead = v;
    else if (key == "launch_overhead") m.launch_overhead = v;
    else if (key == "per_codeword_time") m.per_codeword_time = v;
    else if (key == "capacity") {
      if (v != std::floor(v)) throw ConfigError("latency model: capacity must be an integer");
      m.capacity = static_cast<int>(v);
    } else if (key == "poll_interval") m.poll_interval = v;
    else throw ConfigError("latency model: unknown field '" + key + "'");
  }
}

}  // namespace decodex

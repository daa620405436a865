#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>

namespace decodex {

// Virtual simulator time. Integer nanoseconds keep event timelines exact.
using VirtualTime = std::chrono::nanoseconds;

// Cost model of a simulated accelerator. Configuration values are in
// microseconds (transfer_per_byte in microseconds per byte).
struct LatencyModel {
  double transfer_per_byte = 0.0;  // host<->device, each direction
  double dma_overhead = 10.0;      // fixed per-op transfer setup
  double pipeline_ii = 1.0;        // minimum spacing of op starts
  double op_service = 18.0;        // per-op decode time
  double return_overhead = 2.0;    // fixed per-op result write-back
  double launch_overhead = 15.0;   // inline: per kernel launch
  double per_codeword_time = 1.0;  // inline: one wave of codewords
  int capacity = 256;              // inline: concurrent codeword slots
  double poll_interval = 1.0;      // host polling granularity

  static LatencyModel lookaside_defaults();
  static LatencyModel inline_defaults();
  // Inline with host transfers removed (unified memory).
  static LatencyModel inline_unified_defaults();

  VirtualTime transfer(std::size_t bytes) const;

  friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

// Throws ConfigError on negative fields, capacity < 1, pipeline_ii > op_service
// or a non-positive poll interval.
void validate(const LatencyModel& model);

VirtualTime to_virtual(double microseconds);
double to_microseconds(VirtualTime t);

// Applies `field = value` pairs (field names exactly as above); unknown keys
// throw ConfigError.
void apply_overrides(LatencyModel& model, const std::map<std::string, std::string>& values);

}  // namespace decodex

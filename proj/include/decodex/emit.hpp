#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decodex/bench.hpp"

namespace decodex {

enum class EmitFormat { csv, json };
EmitFormat parse_emit_format(std::string_view name);  // throws ConfigError

inline constexpr std::string_view kCsvHeader =
    "backend,mcs,snr_db,prb,n_tb,bler,mean_iterations,p50_us,p99_us,mean_us,utilization,clock_type";

// Floats use 6 significant digits. Records must be non-empty.
std::string format_records(std::span<const SweepRecord> records, EmitFormat format);
// Throws IoError when the path cannot be written.
void emit(std::span<const SweepRecord> records, EmitFormat format, const std::filesystem::path& path);

std::vector<SweepRecord> parse_records(std::string_view text, EmitFormat format);

}  // namespace decodex

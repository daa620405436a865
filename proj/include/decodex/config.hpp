#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "decodex/bench.hpp"

namespace decodex {

// Flat INI-style file: `[section]` headers, `key = value` lines, `#`/`;`
// comments. Duplicate keys or keys outside a section throw ConfigError.
using IniSections = std::map<std::string, std::map<std::string, std::string>>;
IniSections parse_ini(std::string_view text);

// Sections `[sweep]` and `[model.<backend>]`. Lists are comma separated and
// integer lists accept `a-b` ranges. Unknown sections or keys throw ConfigError.
SweepConfig parse_sweep_config(std::string_view text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

// Applies DECODEX_SEED when set; a malformed value throws ConfigError.
void apply_seed_env(SweepConfig& config);

std::vector<int> parse_int_list(std::string_view text);
std::vector<long> parse_long_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace decodex

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace decodex {

// Toy is a small 4x8 graph bundled for exhaustive maximum-likelihood checks.
enum class BaseGraphId : int { toy = 0, bg1 = 1, bg2 = 2 };

std::string_view to_string(BaseGraphId id);

inline constexpr int kNumShiftSets = 8;
inline constexpr int kMaxLiftingSize = 384;

struct BaseEntry {
  int row = 0;
  int col = 0;
  std::array<int, kNumShiftSets> shift{};  // one coefficient per lifting-size set index
};

struct BaseGraph {
  BaseGraphId id = BaseGraphId::bg1;
  int rows = 0;
  int cols = 0;
  int info_cols = 0;  // systematic base columns (22 for BG1, 10 for BG2)
  std::vector<BaseEntry> entries;  // non-null circulants, row-major order
};

// Expected non-null entry counts of the standard tables.
inline constexpr int kBg1Entries = 316;
inline constexpr int kBg2Entries = 197;

// Parses the `# decodex-bg v1` text format. Rejects duplicate (row, col)
// pairs, partially null entries, checksum or `entries=` mismatches, and
// standard graphs whose entry count differs from 316 / 197.
std::vector<BaseGraph> parse_base_graph_table(std::string_view text);
std::vector<BaseGraph> load_base_graph_file(const std::string& path);

// Bundled tables, parsed and validated once on first use.
const BaseGraph& standard_base_graph(BaseGraphId id);

// FNV-1a 64 over the data lines (each line plus '\n'); used as the table checksum.
std::uint64_t table_checksum(std::string_view data_lines);

// Lifting sizes Zc = a * 2^j <= 384, a in {2,3,5,7,9,11,13,15}; set index iLS
// is the position of `a` in that list.
std::span<const int> lifting_sizes();
bool is_valid_lifting_size(int zc);
int lifting_set_index(int zc);  // throws ConfigError for invalid zc
bool lifting_size_in_set(int zc, int set_index);

}  // namespace decodex

#include "decodex/base_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include "decodex/error.hpp"

namespace decodex {

namespace detail {
extern const std::string_view kNrBaseGraphTable;
extern const std::string_view kToyBaseGraphTable;
}  // namespace detail

namespace {

constexpr std::array<int, kNumShiftSets> kSetBases = {2, 3, 5, 7, 9, 11, 13, 15};

std::vector<int> build_lifting_sizes() {
  std::vector<int> out;
  for (int a : kSetBases) {
    for (int z = a; z <= kMaxLiftingSize; z *= 2) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int parse_int(std::string_view field, int line_no) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ConfigError("base graph table line " + std::to_string(line_no) + ": bad integer '" +
                      std::string(field) + "'");
  }
  return value;
}

// Looks for `key=value` tokens in a comment line.
std::optional<std::string> header_value(std::string_view line, std::string_view key) {
  std::string needle = std::string(key) + "=";
  auto pos = line.find(needle);
  if (pos == std::string_view::npos) return std::nullopt;
  if (pos > 0 && line[pos - 1] != ' ' && line[pos - 1] != '#') return std::nullopt;
  auto rest = line.substr(pos + needle.size());
  auto end = rest.find(' ');
  return std::string(rest.substr(0, end));
}

}  // namespace

std::string_view to_string(BaseGraphId id) {
  switch (id) {
    case BaseGraphId::toy: return "toy";
    case BaseGraphId::bg1: return "BG1";
    case BaseGraphId::bg2: return "BG2";
  }
  return "?";
}

std::uint64_t table_checksum(std::string_view data_lines) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data_lines) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<BaseGraph> parse_base_graph_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  std::optional<long> declared_entries;
  std::optional<std::uint64_t> declared_checksum;
  std::string data_lines;
  std::map<int, BaseGraph> graphs;
  std::map<int, std::set<std::pair<int, int>>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# decodex-bg v1", 0) == 0) saw_magic = true;
      if (auto v = header_value(line, "entries")) declared_entries = std::stol(*v);
      if (auto v = header_value(line, "fnv1a64")) declared_checksum = std::stoull(*v, nullptr, 16);
      continue;
    }
    if (!saw_magic) throw ConfigError("base graph table: missing '# decodex-bg v1' header");
    data_lines += line;
    data_lines += '\n';

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3 + kNumShiftSets) {
      throw ConfigError("base graph table line " + std::to_string(line_no) + ": expected 11 fields");
    }
    const int bg = parse_int(fields[0], line_no);
    if (bg < 0 || bg > 2) {
      throw ConfigError("base graph table line " + std::to_string(line_no) + ": unknown bg_id");
    }
    BaseEntry entry;
    entry.row = parse_int(fields[1], line_no);
    entry.col = parse_int(fields[2], line_no);
    int nulls = 0;
    for (int s = 0; s < kNumShiftSets; ++s) {
      entry.shift[s] = parse_int(fields[3 + s], line_no);
      if (entry.shift[s] == -1) ++nulls;
      else if (entry.shift[s] < 0 || entry.shift[s] >= kMaxLiftingSize) {
        throw ConfigError("base graph table line " + std::to_string(line_no) + ": shift out of range");
      }
    }
    if (nulls == kNumShiftSets) continue;
    if (nulls != 0) {
      throw ConfigError("base graph table line " + std::to_string(line_no) +
                        ": entry has shifts for only some set indices");
    }
    if (entry.row < 0 || entry.col < 0) {
      throw ConfigError("base graph table line " + std::to_string(line_no) + ": negative index");
    }
    if (!seen[bg].insert({entry.row, entry.col}).second) {
      throw ConfigError("base graph table line " + std::to_string(line_no) + ": duplicate (row, col)");
    }
    auto& g = graphs[bg];
    g.id = static_cast<BaseGraphId>(bg);
    g.rows = std::max(g.rows, entry.row + 1);
    g.cols = std::max(g.cols, entry.col + 1);
    g.entries.push_back(entry);
  }

  if (!saw_magic) throw ConfigError("base graph table: missing '# decodex-bg v1' header");
  long total = 0;
  for (const auto& [_, g] : graphs) total += static_cast<long>(g.entries.size());
  if (declared_entries && *declared_entries != total) {
    throw ConfigError("base graph table: header declares entries=" + std::to_string(*declared_entries) +
                      " but file has " + std::to_string(total));
  }
  if (declared_checksum && *declared_checksum != table_checksum(data_lines)) {
    throw ConfigError("base graph table: checksum mismatch");
  }

  std::vector<BaseGraph> out;
  for (auto& [bg, g] : graphs) {
    if (g.id == BaseGraphId::bg1 && (g.entries.size() != kBg1Entries || g.rows != 46 || g.cols != 68)) {
      throw ConfigError("base graph table: BG1 must have 316 entries over 46x68");
    }
    if (g.id == BaseGraphId::bg2 && (g.entries.size() != kBg2Entries || g.rows != 42 || g.cols != 52)) {
      throw ConfigError("base graph table: BG2 must have 197 entries over 42x52");
    }
    g.info_cols = g.cols - g.rows;
    if (g.info_cols <= 0) throw ConfigError("base graph table: graph has no systematic columns");
    std::stable_sort(g.entries.begin(), g.entries.end(), [](const BaseEntry& a, const BaseEntry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<BaseGraph> load_base_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open base graph file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_base_graph_table(ss.str());
}

const BaseGraph& standard_base_graph(BaseGraphId id) {
  static const std::vector<BaseGraph> graphs = [] {
    auto nr = parse_base_graph_table(detail::kNrBaseGraphTable);
    auto toy = parse_base_graph_table(detail::kToyBaseGraphTable);
    nr.insert(nr.end(), toy.begin(), toy.end());
    return nr;
  }();
  for (const auto& g : graphs) {
    if (g.id == id) return g;
  }
  throw ConfigError("no bundled base graph " + std::string(to_string(id)));
}

std::span<const int> lifting_sizes() {
  static const std::vector<int> sizes = build_lifting_sizes();
  return sizes;
}

bool is_valid_lifting_size(int zc) {
  auto sizes = lifting_sizes();
  return std::binary_search(sizes.begin(), sizes.end(), zc);
}

bool lifting_size_in_set(int zc, int set_index) {
  if (set_index < 0 || set_index >= kNumShiftSets || zc <= 0) return false;
  for (int z = kSetBases[set_index]; z <= kMaxLiftingSize; z *= 2) {
    if (z == zc) return true;
  }
  return false;
}

int lifting_set_index(int zc) {
  for (int s = 0; s < kNumShiftSets; ++s) {
    if (lifting_size_in_set(zc, s)) return s;
  }
  throw ConfigError("invalid lifting size " + std::to_string(zc));
}

}  // namespace decodex

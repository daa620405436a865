#include "decodex/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "decodex/error.hpp"

namespace decodex {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(what) + ": not a valid number: '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  if (s.empty()) throw ConfigError(std::string(what) + ": empty value");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ConfigError(std::string(what) + ": not a valid number: '" + s + "'");
  return v;
}

template <typename F>
void for_each_item(std::string_view text, F&& f) {
  if (trim(text).empty()) throw ConfigError("empty list");
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (item.empty()) throw ConfigError("empty list item in '" + std::string(text) + "'");
    f(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

template <typename T>
std::vector<T> parse_integer_list(std::string_view text) {
  std::vector<T> out;
  for_each_item(text, [&](std::string_view item) {
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(parse_number<T>(item, "list"));
      return;
    }
    const T lo = parse_number<T>(item.substr(0, dash), "range");
    const T hi = parse_number<T>(item.substr(dash + 1), "range");
    if (hi < lo) throw ConfigError("descending range '" + std::string(item) + "'");
    for (T v = lo; v <= hi; ++v) out.push_back(v);
  });
  return out;
}

std::uint64_t parse_seed(std::string_view text) { return parse_number<std::uint64_t>(text, "seed"); }

}  // namespace

std::vector<int> parse_int_list(std::string_view text) { return parse_integer_list<int>(text); }
std::vector<long> parse_long_list(std::string_view text) { return parse_integer_list<long>(text); }

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for_each_item(text, [&](std::string_view item) { out.push_back(parse_double(item, "list")); });
  return out;
}

IniSections parse_ini(std::string_view text) {
  IniSections out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(where + "empty section name");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!out[section].emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
  }
  return out;
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig config;
  for (const auto& [section, values] : parse_ini(text)) {
    if (section.rfind("model.", 0) == 0) {
      const std::string backend = section.substr(6);
      parse_backend_kind(backend);
      config.model_overrides[backend] = values;
      continue;
    }
    if (section != "sweep") throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : values) {
      if (key == "backends") {
        config.backends.clear();
        for_each_item(value, [&](std::string_view item) {
          parse_backend_kind(item);
          config.backends.emplace_back(item);
        });
      } else if (key == "mcs") config.mcs_set = parse_int_list(value);
      else if (key == "snr_db") config.snr_grid_db = parse_double_list(value);
      else if (key == "prb") config.prb_set = parse_int_list(value);
      else if (key == "n_tb") config.n_tb = parse_number<int>(value, key);
      else if (key == "n_ue") config.n_ue = parse_int_list(value);
      else if (key == "prb_total") config.prb_total = parse_number<int>(value, key);
      else if (key == "seed") config.seed = parse_seed(value);
      else if (key == "max_iterations") config.max_iterations = parse_number<int>(value, key);
      else if (key == "workers") config.knobs.workers = parse_number<int>(value, key);
      else if (key == "queue_depth") config.knobs.queue_depth = parse_number<std::size_t>(value, key);
      else if (key == "max_dequeue_retries") config.knobs.max_dequeue_retries = parse_number<long>(value, key);
      else if (key == "inter_symbol_gap") config.knobs.inter_symbol_gap = parse_double(value, key);
      else if (key == "lookaside_mode") {
        if (value == "bulk") config.knobs.lookaside_mode = LookasideMode::bulk;
        else if (value == "sequential") config.knobs.lookaside_mode = LookasideMode::sequential;
        else throw ConfigError("lookaside_mode must be bulk or sequential");
      } else if (key == "inline_mode") {
        if (value == "parallel") config.knobs.inline_mode = InlineMode::parallel;
        else if (value == "sequential") config.knobs.inline_mode = InlineMode::sequential;
        else throw ConfigError("inline_mode must be parallel or sequential");
      } else {
        throw ConfigError("unknown [sweep] key '" + key + "'");
      }
    }
  }
  validate(config);
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sweep_config(text.str());
}

void apply_seed_env(SweepConfig& config) {
  if (const char* env = std::getenv("DECODEX_SEED"); env != nullptr) config.seed = parse_seed(env);
}

}  // namespace decodex

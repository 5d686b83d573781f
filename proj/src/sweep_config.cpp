#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bhed/fock.hpp"
#include "bhed/sweep.hpp"

namespace bhed {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream in(value);
  while (std::getline(in, current, ',')) {
    auto item = trim(current);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_number(const std::string& text, int line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(line, "expected a finite number, got '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& text, int line) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError(line, "expected an integer, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, int line) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "yes" || lower == "1") return true;
  if (lower == "false" || lower == "no" || lower == "0") return false;
  throw ConfigError(line, "expected true or false, got '" + text + "'");
}

/// Comma-separated numbers; an item "start:stop:step" expands to the
/// inclusive arithmetic progression.
std::vector<double> parse_number_list(const std::string& value, int line) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) {
    if (item.find(':') == std::string::npos) {
      out.push_back(parse_number(item, line));
      continue;
    }
    std::vector<std::string> parts;
    std::istringstream in(item);
    for (std::string part; std::getline(in, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 3) throw ConfigError(line, "range must read start:stop:step, got '" + item + "'");
    const double start = parse_number(parts[0], line);
    const double stop = parse_number(parts[1], line);
    const double step = parse_number(parts[2], line);
    if (step <= 0.0 || stop < start) throw ConfigError(line, "range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::llround((stop - start) / step));
    if (std::abs(start + static_cast<double>(count) * step - stop) > 1e-9 * std::max(1.0, std::abs(stop))) {
      throw ConfigError(line, "range stop is not reached by whole steps: '" + item + "'");
    }
    for (long long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"M", "N", "half_filling", "n_max", "boundary", "hardcore", "t2"}},
      {"grid", {"t1_over_t2", "Uprime"}},
      {"solver", {"tol", "max_iter", "seed"}},
      {"observables", {"compute", "ggm_scope", "ggm_ceiling"}},
      {"output", {"path", "format", "N_q"}},
  };
  return keys;
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header '" + line + "'");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!allowed_keys().contains(current)) throw ConfigError(line_no, "unknown section [" + current + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value, got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (current.empty()) throw ConfigError(line_no, "key '" + key + "' appears before any [section]");
    if (!allowed_keys().at(current).contains(key)) {
      throw ConfigError(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has no value");
    auto& section = sections[current];
    if (section.contains(key)) {
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                     std::to_string(section.at(key).line) + ")");
    }
    section[key] = Entry{value, line_no};
  }

  auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
    const auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  };

  SweepConfig cfg;
  ModelConfig& model = cfg.model;
  const Entry* m_entry = find("model", "M");
  if (m_entry == nullptr) throw ConfigError(0, "[model] M is required");
  model.M = static_cast<int>(parse_integer(m_entry->value, m_entry->line));
  if (model.M < 2) throw ConfigError(m_entry->line, "M must be at least 2");
  if (const Entry* e = find("model", "half_filling")) model.half_filling = parse_bool(e->value, e->line);
  if (const Entry* e = find("model", "hardcore")) model.hardcore = parse_bool(e->value, e->line);
  if (const Entry* e = find("model", "boundary")) {
    try {
      model.boundary = parse_boundary(e->value);
    } catch (const InvalidArgument& err) {
      throw ConfigError(e->line, err.what());
    }
  }
  if (const Entry* e = find("model", "t2")) model.t2 = parse_number(e->value, e->line);

  const Entry* n_entry = find("model", "N");
  if (model.half_filling) {
    if (model.M % 2 != 0) throw ConfigError(m_entry->line, "half filling requires even M, got " + std::to_string(model.M));
    model.N = model.M / 2;
    if (n_entry != nullptr && parse_integer(n_entry->value, n_entry->line) != model.N) {
      throw ConfigError(n_entry->line, "N conflicts with half_filling (expected " + std::to_string(model.N) + ")");
    }
  } else {
    if (n_entry == nullptr) throw ConfigError(0, "[model] N is required when half_filling = false");
    model.N = static_cast<int>(parse_integer(n_entry->value, n_entry->line));
    if (model.N < 0) throw ConfigError(n_entry->line, "N must be non-negative");
  }

  const Entry* cap_entry = find("model", "n_max");
  if (cap_entry != nullptr) {
    model.n_max = static_cast<int>(parse_integer(cap_entry->value, cap_entry->line));
    if (model.n_max < 1) throw ConfigError(cap_entry->line, "n_max must be at least 1");
    if (model.hardcore && model.n_max != 1) {
      throw ConfigError(cap_entry->line, "hardcore = true requires n_max = 1, got " + std::to_string(model.n_max));
    }
  } else {
    model.n_max = model.hardcore ? 1 : default_n_max(model.N);
  }
  if (static_cast<long long>(model.N) > static_cast<long long>(model.M) * model.n_max) {
    throw ConfigError(cap_entry != nullptr ? cap_entry->line : m_entry->line, "N exceeds M * n_max");
  }
  if (model.boundary == Boundary::Periodic && model.M < 5) {
    throw ConfigError(m_entry->line, "periodic boundary needs M >= 5");
  }

  if (const Entry* e = find("grid", "t1_over_t2")) cfg.grid.t1_over_t2 = parse_number_list(e->value, e->line);
  if (const Entry* e = find("grid", "Uprime")) {
    cfg.grid.Uprime = parse_number_list(e->value, e->line);
    for (const double u : cfg.grid.Uprime) {
      if (u < 0.0) throw ConfigError(e->line, "Uprime values must be non-negative");
    }
  }

  if (const Entry* e = find("solver", "tol")) {
    cfg.solver.tol = parse_number(e->value, e->line);
    if (cfg.solver.tol <= 0.0) throw ConfigError(e->line, "tol must be positive");
  }
  if (const Entry* e = find("solver", "max_iter")) {
    const long long v = parse_integer(e->value, e->line);
    if (v < 1 || v > 100000000) throw ConfigError(e->line, "max_iter out of range");
    cfg.solver.max_iter = static_cast<int>(v);
  }
  if (const Entry* e = find("solver", "seed")) {
    const long long v = parse_integer(e->value, e->line);
    if (v < 0) throw ConfigError(e->line, "seed must be non-negative");
    cfg.solver.seed = static_cast<std::uint64_t>(v);
  }

  if (const Entry* e = find("observables", "compute")) {
    ObservableSet& obs = cfg.observables;
    obs.momentum = obs.chiral = obs.dimer_xy = obs.dimer_zz = obs.half_chain_entropy = obs.ggm = false;
    for (const auto& name : split_list(e->value)) {
      if (name == "momentum") obs.momentum = true;
      else if (name == "chiral") obs.chiral = true;
      else if (name == "dimer_xy") obs.dimer_xy = true;
      else if (name == "dimer_zz") obs.dimer_zz = true;
      else if (name == "half_chain_entropy") obs.half_chain_entropy = true;
      else if (name == "ggm") obs.ggm = true;
      else throw ConfigError(e->line, "unknown observable '" + name + "'");
    }
  }
  if (const Entry* e = find("observables", "ggm_scope")) {
    try {
      cfg.observables.ggm_scope = parse_ggm_scope(e->value);
    } catch (const InvalidArgument& err) {
      throw ConfigError(e->line, err.what());
    }
  }
  if (const Entry* e = find("observables", "ggm_ceiling")) {
    const long long v = parse_integer(e->value, e->line);
    if (v < 2 || v > 30) throw ConfigError(e->line, "ggm_ceiling must lie in [2, 30]");
    cfg.observables.ggm_ceiling = static_cast<int>(v);
  }

  if (const Entry* e = find("output", "path")) cfg.output.path = e->value;
  if (const Entry* e = find("output", "format")) {
    if (e->value == "csv") cfg.output.format = OutputFormat::Csv;
    else if (e->value == "json") cfg.output.format = OutputFormat::Json;
    else throw ConfigError(e->line, "format must be csv or json, got '" + e->value + "'");
  }
  if (const Entry* e = find("output", "N_q")) {
    const long long v = parse_integer(e->value, e->line);
    if (v < model.M || v > 10000000) throw ConfigError(e->line, "N_q must be at least M");
    cfg.output.N_q = static_cast<int>(v);
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace bhed

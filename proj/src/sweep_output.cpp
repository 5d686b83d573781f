#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bhed/sweep.hpp"

namespace bhed {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "schema_version", "M",       "N",         "n_max",           "boundary",        "hardcore", "t1",
      "t2",             "U",       "Uprime",    "E0",              "gap",             "degenerate", "eta",
      "q_max",          "commensurate", "Sq_norm", "kappa_bar",    "Dxy_bar_kinetic", "Dxy_bar_current",
      "Dzz_bar",        "E_half",  "ggm",       "ggm_argmax_bitmask", "solver_iters", "residual"};
  return columns;
}

namespace {

using Cells = std::vector<std::string>;

std::string quote_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// RFC-4180 records: quoted fields may hold commas, doubled quotes and newlines.
std::vector<Cells> split_csv(std::string_view text) {
  std::vector<Cells> rows;
  Cells row;
  std::string cell;
  bool quoted = false;
  bool row_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_open = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      row_open = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_open || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      row_open = false;
    } else {
      cell += c;
      row_open = true;
    }
  }
  if (quoted) throw InvalidArgument("csv: unterminated quoted field");
  if (row_open || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const std::string& s, const char* column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument(std::string("csv: bad number in column ") + column + ": '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s, const char* column) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InvalidArgument(std::string("csv: bad integer in column ") + column + ": '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s, const char* column) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw InvalidArgument(std::string("csv: bad flag in column ") + column + ": '" + s + "'");
}

template <class T, class F>
std::string opt_cell(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : std::string();
}

Cells to_cells(const SweepResultRecord& r) {
  const auto dbl = [](double v) { return format_double(v); };
  const auto& p = r.point;
  return {std::to_string(r.schema_version),
          std::to_string(p.M),
          std::to_string(p.N),
          std::to_string(p.n_max),
          to_string(p.boundary),
          p.hardcore ? "1" : "0",
          format_double(p.t1),
          format_double(p.t2),
          format_double(p.U),
          format_double(p.Uprime),
          opt_cell(r.E0, dbl),
          opt_cell(r.gap, dbl),
          opt_cell(r.degenerate, [](bool b) { return std::string(b ? "1" : "0"); }),
          opt_cell(r.eta, dbl),
          opt_cell(r.q_max, dbl),
          r.commensurate.value_or(""),
          opt_cell(r.Sq_norm, dbl),
          opt_cell(r.kappa_bar, dbl),
          opt_cell(r.Dxy_bar_kinetic, dbl),
          opt_cell(r.Dxy_bar_current, dbl),
          opt_cell(r.Dzz_bar, dbl),
          opt_cell(r.E_half, dbl),
          opt_cell(r.ggm, dbl),
          opt_cell(r.ggm_argmax_bitmask, [](std::uint64_t m) { return std::to_string(m); }),
          opt_cell(r.solver_iters, [](int n) { return std::to_string(n); }),
          opt_cell(r.residual, dbl)};
}

std::optional<double> opt_double(const std::string& s, const char* column) {
  if (s.empty()) return std::nullopt;
  return to_double(s, column);
}

/// Numeric accessor for every plottable column.
std::optional<double> column_value(const SweepResultRecord& r, const std::string& name) {
  const auto as_double = [](const auto& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  if (name == "E0") return r.E0;
  if (name == "gap") return r.gap;
  if (name == "degenerate") return as_double(r.degenerate);
  if (name == "eta") return r.eta;
  if (name == "q_max") return r.q_max;
  if (name == "commensurate") {
    if (!r.commensurate) return std::nullopt;
    return *r.commensurate == "C" ? 1.0 : 0.0;
  }
  if (name == "Sq_norm") return r.Sq_norm;
  if (name == "kappa_bar") return r.kappa_bar;
  if (name == "Dxy_bar_kinetic") return r.Dxy_bar_kinetic;
  if (name == "Dxy_bar_current") return r.Dxy_bar_current;
  if (name == "Dzz_bar") return r.Dzz_bar;
  if (name == "E_half") return r.E_half;
  if (name == "ggm") return r.ggm;
  if (name == "ggm_argmax_bitmask") return as_double(r.ggm_argmax_bitmask);
  if (name == "solver_iters") return as_double(r.solver_iters);
  if (name == "residual") return r.residual;
  throw InvalidArgument("unknown quantity '" + name + "'");
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

std::size_t axis_slot(std::vector<double>& axis, double v) {
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (same_value(axis[i], v)) return i;
  }
  axis.push_back(v);
  return axis.size() - 1;
}

}  // namespace

std::string format_csv(const std::vector<SweepResultRecord>& records) {
  std::string out;
  const auto append_row = [&out](const Cells& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote_cell(cells[i]);
    }
    out += '\n';
  };
  append_row(csv_columns());
  for (const auto& r : records) append_row(to_cells(r));
  return out;
}

std::vector<SweepResultRecord> parse_csv(std::string_view text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw InvalidArgument("csv: missing header");
  if (rows.front() != csv_columns()) throw InvalidArgument("csv: header does not match schema version 1");
  std::vector<SweepResultRecord> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& c = rows[k];
    if (c.size() != csv_columns().size()) {
      throw InvalidArgument("csv: row " + std::to_string(k + 1) + " has " + std::to_string(c.size()) + " cells");
    }
    SweepResultRecord r;
    r.schema_version = static_cast<int>(to_integer(c[0], "schema_version"));
    if (r.schema_version != kSchemaVersion) throw InvalidArgument("csv: unsupported schema_version " + c[0]);
    auto& p = r.point;
    p.M = static_cast<int>(to_integer(c[1], "M"));
    p.N = static_cast<int>(to_integer(c[2], "N"));
    p.n_max = static_cast<int>(to_integer(c[3], "n_max"));
    p.boundary = parse_boundary(c[4]);
    p.hardcore = to_bool(c[5], "hardcore");
    p.t1 = to_double(c[6], "t1");
    p.t2 = to_double(c[7], "t2");
    p.U = to_double(c[8], "U");
    p.Uprime = to_double(c[9], "Uprime");
    r.E0 = opt_double(c[10], "E0");
    r.gap = opt_double(c[11], "gap");
    if (!c[12].empty()) r.degenerate = to_bool(c[12], "degenerate");
    r.eta = opt_double(c[13], "eta");
    r.q_max = opt_double(c[14], "q_max");
    if (!c[15].empty()) {
      if (c[15] != "C" && c[15] != "IC") throw InvalidArgument("csv: commensurate must be C or IC");
      r.commensurate = c[15];
    }
    r.Sq_norm = opt_double(c[16], "Sq_norm");
    r.kappa_bar = opt_double(c[17], "kappa_bar");
    r.Dxy_bar_kinetic = opt_double(c[18], "Dxy_bar_kinetic");
    r.Dxy_bar_current = opt_double(c[19], "Dxy_bar_current");
    r.Dzz_bar = opt_double(c[20], "Dzz_bar");
    r.E_half = opt_double(c[21], "E_half");
    r.ggm = opt_double(c[22], "ggm");
    if (!c[23].empty()) r.ggm_argmax_bitmask = static_cast<std::uint64_t>(to_integer(c[23], "ggm_argmax_bitmask"));
    if (!c[24].empty()) r.solver_iters = static_cast<int>(to_integer(c[24], "solver_iters"));
    r.residual = opt_double(c[25], "residual");
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_json(const std::vector<SweepResultRecord>& records) {
  using nlohmann::ordered_json;
  ordered_json array = ordered_json::array();
  for (const auto& r : records) {
    ordered_json obj;
    const auto& p = r.point;
    obj["schema_version"] = r.schema_version;
    obj["M"] = p.M;
    obj["N"] = p.N;
    obj["n_max"] = p.n_max;
    obj["boundary"] = to_string(p.boundary);
    obj["hardcore"] = p.hardcore;
    obj["t1"] = p.t1;
    obj["t2"] = p.t2;
    obj["U"] = p.U;
    obj["Uprime"] = p.Uprime;
    const auto put = [&obj](const char* key, const auto& v) {
      if (v) obj[key] = *v;
      else obj[key] = nullptr;
    };
    put("E0", r.E0);
    put("gap", r.gap);
    put("degenerate", r.degenerate);
    put("eta", r.eta);
    put("q_max", r.q_max);
    put("commensurate", r.commensurate);
    put("Sq_norm", r.Sq_norm);
    put("kappa_bar", r.kappa_bar);
    put("Dxy_bar_kinetic", r.Dxy_bar_kinetic);
    put("Dxy_bar_current", r.Dxy_bar_current);
    put("Dzz_bar", r.Dzz_bar);
    put("E_half", r.E_half);
    put("ggm", r.ggm);
    put("ggm_argmax_bitmask", r.ggm_argmax_bitmask);
    put("solver_iters", r.solver_iters);
    put("residual", r.residual);
    obj["note"] = r.note;
    array.push_back(std::move(obj));
  }
  return array.dump(2) + "\n";
}

std::vector<SweepResultRecord> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("json: ") + e.what());
  }
  if (!doc.is_array()) throw InvalidArgument("json: expected an array of records");
  std::vector<SweepResultRecord> out;
  try {
    for (const auto& obj : doc) {
      SweepResultRecord r;
      r.schema_version = obj.at("schema_version").get<int>();
      if (r.schema_version != kSchemaVersion) throw InvalidArgument("json: unsupported schema_version");
      auto& p = r.point;
      p.M = obj.at("M").get<int>();
      p.N = obj.at("N").get<int>();
      p.n_max = obj.at("n_max").get<int>();
      p.boundary = parse_boundary(obj.at("boundary").get<std::string>());
      p.hardcore = obj.at("hardcore").get<bool>();
      p.t1 = obj.at("t1").get<double>();
      p.t2 = obj.at("t2").get<double>();
      p.U = obj.at("U").get<double>();
      p.Uprime = obj.at("Uprime").get<double>();
      const auto get = [&obj](const char* key, auto& field) {
        const auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return;
        field = it->template get<typename std::remove_reference_t<decltype(field)>::value_type>();
      };
      get("E0", r.E0);
      get("gap", r.gap);
      get("degenerate", r.degenerate);
      get("eta", r.eta);
      get("q_max", r.q_max);
      get("commensurate", r.commensurate);
      get("Sq_norm", r.Sq_norm);
      get("kappa_bar", r.kappa_bar);
      get("Dxy_bar_kinetic", r.Dxy_bar_kinetic);
      get("Dxy_bar_current", r.Dxy_bar_current);
      get("Dzz_bar", r.Dzz_bar);
      get("E_half", r.E_half);
      get("ggm", r.ggm);
      get("ggm_argmax_bitmask", r.ggm_argmax_bitmask);
      get("solver_iters", r.solver_iters);
      get("residual", r.residual);
      if (const auto it = obj.find("note"); it != obj.end() && it->is_string()) r.note = it->get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("json: ") + e.what());
  }
  return out;
}

PlotMatrix emit_plot_data(const std::vector<SweepResultRecord>& records, const std::string& quantity) {
  if (records.empty()) throw InvalidArgument("plot data: no records");
  const auto& ref = records.front().point;
  PlotMatrix m;
  m.quantity = quantity;
  std::vector<std::tuple<std::size_t, std::size_t, std::optional<double>>> cells;
  bool any = false;
  for (const auto& r : records) {
    const auto& p = r.point;
    if (p.M != ref.M || p.N != ref.N || p.n_max != ref.n_max || p.boundary != ref.boundary ||
        p.hardcore != ref.hardcore || p.t2 != ref.t2) {
      throw InvalidArgument("plot data: records do not share one model (M, N, n_max, boundary, hardcore, t2)");
    }
    const auto value = column_value(r, quantity);
    any = any || value.has_value();
    cells.emplace_back(axis_slot(m.ratios, p.t1 / p.t2), axis_slot(m.uprimes, p.Uprime), value);
  }
  if (!any) throw InvalidArgument("plot data: quantity '" + quantity + "' was not computed in this sweep");

  std::vector<std::size_t> ratio_order(m.ratios.size());
  std::vector<std::size_t> uprime_order(m.uprimes.size());
  for (std::size_t i = 0; i < ratio_order.size(); ++i) ratio_order[i] = i;
  for (std::size_t i = 0; i < uprime_order.size(); ++i) uprime_order[i] = i;
  std::sort(ratio_order.begin(), ratio_order.end(), [&](auto a, auto b) { return m.ratios[a] < m.ratios[b]; });
  std::sort(uprime_order.begin(), uprime_order.end(), [&](auto a, auto b) { return m.uprimes[a] < m.uprimes[b]; });
  std::vector<std::size_t> ratio_rank(ratio_order.size()), uprime_rank(uprime_order.size());
  for (std::size_t i = 0; i < ratio_order.size(); ++i) ratio_rank[ratio_order[i]] = i;
  for (std::size_t i = 0; i < uprime_order.size(); ++i) uprime_rank[uprime_order[i]] = i;

  std::vector<double> ratios(m.ratios.size()), uprimes(m.uprimes.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) ratios[ratio_rank[i]] = m.ratios[i];
  for (std::size_t i = 0; i < uprimes.size(); ++i) uprimes[uprime_rank[i]] = m.uprimes[i];
  m.ratios = std::move(ratios);
  m.uprimes = std::move(uprimes);

  m.values.assign(m.ratios.size(), std::vector<std::optional<double>>(m.uprimes.size()));
  std::vector<std::vector<bool>> seen(m.ratios.size(), std::vector<bool>(m.uprimes.size(), false));
  for (const auto& [ri, ui, value] : cells) {
    const auto r = ratio_rank[ri];
    const auto u = uprime_rank[ui];
    if (seen[r][u]) throw InvalidArgument("plot data: duplicate grid point");
    seen[r][u] = true;
    m.values[r][u] = value;
  }
  return m;
}

std::string format_plot_csv(const PlotMatrix& matrix) {
  std::string out = "t1_over_t2\\Uprime";
  for (const double u : matrix.uprimes) out += "," + format_double(u);
  out += '\n';
  for (std::size_t r = 0; r < matrix.ratios.size(); ++r) {
    out += format_double(matrix.ratios[r]);
    for (const auto& v : matrix.values[r]) {
      out += ',';
      if (v) out += format_double(*v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace bhed

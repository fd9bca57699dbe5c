#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swrr/heuristics.hpp"
#include "swrr/program.hpp"

namespace swrr {

inline constexpr std::string_view kMapHeader = "# swrr-map v1";

struct MapRow {
  std::string option_id;
  std::string function;
  std::string file;
  std::string heuristic;
  std::string error_code;
  Protection protection = Protection::Direct;
  std::vector<std::string> via_options;
  friend bool operator==(const MapRow &, const MapRow &) = default;
};

/// Rows cover every program function; unprotected ones carry protection
/// `none` so queries can tell them apart from unknown names.
struct SwrrMapFile {
  std::vector<MapRow> rows;
  friend bool operator==(const SwrrMapFile &, const SwrrMapFile &) = default;

  const MapRow *find(std::string_view function) const {
    for (const auto &r : rows)
      if (r.function == function)
        return &r;
    return nullptr;
  }
};

inline SwrrMapFile map_from_plan(const ProgramModel &pm, const SwrrPlan &plan) {
  SwrrMapFile m;
  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    MapRow row;
    row.function = f.name;
    row.file = pm.file_of(fn).file.name;
    row.protection = protection_of(plan, f.name);
    if (row.protection == Protection::Direct) {
      const ErrorSpec &spec = plan.to_instrument.at(f.name);
      row.option_id = *plan.swrr_map.at(f.name).begin();
      row.heuristic = to_string(spec.heuristic);
      row.error_code = spec.code.render();
    } else if (row.protection == Protection::Indirect) {
      row.heuristic = "indirect";
      const auto &opts = plan.swrr_map.at(f.name);
      row.via_options.assign(opts.begin(), opts.end());
    }
    m.rows.push_back(std::move(row));
  }
  std::sort(m.rows.begin(), m.rows.end(), [](const MapRow &a, const MapRow &b) {
    if (a.file != b.file)
      return a.file < b.file;
    return a.function < b.function;
  });
  return m;
}

inline std::string write_map(const SwrrMapFile &m) {
  std::string out(kMapHeader);
  out += '\n';
  for (const auto &r : m.rows) {
    std::string via;
    for (const auto &v : r.via_options)
      via += via.empty() ? v : "," + v;
    out += r.option_id + '\t' + r.function + '\t' + r.file + '\t' + r.heuristic + '\t' + r.error_code + '\t' +
           to_string(r.protection) + '\t' + via + '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos)
      return out;
    pos = next + 1;
  }
}

[[noreturn]] inline void format_error(std::uint32_t line, const std::string &msg) {
  throw Error(ErrorKind::Format, msg, "swrr.map", line);
}

} // namespace detail

/// Parses and validates a map file. Errors carry the 1-based line number.
inline SwrrMapFile read_map(std::string_view bytes) {
  SwrrMapFile m;
  std::uint32_t line_no = 0;
  std::size_t pos = 0;
  bool header = false;
  std::set<std::string> functions;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos)
      detail::format_error(line_no + 1, "missing final newline");
    const std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!header) {
      if (line != kMapHeader)
        detail::format_error(line_no, "expected header '" + std::string(kMapHeader) + "'");
      header = true;
      continue;
    }
    const auto cols = detail::split(line, '\t');
    if (cols.size() != 7)
      detail::format_error(line_no, "expected 7 tab-separated columns, found " + std::to_string(cols.size()));
    MapRow r;
    r.option_id = cols[0];
    r.function = cols[1];
    r.file = cols[2];
    r.heuristic = cols[3];
    r.error_code = cols[4];
    if (r.function.empty() || r.file.empty())
      detail::format_error(line_no, "empty function or file");
    if (!functions.insert(r.function).second)
      detail::format_error(line_no, "duplicate function '" + r.function + "'");
    if (cols[5] == "direct") {
      r.protection = Protection::Direct;
      if (r.option_id.empty() || !parse_heuristic(r.heuristic) || !ErrorCode::parse(r.error_code) ||
          !cols[6].empty())
        detail::format_error(line_no, "malformed direct row");
    } else if (cols[5] == "indirect") {
      r.protection = Protection::Indirect;
      if (!r.option_id.empty() || r.heuristic != "indirect" || !r.error_code.empty() || cols[6].empty())
        detail::format_error(line_no, "malformed indirect row");
      r.via_options = detail::split(cols[6], ',');
    } else if (cols[5] == "none") {
      r.protection = Protection::Unprotected;
      if (!r.option_id.empty() || !r.heuristic.empty() || !r.error_code.empty() || !cols[6].empty())
        detail::format_error(line_no, "malformed unprotected row");
    } else {
      detail::format_error(line_no, "unknown protection '" + cols[5] + "'");
    }
    m.rows.push_back(std::move(r));
  }
  if (!header)
    detail::format_error(1, "empty map file");

  std::set<std::string> options;
  line_no = 1;
  for (const auto &r : m.rows) {
    ++line_no;
    if (r.protection == Protection::Direct && !options.insert(r.option_id).second)
      detail::format_error(line_no, "duplicate option '" + r.option_id + "'");
  }
  line_no = 1;
  for (const auto &r : m.rows) {
    ++line_no;
    for (const auto &v : r.via_options)
      if (!options.count(v))
        detail::format_error(line_no, "via option '" + v + "' is not a direct option");
  }
  return m;
}

struct QueryResult {
  Protection protection = Protection::Unprotected;
  std::vector<std::string> options;
  friend bool operator==(const QueryResult &, const QueryResult &) = default;
};

/// Options that neutralize `function`. Throws UnknownFunction when the map
/// has no row for it.
inline QueryResult query(const SwrrMapFile &m, std::string_view function) {
  const MapRow *r = m.find(function);
  if (!r)
    throw Error(ErrorKind::UnknownFunction, "no function named '" + std::string(function) + "' in the program");
  QueryResult q;
  q.protection = r->protection;
  if (r->protection == Protection::Direct)
    q.options = {r->option_id};
  else if (r->protection == Protection::Indirect)
    q.options = r->via_options;
  return q;
}

struct SwrrConfigFile {
  std::vector<std::string> enabled;
  friend bool operator==(const SwrrConfigFile &, const SwrrConfigFile &) = default;
};

namespace detail {
inline bool config_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}
} // namespace detail

/// One option per line, surrounding whitespace stripped; blank lines and
/// lines starting with `#` skipped; duplicates keep their first position.
/// Mirrors the parser in the C runtime byte for byte.
inline SwrrConfigFile parse_config(std::string_view bytes) {
  SwrrConfigFile cfg;
  std::set<std::string> seen;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = bytes.size();
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    while (!line.empty() && detail::config_space(line.front()))
      line.remove_prefix(1);
    while (!line.empty() && detail::config_space(line.back()))
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    // the C reader stops at an embedded NUL
    line = line.substr(0, line.find('\0'));
    if (seen.insert(std::string(line)).second)
      cfg.enabled.emplace_back(line);
  }
  return cfg;
}

inline std::string write_config(const SwrrConfigFile &cfg) {
  std::string out;
  for (const auto &o : cfg.enabled)
    out += o + '\n';
  return out;
}

/// Enabled ids the map does not define.
inline std::vector<std::string> unknown_options(const SwrrConfigFile &cfg, const SwrrMapFile &m) {
  std::set<std::string> known;
  for (const auto &r : m.rows)
    if (r.protection == Protection::Direct)
      known.insert(r.option_id);
  std::vector<std::string> out;
  for (const auto &o : cfg.enabled)
    if (!known.count(o))
      out.push_back(o);
  return out;
}

/// Logger names, one per line; `#` comments and blank lines skipped.
inline LoggerSet parse_loggers(std::string_view bytes) {
  LoggerSet out;
  for (const auto &name : parse_config(bytes).enabled)
    out.insert(name);
  return out;
}

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot read file", p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a sibling temporary and renames it over `p`.
inline void write_file_atomic(const std::filesystem::path &p, std::string_view bytes) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::Io, "cannot write file", tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
      throw Error(ErrorKind::Io, "short write", tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename into place", p.string());
  }
}

} // namespace swrr

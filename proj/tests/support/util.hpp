#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "swrr/analysis.hpp"
#include "swrr/heuristics.hpp"
#include "swrr/store.hpp"

#ifndef SWRR_CORPUS_DIR
#define SWRR_CORPUS_DIR "corpus"
#endif

namespace swrr::testing {

inline Analysis analyze_text(const std::string &text, const std::string &name = "t.c") {
  return analyze_sources({{name, text}});
}

/// Files named g0.c, g1.c, ... in order.
inline std::vector<SourceInput> numbered_sources(const std::vector<std::string> &files) {
  std::vector<SourceInput> out;
  for (std::size_t i = 0; i < files.size(); ++i)
    out.push_back({"g" + std::to_string(i) + ".c", files[i]});
  return out;
}

inline SwrrPlan plan_for(const Analysis &a, const LoggerSet &loggers = {"log_msg"}) {
  return find_functions(a, loggers);
}

inline std::size_t fn_index(const Analysis &a, const std::string &name) { return *a.program.find_function(name); }

/// First statement of `fn` (pre-order) satisfying `pred`.
template <typename Pred> StmtId find_stmt(const AstFunction &f, Pred &&pred) {
  StmtId found = kNone;
  for_each_stmt(f, [&](StmtId id, const Stmt &s) {
    if (found == kNone && pred(s))
      found = id;
  });
  return found;
}

/// First ExprStmt whose call names `callee`.
inline StmtId call_stmt(const AstFunction &f, const std::string &callee) {
  return find_stmt(f, [&](const Stmt &s) {
    if (s.kind != StmtKind::ExprStmt)
      return false;
    const Expr &e = f.expr(s.expr);
    return e.kind == ExprKind::Call && f.expr(e.lhs).kind == ExprKind::Ident && f.expr(e.lhs).text == callee;
  });
}

inline std::filesystem::path corpus_dir() { return SWRR_CORPUS_DIR; }

/// Corpus sources in sorted path order, named relative to the corpus root.
inline std::vector<SourceInput> corpus_sources() {
  std::vector<std::filesystem::path> paths;
  for (const auto &e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".c")
      paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<SourceInput> out;
  for (const auto &p : paths)
    out.push_back({p.filename().string(), read_file(p)});
  return out;
}

inline LoggerSet corpus_loggers() { return parse_loggers(read_file(corpus_dir() / "loggers.txt")); }

struct ExpectedRow {
  std::string classification;
  std::string error_code;
  std::vector<std::string> via;
};

/// The hand-classified table: function -> (classification, code, via options).
inline std::map<std::string, ExpectedRow> corpus_expected() {
  std::map<std::string, ExpectedRow> out;
  const std::string text = read_file(corpus_dir() / "expected.tsv");
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos)
      nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> cols;
    std::size_t p = 0;
    while (true) {
      const auto tab = line.find('\t', p);
      cols.push_back(line.substr(p, tab == std::string::npos ? std::string::npos : tab - p));
      if (tab == std::string::npos)
        break;
      p = tab + 1;
    }
    cols.resize(4);
    ExpectedRow row{cols[1], cols[2], {}};
    std::size_t q = 0;
    while (!cols[3].empty()) {
      const auto comma = cols[3].find(',', q);
      row.via.push_back(cols[3].substr(q, comma == std::string::npos ? std::string::npos : comma - q));
      if (comma == std::string::npos)
        break;
      q = comma + 1;
    }
    out[cols[0]] = row;
  }
  return out;
}

/// Classification of a function under a plan, in the expected-table vocabulary.
inline ExpectedRow classify(const SwrrPlan &plan, const std::string &fn) {
  if (auto it = plan.to_instrument.find(fn); it != plan.to_instrument.end())
    return {to_string(it->second.heuristic), it->second.code.render(), {}};
  if (plan.indirect_only.count(fn)) {
    const auto &opts = plan.swrr_map.at(fn);
    return {"indirect", "", std::vector<std::string>(opts.begin(), opts.end())};
  }
  return {"none", "", {}};
}

} // namespace swrr::testing

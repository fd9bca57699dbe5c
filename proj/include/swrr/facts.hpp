#pragma once

#include <string>

#include <json.hpp>

#include "swrr/analysis.hpp"
#include "swrr/heuristics.hpp"

namespace swrr {

namespace detail {
inline nlohmann::json predicates_json(const std::vector<Predicate> &ps) {
  auto arr = nlohmann::json::array();
  for (const auto &p : ps)
    arr.push_back({{"stmt", p.stmt}, {"branch", to_string(p.branch)}});
  return arr;
}
} // namespace detail

/// Machine-readable dump of the analysis: call graph, per-statement guard
/// facts and external symbols. Keys are sorted, so output is deterministic.
inline nlohmann::json facts_json(const Analysis &a) {
  const ProgramModel &pm = a.program;
  nlohmann::json j;
  auto edges = nlohmann::json::array();
  for (const auto &e : a.call_graph.edges)
    edges.push_back({{"caller", e.caller},
                     {"callee", e.callee},
                     {"resolution", to_string(e.resolution)},
                     {"line", e.span.line}});
  j["call_graph"] = {{"edges", edges}};

  nlohmann::json functions = nlohmann::json::object();
  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    auto stmts = nlohmann::json::array();
    for_each_stmt(f, [&](StmtId sid, const Stmt &s) {
      const StmtGuard &g = a.guards[fn][sid];
      nlohmann::json st = {{"id", sid},
                           {"kind", to_string(s.kind)},
                           {"line", s.span.line},
                           {"reachable", g.reachable},
                           {"guarded", g.guarded},
                           {"controlling", detail::predicates_json(g.controlling)},
                           {"leads_to_return", g.leads_to_return}};
      if (g.reached_return != kNone)
        st["return_stmt"] = g.reached_return;
      stmts.push_back(std::move(st));
    });
    functions[f.name] = {{"file", pm.file_of(fn).file.name},
                         {"start_line", f.span.line},
                         {"return", to_string(f.category)},
                         {"statements", stmts}};
  }
  j["functions"] = functions;
  auto externals = nlohmann::json::array();
  for (const auto &[name, decl] : pm.externals)
    externals.push_back(name);
  j["externals"] = externals;
  return j;
}

/// The plan as JSON, one entry per directly or indirectly protected function.
inline nlohmann::json plan_json(const SwrrPlan &plan) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[name, spec] : plan.to_instrument) {
    nlohmann::json e = {{"protection", "direct"},
                        {"heuristic", to_string(spec.heuristic)},
                        {"error_code", spec.code.render()},
                        {"options", plan.swrr_map.at(name)},
                        {"evidence_line", spec.evidence_span.line}};
    if (!spec.source_function.empty())
      e["source_function"] = spec.source_function;
    j[name] = std::move(e);
  }
  for (const auto &name : plan.indirect_only)
    j[name] = {{"protection", "indirect"}, {"options", plan.swrr_map.at(name)}};
  return j;
}

} // namespace swrr

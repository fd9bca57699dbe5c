#pragma once

#include <string>
#include <vector>

#include "swrr/call_graph.hpp"
#include "swrr/cfg.hpp"
#include "swrr/guards.hpp"
#include "swrr/parser.hpp"
#include "swrr/program.hpp"

namespace swrr {

/// Everything the heuristics consume, frozen after construction. `cfgs` and
/// `guards` are indexed like ProgramModel::functions.
struct Analysis {
  ProgramModel program;
  CallGraph call_graph;
  std::vector<Cfg> cfgs;
  std::vector<GuardInfo> guards;
};

inline Analysis analyze(ProgramModel program) {
  Analysis a;
  a.program = std::move(program);
  a.call_graph = build_call_graph(a.program);
  a.cfgs.reserve(a.program.functions.size());
  a.guards.reserve(a.program.functions.size());
  for (std::size_t i = 0; i < a.program.functions.size(); ++i) {
    a.cfgs.push_back(build_cfg(a.program.function(i)));
    a.guards.push_back(compute_guards(a.program.function(i)));
  }
  return a;
}

struct SourceInput {
  std::string name;
  std::string text;
};

/// Parses, links and analyzes a set of in-memory sources.
inline Analysis analyze_sources(const std::vector<SourceInput> &sources) {
  std::vector<ParsedFile> parsed;
  parsed.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i)
    parsed.push_back(parse_file(sources[i].text, sources[i].name, static_cast<FileId>(i)));
  return analyze(link_program(std::move(parsed)));
}

} // namespace swrr

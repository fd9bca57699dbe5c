// swrr: find error-handling code in MiniC sources and insert SWRRs.
//
// Exit codes: 0 ok, 1 parse/format/io error, 2 usage, 3 unprotected target,
// 4 unknown function (query).

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swrr/facts.hpp"
#include "swrr/heuristics.hpp"
#include "swrr/instrument.hpp"
#include "swrr/report.hpp"
#include "swrr/store.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnprotected = 3;
constexpr int kExitUnknown = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::vector<std::string> sources;
  std::string loggers;
  std::string out = "out";
};

swrr::LoggerSet load_loggers(const std::string &path) {
  if (path.empty())
    return {};
  if (!fs::exists(path)) {
    std::cerr << "warning: logger file '" << path << "' not found; continuing with no loggers\n";
    return {};
  }
  return swrr::parse_loggers(swrr::read_file(path));
}

struct Pipeline {
  swrr::Analysis analysis;
  swrr::SwrrPlan plan;
};

Pipeline run_pipeline(const Common &c) {
  if (c.sources.empty())
    throw UsageError("no source files given");
  std::vector<std::string> paths = c.sources;
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  std::vector<swrr::SourceInput> inputs;
  for (const auto &p : paths)
    inputs.push_back({p, swrr::read_file(p)});
  Pipeline pl{swrr::analyze_sources(inputs), {}};
  for (const auto &pf : pl.analysis.program.files)
    for (const auto &d : pf.diagnostics)
      std::cerr << pf.file.name << ':' << d.span.line << ": warning: " << d.message << '\n';
  pl.plan = swrr::find_functions(pl.analysis, load_loggers(c.loggers));
  return pl;
}

void write_out(const fs::path &dir, const std::string &name, const std::string &bytes) {
  fs::create_directories(dir);
  swrr::write_file_atomic(dir / name, bytes);
}

int cmd_analyze(const Common &c, bool emit_facts, bool json) {
  const Pipeline pl = run_pipeline(c);
  const auto map = swrr::map_from_plan(pl.analysis.program, pl.plan);
  write_out(c.out, "swrr.map", swrr::write_map(map));
  write_out(c.out, "plan.json", swrr::plan_json(pl.plan).dump(2) + "\n");
  if (emit_facts)
    write_out(c.out, "facts.json", swrr::facts_json(pl.analysis).dump(2) + "\n");
  const auto report = swrr::coverage(map);
  if (json)
    std::cout << swrr::to_json(report).dump(2) << '\n';
  else
    std::cout << "analyzed " << report.total_functions << " functions: " << pl.plan.to_instrument.size()
              << " direct, " << pl.plan.indirect_only.size() << " indirect, "
              << report.total_functions - report.protected_count << " unprotected\n";
  return kExitOk;
}

int cmd_instrument(const Common &c, const std::string &mode, const std::vector<std::string> &targets) {
  if (mode == "patch" && targets.empty())
    throw UsageError("--mode patch needs at least one --function");
  if (mode == "in-place" && !targets.empty())
    throw UsageError("--function applies to --mode patch only");
  const Pipeline pl = run_pipeline(c);
  const auto &pm = pl.analysis.program;

  std::vector<std::string> out_names;
  std::set<std::string> seen;
  for (const auto &pf : pm.files) {
    const std::string name = fs::path(pf.file.name).stem().string() + ".swrr.c";
    if (!seen.insert(name).second)
      throw UsageError("two inputs map to the same output file '" + name + "'");
    out_names.push_back(name);
  }

  std::vector<swrr::Patch> patches;
  if (mode == "in-place") {
    patches = swrr::instrument_in_place(pm, pl.plan);
  } else {
    auto res = swrr::instrument_patch_based(pm, pl.plan, std::set<std::string>(targets.begin(), targets.end()));
    for (const auto &n : res.notices)
      std::cout << n << '\n';
    patches = std::move(res.patches);
  }
  for (std::size_t i = 0; i < patches.size(); ++i)
    write_out(c.out, out_names[i], swrr::apply_patch(pm.files[i].file.text, patches[i]));
  if (mode == "in-place") {
    const auto shim = swrr::emit_runtime();
    write_out(c.out, "swrr_runtime.h", shim.header_text);
    write_out(c.out, "swrr_runtime.c", shim.impl_text);
  }
  write_out(c.out, "swrr.map", swrr::write_map(swrr::map_from_plan(pm, pl.plan)));
  std::size_t edited = 0;
  for (const auto &p : patches)
    edited += p.edits.empty() ? 0 : 1;
  std::cout << "instrumented " << edited << " of " << patches.size() << " files into " << c.out << '\n';
  return kExitOk;
}

swrr::SwrrMapFile load_map(const Common &c, const std::string &map_path) {
  if (!map_path.empty()) {
    if (!c.sources.empty())
      throw UsageError("give either --map or source files, not both");
    return swrr::read_map(swrr::read_file(map_path));
  }
  const Pipeline pl = run_pipeline(c);
  return swrr::map_from_plan(pl.analysis.program, pl.plan);
}

int cmd_report(const Common &c, const std::string &map_path, bool json) {
  const auto report = swrr::coverage(load_map(c, map_path));
  if (json)
    std::cout << swrr::to_json(report).dump(2) << '\n';
  else
    std::cout << swrr::render_text(report);
  return kExitOk;
}

int cmd_query(const Common &c, const std::string &map_path, const std::vector<std::string> &names, bool json) {
  if (names.empty())
    throw UsageError("query needs a function name");
  const auto map = load_map(c, map_path);
  auto all = nlohmann::json::object();
  int status = kExitOk;
  for (const auto &name : names) {
    swrr::QueryResult q;
    try {
      q = swrr::query(map, name);
    } catch (const swrr::Error &e) {
      std::cerr << e.what() << '\n';
      status = kExitUnknown;
      continue;
    }
    if (json) {
      all[name] = {{"protection", swrr::to_string(q.protection)}, {"options", q.options}};
      continue;
    }
    switch (q.protection) {
    case swrr::Protection::Direct:
      std::cout << name << ": protected directly; add to swrr.conf:\n";
      break;
    case swrr::Protection::Indirect:
      std::cout << name << ": protected through its callers; add to swrr.conf:\n";
      break;
    case swrr::Protection::Unprotected:
      std::cout << name << ": no SWRR protects this function\n";
      break;
    }
    for (const auto &o : q.options)
      std::cout << "  " << o << '\n';
  }
  if (json)
    std::cout << all.dump(2) << '\n';
  return status;
}

int exit_code_for(const swrr::Error &e) {
  switch (e.kind()) {
  case swrr::ErrorKind::TargetUnprotected: return kExitUnprotected;
  case swrr::ErrorKind::UnknownFunction: return kExitUnknown;
  default: return kExitError;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Find error-handling code in MiniC sources and insert security workarounds (SWRRs)"};
  app.require_subcommand(1);

  Common common;
  bool emit_facts = false;
  bool json = false;
  std::string mode = "in-place";
  std::string map_path;
  std::vector<std::string> functions;
  std::vector<std::string> names;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("sources", common.sources, "MiniC source files");
    sub->add_option("--loggers", common.loggers, "file listing error-logging function names");
    sub->add_option("--out", common.out, "output directory");
  };

  auto *analyze = app.add_subcommand("analyze", "analyze sources and write swrr.map and plan.json");
  add_common(analyze);
  analyze->add_flag("--emit-facts", emit_facts, "also write facts.json");
  analyze->add_flag("--json", json, "print the coverage report as JSON");

  auto *instrument = app.add_subcommand("instrument", "write instrumented sources");
  add_common(instrument);
  instrument->add_option("--mode", mode, "deployment mode")->check(CLI::IsMember({"in-place", "patch"}));
  instrument->add_option("--function", functions, "function to disable (patch mode, repeatable)");

  auto *report = app.add_subcommand("report", "print SWRR coverage");
  add_common(report);
  report->add_option("--map", map_path, "read an existing swrr.map instead of analyzing");
  report->add_flag("--json", json, "JSON output");

  auto *query = app.add_subcommand("query", "which options disable a function");
  query->add_option("names", names, "function names");
  query->add_option("--function", functions, "function name (repeatable)");
  query->add_option("--map", map_path, "swrr.map to consult");
  query->add_option("--sources", common.sources, "analyze these sources instead of reading a map");
  query->add_option("--loggers", common.loggers, "file listing error-logging function names");
  query->add_flag("--json", json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze)
      return cmd_analyze(common, emit_facts, json);
    if (*instrument)
      return cmd_instrument(common, mode, functions);
    if (*report)
      return cmd_report(common, map_path, json);
    names.insert(names.end(), functions.begin(), functions.end());
    if (map_path.empty() && common.sources.empty())
      map_path = (fs::path("out") / "swrr.map").string();
    return cmd_query(common, map_path, names, json);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const swrr::Error &e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error &e) {
    std::cerr << "IoError: " << e.what() << '\n';
    return kExitError;
  }
}

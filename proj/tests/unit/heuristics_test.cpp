#include <gtest/gtest.h>

#include <random>

#include "gen.hpp"
#include "util.hpp"

using namespace swrr;
using namespace swrr::testing;

namespace {

const char *kLoggerPrelude = "extern void log_msg(const char *fmt, ...);\n";

std::optional<ErrorSpec> logging_spec(const std::string &src, const std::string &fn = "f") {
  const Analysis a = analyze_text(kLoggerPrelude + src);
  const std::size_t i = fn_index(a, fn);
  return detect_error_logging(a.program, i, a.guards[i], {"log_msg"});
}

std::optional<ErrorSpec> null_spec(const Analysis &a, const std::string &fn) {
  const std::size_t i = fn_index(a, fn);
  return detect_null_return(a.program, i, a.guards[i]);
}

/// Splits generated program text into the shared prefix and one chunk per
/// function definition.
std::pair<std::string, std::vector<std::string>> split_definitions(const std::string &text) {
  std::string prefix;
  std::vector<std::string> defs;
  std::size_t pos = 0;
  bool in_def = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string line = text.substr(pos, nl - pos + 1);
    pos = nl + 1;
    const bool opens = line.size() > 2 && line.compare(line.size() - 3, 3, " {\n") == 0 && line.rfind("struct", 0) != 0;
    if (!in_def && opens) {
      defs.emplace_back();
      in_def = true;
    }
    (in_def ? defs.back() : prefix) += line;
    if (in_def && line == "}\n")
      in_def = false;
  }
  return {prefix, defs};
}

/// Protected functions with their heuristic and rendered code.
std::map<std::string, std::string> protection_table(const SwrrPlan &plan) {
  std::map<std::string, std::string> out;
  for (const auto &[f, spec] : plan.to_instrument)
    out[f] = std::string(to_string(spec.heuristic)) + ":" + spec.code.render();
  for (const auto &f : plan.indirect_only)
    out[f] = "indirect";
  return out;
}

/// Checks every structural invariant a finished plan must satisfy.
void check_plan_invariants(const Analysis &a, const SwrrPlan &plan, const std::string &ctx) {
  const ProgramModel &pm = a.program;
  for (const auto &[f, spec] : plan.to_instrument) {
    ASSERT_TRUE(pm.find_function(f)) << ctx << " " << f;
    EXPECT_FALSE(plan.indirect_only.count(f)) << ctx << " " << f;
    EXPECT_TRUE(spec.code.fits(pm.function(*pm.find_function(f)).category)) << ctx << " " << f;
    ASSERT_EQ(plan.swrr_map.count(f), 1u) << ctx << " " << f;
    ASSERT_EQ(plan.swrr_map.at(f).size(), 1u) << ctx << " " << f;
    EXPECT_EQ(plan.option_owner.at(*plan.swrr_map.at(f).begin()), f) << ctx << " " << f;
  }
  EXPECT_EQ(plan.option_owner.size(), plan.to_instrument.size()) << ctx;
  for (const auto &f : plan.indirect_only) {
    const auto callers = a.call_graph.callers_of(f);
    ASSERT_FALSE(callers.empty()) << ctx << " " << f;
    EXPECT_FALSE(a.call_graph.has_unresolved_incoming(f)) << ctx << " " << f;
    std::set<std::string> want;
    for (const auto &c : callers) {
      ASSERT_TRUE(plan.swrr_map.count(c)) << ctx << " caller " << c << " of " << f;
      want.insert(plan.swrr_map.at(c).begin(), plan.swrr_map.at(c).end());
    }
    EXPECT_EQ(plan.swrr_map.at(f), want) << ctx << " " << f;
    for (const auto &o : want)
      EXPECT_TRUE(plan.option_owner.count(o)) << ctx << " " << o;
  }
  EXPECT_EQ(plan.swrr_map.size(), plan.to_instrument.size() + plan.indirect_only.size()) << ctx;

  // re-evaluate every translated inference with the callee's code
  for (const auto &[f, spec] : plan.to_instrument) {
    if (spec.heuristic != Heuristic::PropagationTranslated)
      continue;
    const std::size_t fn = *pm.find_function(f);
    const ErrorCode &callee_code = plan.to_instrument.at(spec.source_function).code;
    const Stmt &pred = pm.function(fn).stmt(spec.predicate_stmt);
    const auto vp = match_predicate(pm, fn, spec.predicate_stmt, pred.expr);
    ASSERT_TRUE(vp) << ctx << " " << f;
    EXPECT_EQ(evaluate(callee_code, *vp, spec.predicate_then ? Branch::Then : Branch::Else), Truth::True)
        << ctx << " " << f;
    if (callee_code.kind == ErrorCodeKind::IntConst && vp->constant.kind == Constant::Kind::Int) {
      const CmpOp op = spec.predicate_then ? vp->op : negate(vp->op);
      const std::int64_t v = callee_code.value, k = vp->constant.value;
      const bool holds = op == CmpOp::Eq   ? v == k
                         : op == CmpOp::Ne ? v != k
                         : op == CmpOp::Lt ? v < k
                         : op == CmpOp::Gt ? v > k
                         : op == CmpOp::Le ? v <= k
                         : op == CmpOp::Ge ? v >= k
                                           : (op == CmpOp::Truthy) == (v != 0);
      EXPECT_TRUE(holds) << ctx << " " << f;
    }
  }
}

} // namespace

TEST(ErrorLogging, GuardedLoggerThenConstant) {
  const auto s = logging_spec("int f(int x) { if (x < 0) { log_msg(\"bad\"); return -1; } return 0; }");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->heuristic, Heuristic::ErrorLogging);
  EXPECT_EQ(s->code, ErrorCode::integer(-1));
}

TEST(ErrorLogging, UnguardedIsRejected) {
  EXPECT_FALSE(logging_spec("int f(int x) { log_msg(\"bad\"); return -1; }"));
}

TEST(ErrorLogging, FirstQualifyingPathWins) {
  const std::string src = "int f(int x) {\n"
                          "  if (x < 0) { log_msg(\"neg\"); return -1; }\n"
                          "  if (x > 9) { log_msg(\"big\"); return -2; }\n"
                          "  return 0;\n}\n";
  const Analysis a = analyze_text(kLoggerPrelude + src);
  const auto paths = error_paths(a.program, 0, a.guards[0], {"log_msg"});
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].code, ErrorCode::integer(-1));
  EXPECT_EQ(paths[1].code, ErrorCode::integer(-2));
  for (const auto &p : paths) {
    EXPECT_TRUE(a.guards[0][p.call_stmt].guarded);
    EXPECT_TRUE(a.guards[0][p.call_stmt].leads_to_return);
  }
  EXPECT_EQ(logging_spec(src)->code, ErrorCode::integer(-1));
}

TEST(ErrorLogging, NonConstantReturnIsRejected) {
  EXPECT_FALSE(logging_spec("int f(int x) { if (x) { log_msg(\"e\"); return x; } return 0; }"));
}

TEST(ErrorLogging, NonLoggerCallIsIgnored) {
  EXPECT_FALSE(logging_spec("extern void note(int v);\nint f(int x) { if (x) { note(x); return -1; } return 0; }"));
}

TEST(ErrorLogging, BranchBeforeReturnBreaksThePath) {
  EXPECT_FALSE(logging_spec("int f(int x) { if (x) { log_msg(\"e\"); if (x > 2) return -1; return -2; } return 0; }"));
}

TEST(ErrorLogging, VoidFunctionsUseBareReturn) {
  const auto s = logging_spec("void f(int x) { if (x) { log_msg(\"e\"); return; } x = 1; }");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->code, ErrorCode::void_return());
}

TEST(ErrorLogging, SymbolicAndNullCodes) {
  EXPECT_EQ(logging_spec("int f(int x) { if (x) { log_msg(\"e\"); return APR_EBADF; } return 0; }")->code,
            ErrorCode::symbol("APR_EBADF"));
  EXPECT_EQ(logging_spec("char *f(int x) { if (x) { log_msg(\"e\"); return NULL; } return \"ok\"; }")->code,
            ErrorCode::null());
  EXPECT_EQ(logging_spec("char *f(int x) { if (x) { log_msg(\"e\"); return 0; } return \"ok\"; }")->code,
            ErrorCode::null());
}

TEST(ErrorLogging, ListingPattern) {
  const Analysis a = analyze_text("extern void ap_log_error(const char *file, int line, int level, int status,"
                                  " const char *fmt, ...);\n"
                                  "int pcfg_openfile(const char *name) {\n"
                                  "  if (name == NULL) {\n"
                                  "    ap_log_error(APLOG_MARK, APLOG_ERR, 0, NULL, \"Internal error\");\n"
                                  "    return APR_EBADF;\n  }\n  return 0;\n}\n");
  const auto s = detect_error_logging(a.program, 0, a.guards[0], {"ap_log_error"});
  ASSERT_TRUE(s);
  EXPECT_EQ(s->code, ErrorCode::symbol("APR_EBADF"));
  EXPECT_EQ(s->evidence_span.line, 5u);
}

TEST(NullReturn, OwnReturnNull) {
  const Analysis a = analyze_text("char *f(int x) { if (x) return NULL; return \"ok\"; }");
  const auto s = null_spec(a, "f");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->heuristic, Heuristic::NullReturn);
  EXPECT_EQ(s->code, ErrorCode::null());
}

TEST(NullReturn, CallerCheckedAssignment) {
  const Analysis a = analyze_text("char *base64_decode(const char *s) { return \"x\"; }\n"
                                  "int use(const char *s) { char *p; p = base64_decode(s); if (p == NULL) return -1;"
                                  " return 0; }\n");
  EXPECT_TRUE(null_spec(a, "base64_decode"));
}

TEST(NullReturn, CallerCheckForms) {
  const std::string callee = "char *g(int v) { return \"x\"; }\n";
  for (const std::string use : {"int u(int v) { if (!g(v)) return 1; return 0; }",
                                "int u(int v) { char *p; p = g(v); if (p) return 1; return 0; }",
                                "int u(int v) { if (g(v) != NULL) return 1; return 0; }",
                                "int u(int v) { char *p; p = g(v); while (p == NULL) { p = g(v); } return 0; }",
                                "int u(int v) { if (v > 1 && g(v) == NULL) return 1; return 0; }"}) {
    const Analysis a = analyze_text(callee + use);
    EXPECT_TRUE(null_spec(a, "g")) << use;
  }
}

TEST(NullReturn, NeverNullIsRejected) {
  const Analysis a = analyze_text("char *g(int v) { return \"x\"; }\n"
                                  "int u(int v) { char *p; p = g(v); if (v) return 1; return 0; }");
  EXPECT_FALSE(null_spec(a, "g"));
  // checking a different value does not count
  const Analysis b = analyze_text("char *g(int v) { return \"x\"; }\nchar *h(int v) { return \"y\"; }\n"
                                  "int u(int v) { char *p; p = g(v); p = h(v); if (p == NULL) return 1; return 0; }");
  EXPECT_FALSE(null_spec(b, "g"));
  EXPECT_TRUE(null_spec(b, "h"));
}

TEST(NullReturn, OnlyPointerFunctions) {
  const Analysis a = analyze_text("int g(int v) { if (v) return 0; return 1; }");
  EXPECT_FALSE(null_spec(a, "g"));
}

TEST(FindFunctions, ErrorLoggingBeatsNullReturn) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "char *f(int x) { if (x) { log_msg(\"e\"); return NULL; } return \"ok\"; }");
  EXPECT_TRUE(null_spec(a, "f"));
  const SwrrPlan plan = plan_for(a);
  EXPECT_EQ(plan.to_instrument.at("f").heuristic, Heuristic::ErrorLogging);
}

TEST(FindFunctions, EmptyProgram) {
  const SwrrPlan plan = plan_for(analyze_sources({}));
  EXPECT_EQ(plan, SwrrPlan{});
}

TEST(Propagation, ListingTrio) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int config_insert_values_internal(int v) {\n"
                                  "  if (v < 0) { log_msg(\"bad value\"); return -1; }\n  return 0;\n}\n"
                                  "int config_insert_values_global(int v) {\n"
                                  "  return config_insert_values_internal(v);\n}\n"
                                  "int set_defaults(int v) {\n"
                                  "  if (0 != config_insert_values_global(v)) {\n    return HANDLER_ERROR;\n  }\n"
                                  "  return HANDLER_GO_ON;\n}\n"
                                  "int request_check_hostname(int v) { return v; }\n"
                                  "int parse_request(int v) {\n"
                                  "  if (0 != request_check_hostname(v)) {\n"
                                  "    log_msg(\"bad host\");\n    return 400;\n  }\n  return 0;\n}\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_EQ(classify(plan, "config_insert_values_internal").classification, "error-logging");
  const auto &direct = plan.to_instrument.at("config_insert_values_global");
  EXPECT_EQ(direct.heuristic, Heuristic::PropagationDirect);
  EXPECT_EQ(direct.code, ErrorCode::integer(-1));
  EXPECT_EQ(direct.source_function, "config_insert_values_internal");
  const auto &translated = plan.to_instrument.at("set_defaults");
  EXPECT_EQ(translated.heuristic, Heuristic::PropagationTranslated);
  EXPECT_EQ(translated.code, ErrorCode::symbol("HANDLER_ERROR"));
  const auto &downward = plan.to_instrument.at("request_check_hostname");
  EXPECT_EQ(downward.heuristic, Heuristic::PropagationDownward);
  EXPECT_EQ(downward.code, ErrorCode::integer(1));
  EXPECT_EQ(downward.source_function, "parse_request");
  check_plan_invariants(a, plan, "trio");
}

TEST(Propagation, ChainsNeedSeveralRounds) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int c(int v) { if (v) { log_msg(\"e\"); return -7; } return 0; }\n"
                                  "int b(int v) { return c(v); }\n"
                                  "int a(int v) { return b(v); }\n"
                                  "int top(int v) { if (a(v) == -7) return 3; return 0; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_EQ(plan.to_instrument.at("a").code, ErrorCode::integer(-7));
  EXPECT_EQ(plan.to_instrument.at("top").code, ErrorCode::integer(3));
  EXPECT_EQ(plan.to_instrument.at("top").heuristic, Heuristic::PropagationTranslated);
}

TEST(Propagation, UnsatisfiedPredicateInfersNothing) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int c(int v) { if (v) { log_msg(\"e\"); return -1; } return 0; }\n"
                                  "int u(int v) { if (c(v) > 0) return 5; return v; }\n"
                                  "int s(int v) { if (c(v) == ERR_X) return 5; return v; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_FALSE(plan.to_instrument.count("u"));
  EXPECT_FALSE(plan.to_instrument.count("s"));
}

TEST(Propagation, DownwardSymbolicInequalityIsUnsolvable) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int g(int v) { return v; }\n"
                                  "int h(int v) { return v; }\n"
                                  "int u(int v) { if (g(v) != OK) { log_msg(\"e\"); return -1; } return 0; }\n"
                                  "int w(int v) { if (h(v) == BUSY) { log_msg(\"e\"); return -1; } return 0; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_FALSE(plan.to_instrument.count("g"));
  EXPECT_EQ(plan.to_instrument.at("h").code, ErrorCode::symbol("BUSY"));
}

TEST(Propagation, VoidAndPointerRules) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "void g(int v) { v = 1; }\n"
                                  "char *p(int v) { return \"x\"; }\n"
                                  "int u(int v) { if (!p(v)) { log_msg(\"e\"); return -1; } return 0; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_FALSE(plan.to_instrument.count("g"));
  // the caller's NULL check already makes p a NULL-return function
  EXPECT_EQ(plan.to_instrument.at("p").heuristic, Heuristic::NullReturn);
}

TEST(Indirect, LeafUnderInstrumentedCaller) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int h(int v) { return v + 1; }\n"
                                  "int f(int v) { if (v) { log_msg(\"e\"); return -1; } return h(v); }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_TRUE(plan.indirect_only.count("h"));
  EXPECT_EQ(plan.swrr_map.at("h"), plan.swrr_map.at("f"));
}

TEST(Indirect, UninstrumentedCallerBlocks) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int h(int v) { return v + 1; }\n"
                                  "int f(int v) { if (v) { log_msg(\"e\"); return -1; } return h(v); }\n"
                                  "int g(int v) { v = h(v); return v; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_FALSE(plan.indirect_only.count("h"));
  EXPECT_FALSE(plan.swrr_map.count("h"));
}

TEST(Indirect, CycleNeedsAnInstrumentedEntry) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) +
                                  "int q(int v);\n"
                                  "int p(int v) { return q(v); }\n"
                                  "int q(int v) { v = p(v); return v; }\n"
                                  "int f(int v) { if (v) { log_msg(\"e\"); return -1; } v = p(v); return 0; }\n"
                                  "int y(int v);\n"
                                  "int x(int v) { v = y(v); return v; }\n"
                                  "int y(int v) { v = x(v); return v; }\n");
  const SwrrPlan plan = plan_for(a);
  EXPECT_TRUE(plan.indirect_only.count("p"));
  EXPECT_TRUE(plan.indirect_only.count("q"));
  EXPECT_FALSE(plan.indirect_only.count("x"));
  EXPECT_FALSE(plan.indirect_only.count("y"));
}

TEST(Indirect, EscapedAddressBlocks) {
  const Analysis a = analyze_text(std::string(kLoggerPrelude) + "extern void sink(void *p);\n"
                                  "int h(int v) { return v + 1; }\n"
                                  "int f(int v) { if (v) { log_msg(\"e\"); return -1; } sink(&h); return h(v); }\n");
  EXPECT_FALSE(plan_for(a).indirect_only.count("h"));
}

TEST(Plan, CorpusInvariants) {
  const Analysis a = analyze_sources(corpus_sources());
  const SwrrPlan plan = find_functions(a, corpus_loggers());
  check_plan_invariants(a, plan, "corpus");
  std::size_t direct = 0, indirect = 0, none = 0;
  for (std::size_t i = 0; i < a.program.functions.size(); ++i)
    switch (protection_of(plan, a.program.function(i).name)) {
    case Protection::Direct: ++direct; break;
    case Protection::Indirect: ++indirect; break;
    case Protection::Unprotected: ++none; break;
    }
  EXPECT_EQ(direct + indirect + none, a.program.functions.size());
}

TEST(Plan, RandomProgramInvariants) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ProgramGen gen(seed);
    const Analysis a = analyze_sources(numbered_sources(gen.program(static_cast<int>(2 + seed % 40)).files));
    const SwrrPlan plan = plan_for(a);
    check_plan_invariants(a, plan, "seed " + std::to_string(seed));
    if (HasFailure())
      return;
  }
}

TEST(Plan, FixpointsAreStable) {
  auto check = [](const Analysis &a, const LoggerSet &loggers, const std::string &ctx) {
    const SwrrPlan plan = find_functions(a, loggers);
    SwrrPlan again = plan;
    propagate_error_codes(again, a, loggers);
    EXPECT_EQ(again.to_instrument, plan.to_instrument) << ctx;
    mark_indirect(again, a.call_graph);
    EXPECT_EQ(again, plan) << ctx;
  };
  check(analyze_sources(corpus_sources()), corpus_loggers(), "corpus");
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ProgramGen gen(seed);
    check(analyze_sources(numbered_sources(gen.program(static_cast<int>(2 + seed % 40)).files)), {"log_msg"},
          "seed " + std::to_string(seed));
  }
}

TEST(Plan, DeterministicAcrossRuns) {
  const auto sources = corpus_sources();
  EXPECT_EQ(find_functions(analyze_sources(sources), corpus_loggers()),
            find_functions(analyze_sources(sources), corpus_loggers()));
}

TEST(Plan, FileOrderDoesNotMatter) {
  auto sources = corpus_sources();
  const SwrrPlan plan = find_functions(analyze_sources(sources), corpus_loggers());
  std::reverse(sources.begin(), sources.end());
  // spans name files by input position, so compare everything else
  const SwrrPlan reversed = find_functions(analyze_sources(sources), corpus_loggers());
  EXPECT_EQ(protection_table(reversed), protection_table(plan));
  EXPECT_EQ(reversed.swrr_map, plan.swrr_map);
  EXPECT_EQ(reversed.option_owner, plan.option_owner);
}

TEST(Plan, DefinitionOrderDoesNotMatter) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    ProgramGen gen(seed);
    const GeneratedProgram gp = gen.program(static_cast<int>(4 + seed % 30));
    const auto base = protection_table(plan_for(analyze_sources(numbered_sources(gp.files))));

    // collect every definition, then deal them back out in shuffled order
    std::vector<std::string> prefixes;
    std::vector<std::string> defs;
    for (const auto &f : gp.files) {
      auto [prefix, d] = split_definitions(f);
      prefixes.push_back(prefix);
      defs.insert(defs.end(), d.begin(), d.end());
    }
    std::mt19937_64 rng(seed * 7919);
    for (int round = 0; round < 3; ++round) {
      std::shuffle(defs.begin(), defs.end(), rng);
      std::vector<std::string> files = prefixes;
      for (std::size_t i = 0; i < defs.size(); ++i)
        files[std::uniform_int_distribution<std::size_t>(0, files.size() - 1)(rng)] += defs[i];
      const auto permuted = protection_table(plan_for(analyze_sources(numbered_sources(files))));
      EXPECT_EQ(permuted, base) << "seed " << seed << " round " << round;
    }
  }
}

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swrr/analysis.hpp"
#include "swrr/error_spec.hpp"
#include "swrr/options.hpp"
#include "swrr/predicate.hpp"

namespace swrr {

using LoggerSet = std::set<std::string>;

/// Output of the function-selection driver.
///  - to_instrument: functions that receive an SWRR check, with their error code.
///  - swrr_map: options that disable each protected function.
///  - option_owner: the single function each option directly guards.
///  - indirect_only: functions disabled only through their callers' options.
struct SwrrPlan {
  std::map<std::string, ErrorSpec> to_instrument;
  std::map<std::string, std::set<std::string>> swrr_map;
  std::map<std::string, std::string> option_owner;
  std::set<std::string> indirect_only;

  friend bool operator==(const SwrrPlan &, const SwrrPlan &) = default;
};

enum class Protection { Direct, Indirect, Unprotected };

inline const char *to_string(Protection p) {
  switch (p) {
  case Protection::Direct: return "direct";
  case Protection::Indirect: return "indirect";
  case Protection::Unprotected: return "none";
  }
  return "?";
}

inline Protection protection_of(const SwrrPlan &plan, const std::string &fn) {
  if (plan.to_instrument.count(fn))
    return Protection::Direct;
  if (plan.indirect_only.count(fn))
    return Protection::Indirect;
  return Protection::Unprotected;
}

/// A guarded logging call that leads straight to a constant return.
struct ErrorPath {
  StmtId call_stmt = kNone;
  ExprId call = kNone;
  StmtId ret = kNone;
  ErrorCode code;
};

/// Error code a Return statement yields, when it is a constant of the
/// function's return shape (`0` counts as NULL in pointer functions).
inline std::optional<ErrorCode> constant_return(const ProgramModel &pm, std::size_t fn, StmtId ret) {
  const AstFunction &f = pm.function(fn);
  const Stmt &r = f.stmt(ret);
  std::optional<ErrorCode> code;
  if (r.expr == kNone) {
    code = ErrorCode::void_return();
  } else if (auto lit = literal_constant(f.exprs, r.expr)) {
    if (lit->kind == Constant::Kind::Null || (f.category == ReturnCategory::Pointer && lit->value == 0))
      code = ErrorCode::null();
    else
      code = ErrorCode::integer(lit->value);
  } else if (auto sym = constant_operand(pm, fn, ret, r.expr)) {
    code = ErrorCode::symbol(sym->token);
  }
  if (code && !code->fits(f.category))
    return std::nullopt;
  return code;
}

/// Every error-logging path of a function, in source order of the logging call.
inline std::vector<ErrorPath> error_paths(const ProgramModel &pm, std::size_t fn, const GuardInfo &guards,
                                          const LoggerSet &loggers) {
  std::vector<ErrorPath> out;
  const AstFunction &f = pm.function(fn);
  for_each_stmt(f, [&](StmtId sid, const Stmt &) {
    const StmtGuard &g = guards[sid];
    if (!g.reachable || !g.guarded || !g.leads_to_return)
      return;
    for_each_own_expr(f, sid, [&](ExprId eid, const Expr &e) {
      if (e.kind != ExprKind::Call)
        return;
      const Expr &callee = f.expr(e.lhs);
      if (callee.kind != ExprKind::Ident || !loggers.count(callee.text) || is_variable(pm, fn, sid, callee.text))
        return;
      if (!out.empty() && out.back().call_stmt == sid)
        return;
      if (auto code = constant_return(pm, fn, g.reached_return))
        out.push_back(ErrorPath{sid, eid, g.reached_return, *code});
    });
  });
  return out;
}

/// Error-logging heuristic: the first guarded logger call that leads
/// unconditionally to a constant return.
inline std::optional<ErrorSpec> detect_error_logging(const ProgramModel &pm, std::size_t fn, const GuardInfo &guards,
                                                     const LoggerSet &loggers) {
  const auto paths = error_paths(pm, fn, guards, loggers);
  if (paths.empty())
    return std::nullopt;
  const AstFunction &f = pm.function(fn);
  ErrorSpec spec;
  spec.code = paths.front().code;
  spec.heuristic = Heuristic::ErrorLogging;
  spec.evidence_span = f.stmt(paths.front().ret).span;
  return spec;
}

namespace detail {

inline void predicate_leaves(const std::vector<Expr> &arena, ExprId id, std::vector<ExprId> &out) {
  const Expr &e = arena[id];
  if (e.kind == ExprKind::Binary && (e.binary == BinaryOp::And || e.binary == BinaryOp::Or)) {
    predicate_leaves(arena, e.lhs, out);
    predicate_leaves(arena, e.rhs, out);
    return;
  }
  out.push_back(id);
}

inline bool is_null_check(const ValuePredicate &p) {
  if (p.op == CmpOp::Truthy || p.op == CmpOp::Falsy)
    return true;
  if (p.op != CmpOp::Eq && p.op != CmpOp::Ne)
    return false;
  return p.constant.kind == Constant::Kind::Null || (p.constant.kind == Constant::Kind::Int && p.constant.value == 0);
}

} // namespace detail

/// NULL-return heuristic for pointer functions: NULL is a legal result when
/// the function itself returns NULL, or some caller tests the result against
/// NULL.
inline std::optional<ErrorSpec> detect_null_return(const ProgramModel &pm, std::size_t fn, const GuardInfo &guards) {
  const AstFunction &f = pm.function(fn);
  if (f.category != ReturnCategory::Pointer)
    return std::nullopt;
  std::optional<ErrorSpec> found;
  for_each_stmt(f, [&](StmtId sid, const Stmt &s) {
    if (found || s.kind != StmtKind::Return || !guards[sid].reachable)
      return;
    auto code = constant_return(pm, fn, sid);
    if (code && code->kind == ErrorCodeKind::Null)
      found = ErrorSpec{*code, Heuristic::NullReturn, s.span, {}, kNone, true};
  });
  if (found)
    return found;
  for (std::size_t c = 0; c < pm.functions.size() && !found; ++c) {
    const AstFunction &caller = pm.function(c);
    for_each_stmt(caller, [&](StmtId sid, const Stmt &s) {
      if (found || (s.kind != StmtKind::If && s.kind != StmtKind::While))
        return;
      std::vector<ExprId> leaves;
      detail::predicate_leaves(caller.exprs, s.expr, leaves);
      for (ExprId leaf : leaves) {
        auto p = match_predicate(pm, c, sid, leaf);
        if (!p || !detail::is_null_check(*p))
          continue;
        auto callee = subject_callee(pm, c, sid, p->subject);
        if (callee && *callee == f.name) {
          found = ErrorSpec{ErrorCode::null(), Heuristic::NullReturn, caller.expr(leaf).span, {}, kNone, true};
          return;
        }
      }
    });
  }
  return found;
}

namespace detail {

inline std::optional<ErrorSpec> propagation_candidate(const Analysis &a, std::size_t fn, const SwrrPlan &plan) {
  const ProgramModel &pm = a.program;
  const AstFunction &f = pm.function(fn);
  const GuardInfo &guards = a.guards[fn];
  std::optional<ErrorSpec> found;
  for_each_stmt(f, [&](StmtId sid, const Stmt &s) {
    if (found || s.kind != StmtKind::Return || s.expr == kNone || !guards[sid].reachable)
      return;
    // direct: return g(...);
    const Expr &value = f.expr(s.expr);
    if (value.kind == ExprKind::Call) {
      const Expr &callee = f.expr(value.lhs);
      if (callee.kind == ExprKind::Ident && !is_variable(pm, fn, sid, callee.text)) {
        auto it = plan.to_instrument.find(callee.text);
        if (it != plan.to_instrument.end() && it->second.code.fits(f.category)) {
          found = ErrorSpec{it->second.code, Heuristic::PropagationDirect, s.span, callee.text, kNone, true};
          return;
        }
      }
    }
    // translated: if (pred(g(...))) return K;
    auto k = constant_return(pm, fn, sid);
    if (!k)
      return;
    for (const Predicate &p : guards[sid].controlling) {
      auto vp = match_predicate(pm, fn, p.stmt, f.stmt(p.stmt).expr);
      if (!vp)
        continue;
      auto g = subject_callee(pm, fn, p.stmt, vp->subject);
      if (!g)
        continue;
      auto it = plan.to_instrument.find(*g);
      if (it == plan.to_instrument.end())
        continue;
      if (evaluate(it->second.code, *vp, p.branch) == Truth::True) {
        found = ErrorSpec{*k, Heuristic::PropagationTranslated, s.span, *g, p.stmt, p.branch == Branch::Then};
        return;
      }
    }
  });
  return found;
}

} // namespace detail

/// Error propagation to a fixpoint. Each round evaluates every rule against
/// the plan as it stood when the round began, then commits all inferences.
inline void propagate_error_codes(SwrrPlan &plan, const Analysis &a, const LoggerSet &loggers) {
  const ProgramModel &pm = a.program;
  while (true) {
    std::map<std::string, ErrorSpec> found;
    for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
      const AstFunction &f = pm.function(fn);
      if (f.category == ReturnCategory::Void || plan.to_instrument.count(f.name))
        continue;
      if (auto spec = detail::propagation_candidate(a, fn, plan))
        found.emplace(f.name, *spec);
    }
    // downward: a caller's error path is conditioned on the callee's result.
    // Callers are visited by name so definition order cannot pick the winner.
    for (const auto &[name, fn] : pm.function_index) {
      const AstFunction &f = pm.function(fn);
      for (const ErrorPath &path : error_paths(pm, fn, a.guards[fn], loggers)) {
        for (const Predicate &p : a.guards[fn][path.call_stmt].controlling) {
          auto vp = match_predicate(pm, fn, p.stmt, f.stmt(p.stmt).expr);
          if (!vp)
            continue;
          auto g = subject_callee(pm, fn, p.stmt, vp->subject);
          if (!g)
            continue;
          auto gi = pm.find_function(*g);
          if (!gi || plan.to_instrument.count(*g) || found.count(*g))
            continue;
          auto code = solve(*vp, p.branch, pm.function(*gi).category);
          if (!code)
            continue;
          found.emplace(*g, ErrorSpec{*code, Heuristic::PropagationDownward, f.expr(f.stmt(p.stmt).expr).span, f.name,
                                      p.stmt, p.branch == Branch::Then});
        }
      }
    }
    if (found.empty())
      return;
    for (auto &[name, spec] : found)
      plan.to_instrument.emplace(name, std::move(spec));
  }
}

/// Gives every directly instrumented function its canonical option.
inline void assign_options(SwrrPlan &plan, const ProgramModel &pm) {
  std::vector<OptionRequest> requests;
  std::vector<std::string> names;
  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    if (!plan.to_instrument.count(f.name))
      continue;
    requests.push_back({pm.file_of(fn).file.name, f.name, f.span.byte_start});
    names.push_back(f.name);
  }
  const auto ids = assign_option_ids(requests);
  plan.option_owner.clear();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    plan.swrr_map[names[i]] = {ids[i]};
    plan.option_owner[ids[i]] = names[i];
  }
}

/// Indirect heuristic. Computes the largest set S of uninstrumented functions
/// where each member has a caller, no unresolved incoming edge, only callers
/// that are instrumented or in S, and at least one option reaching it through
/// S. Members map to the union of their callers' options.
inline void mark_indirect(SwrrPlan &plan, const CallGraph &cg) {
  std::map<std::string, std::set<std::string>> callers;
  std::map<std::string, std::set<std::string>> callees;
  for (const auto &e : cg.edges) {
    if (e.caller == kUnknownNode || !cg.functions.count(e.caller) || !cg.functions.count(e.callee))
      continue;
    callers[e.callee].insert(e.caller);
    callees[e.caller].insert(e.callee);
  }
  auto direct = [&](const std::string &f) { return plan.to_instrument.count(f) > 0; };

  std::set<std::string> members;
  for (const auto &f : cg.functions)
    if (!direct(f) && !callers[f].empty() && !cg.has_unresolved_incoming(f))
      members.insert(f);

  std::map<std::string, std::set<std::string>> options;
  while (true) {
    // drop members with an uncovered caller, cascading to their callees
    std::vector<std::string> work(members.begin(), members.end());
    while (!work.empty()) {
      const std::string f = work.back();
      work.pop_back();
      if (!members.count(f))
        continue;
      bool covered = true;
      for (const auto &c : callers[f])
        if (!direct(c) && !members.count(c))
          covered = false;
      if (covered)
        continue;
      members.erase(f);
      for (const auto &g : callees[f])
        if (members.count(g))
          work.push_back(g);
    }
    // options flow from instrumented callers through members
    options.clear();
    std::vector<std::string> frontier;
    for (const auto &f : members)
      for (const auto &c : callers[f])
        if (direct(c)) {
          for (const auto &o : plan.swrr_map[c])
            options[f].insert(o);
          frontier.push_back(f);
        }
    while (!frontier.empty()) {
      const std::string f = frontier.back();
      frontier.pop_back();
      for (const auto &g : callees[f]) {
        if (!members.count(g))
          continue;
        auto &dst = options[g];
        const auto before = dst.size();
        dst.insert(options[f].begin(), options[f].end());
        if (dst.size() != before)
          frontier.push_back(g);
      }
    }
    std::vector<std::string> empty;
    for (const auto &f : members)
      if (options[f].empty())
        empty.push_back(f);
    if (empty.empty())
      break;
    for (const auto &f : empty)
      members.erase(f);
  }

  for (const auto &f : plan.indirect_only)
    plan.swrr_map.erase(f);
  plan.indirect_only = members;
  for (const auto &f : members)
    plan.swrr_map[f] = options[f];
}

/// Function-selection driver: error-logging, then NULL-return, then error
/// propagation, then the indirect heuristic.
inline SwrrPlan find_functions(const Analysis &a, const LoggerSet &loggers) {
  SwrrPlan plan;
  const ProgramModel &pm = a.program;
  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    if (auto spec = detect_error_logging(pm, fn, a.guards[fn], loggers))
      plan.to_instrument.emplace(f.name, *spec);
    else if (auto spec = detect_null_return(pm, fn, a.guards[fn]))
      plan.to_instrument.emplace(f.name, *spec);
  }
  propagate_error_codes(plan, a, loggers);
  assign_options(plan, pm);
  mark_indirect(plan, a.call_graph);
  return plan;
}

} // namespace swrr

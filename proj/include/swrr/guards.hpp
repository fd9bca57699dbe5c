#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "swrr/ast.hpp"

namespace swrr {

enum class Branch { Then, Else };

inline const char *to_string(Branch b) { return b == Branch::Then ? "then" : "else"; }

/// The condition of If/While statement `stmt`, required to evaluate to the
/// `branch` side.
struct Predicate {
  StmtId stmt = kNone;
  Branch branch = Branch::Then;
  friend auto operator<=>(const Predicate &, const Predicate &) = default;
};

struct StmtGuard {
  bool reachable = true;
  /// Control dependent on at least one conditional.
  bool guarded = false;
  /// Predicates this statement is immediately control dependent on, innermost
  /// (latest in source) first.
  std::vector<Predicate> controlling;
  /// Transitive closure of `controlling`, innermost first.
  std::vector<Predicate> governing;
  /// Every path from the statement reaches a Return without crossing another
  /// branch point.
  bool leads_to_return = false;
  StmtId reached_return = kNone;
};

struct GuardInfo {
  std::vector<StmtGuard> stmts;
  const StmtGuard &operator[](StmtId s) const { return stmts[s]; }
};

namespace detail {

inline bool contains_return(const AstFunction &f, StmtId s) {
  bool found = false;
  for_each_stmt(f, s, [&](StmtId, const Stmt &st) { found = found || st.kind == StmtKind::Return; });
  return found;
}

class GuardBuilder {
public:
  explicit GuardBuilder(const AstFunction &f) : f_(f) { info_.stmts.resize(f.stmts.size()); }

  GuardInfo run() {
    walk(f_.body, Ctx{std::set<Predicate>{}});
    for (StmtId s = 0; s < f_.stmts.size(); ++s) {
      auto &g = info_.stmts[s];
      g.guarded = g.reachable && !g.controlling.empty();
      if (g.reachable)
        g.governing = chain(s);
      const auto r = first_return_from(s);
      g.leads_to_return = r.has_value();
      g.reached_return = r.value_or(kNone);
    }
    return std::move(info_);
  }

private:
  // nullopt: unreachable program point.
  using Ctx = std::optional<std::set<Predicate>>;

  void record(StmtId s, const Ctx &ctx) {
    auto &g = info_.stmts[s];
    g.reachable = ctx.has_value();
    if (ctx) {
      g.controlling.assign(ctx->begin(), ctx->end());
      std::sort(g.controlling.begin(), g.controlling.end(), [&](const Predicate &a, const Predicate &b) {
        const auto oa = f_.stmt(a.stmt).span.byte_start, ob = f_.stmt(b.stmt).span.byte_start;
        return oa != ob ? oa > ob : a.branch < b.branch;
      });
    }
  }

  void mark_unreachable(StmtId s) {
    for_each_stmt(f_, s, [&](StmtId id, const Stmt &) { info_.stmts[id].reachable = false; });
  }

  // Returns the control context at the point right after `s`.
  Ctx walk(StmtId s, Ctx ctx) {
    record(s, ctx);
    if (!ctx) {
      mark_unreachable(s);
      return std::nullopt;
    }
    const Stmt &st = f_.stmt(s);
    switch (st.kind) {
    case StmtKind::Return:
      return std::nullopt;
    case StmtKind::Block:
      for (StmtId c : st.children)
        ctx = walk(c, std::move(ctx));
      return ctx;
    case StmtKind::If: {
      const Ctx a = walk(st.then_branch, std::set<Predicate>{{s, Branch::Then}});
      const Ctx b = st.else_branch != kNone ? walk(st.else_branch, std::set<Predicate>{{s, Branch::Else}})
                                            : Ctx{std::set<Predicate>{{s, Branch::Else}}};
      if (!a && !b)
        return std::nullopt;
      const bool may_exit = contains_return(f_, st.then_branch) ||
                            (st.else_branch != kNone && contains_return(f_, st.else_branch));
      if (!may_exit)
        return ctx;
      std::set<Predicate> merged;
      if (a)
        merged.insert(a->begin(), a->end());
      if (b)
        merged.insert(b->begin(), b->end());
      return merged;
    }
    case StmtKind::While:
      walk(st.then_branch, std::set<Predicate>{{s, Branch::Then}});
      if (!contains_return(f_, st.then_branch))
        return ctx;
      return std::set<Predicate>{{s, Branch::Else}};
    default:
      return ctx;
    }
  }

  std::vector<Predicate> chain(StmtId s) const {
    std::vector<Predicate> out;
    std::set<Predicate> seen;
    std::vector<Predicate> frontier = info_.stmts[s].controlling;
    while (!frontier.empty()) {
      std::vector<Predicate> next;
      for (const auto &p : frontier) {
        if (!seen.insert(p).second)
          continue;
        out.push_back(p);
        for (const auto &q : info_.stmts[p.stmt].controlling)
          next.push_back(q);
      }
      frontier = std::move(next);
    }
    return out;
  }

  // The Return reached from `s` along straight-line code, if any.
  std::optional<StmtId> first_return_from(StmtId s) const {
    const Stmt &st = f_.stmt(s);
    if (st.kind == StmtKind::Return)
      return s;
    if (st.kind == StmtKind::If || st.kind == StmtKind::While)
      return std::nullopt;
    if (st.kind == StmtKind::Block)
      return enter(s);
    return after(s);
  }

  std::optional<StmtId> enter(StmtId s) const {
    const Stmt &st = f_.stmt(s);
    switch (st.kind) {
    case StmtKind::Return:
      return s;
    case StmtKind::If:
    case StmtKind::While:
      return std::nullopt;
    case StmtKind::Block:
      if (!st.children.empty())
        return enter(st.children.front());
      return after(s);
    default:
      return after(s);
    }
  }

  std::optional<StmtId> after(StmtId s) const {
    const StmtId p = f_.stmt(s).parent;
    if (p == kNone)
      return std::nullopt; // falls off the end of the function
    const Stmt &ps = f_.stmt(p);
    switch (ps.kind) {
    case StmtKind::Block: {
      auto it = std::find(ps.children.begin(), ps.children.end(), s);
      if (++it != ps.children.end())
        return enter(*it);
      return after(p);
    }
    case StmtKind::If:
      return after(p);
    default:
      return std::nullopt; // back to a loop condition
    }
  }

  const AstFunction &f_;
  GuardInfo info_;
};

} // namespace detail

/// Guard facts for every statement of `f`, derived from the structured AST.
inline GuardInfo compute_guards(const AstFunction &f) { return detail::GuardBuilder(f).run(); }

} // namespace swrr

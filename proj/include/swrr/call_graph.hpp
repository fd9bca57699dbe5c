#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "swrr/program.hpp"

namespace swrr {

enum class Resolution { Direct, FnPointerField, Unresolved };

inline const char *to_string(Resolution r) {
  switch (r) {
  case Resolution::Direct: return "direct";
  case Resolution::FnPointerField: return "fn-pointer-field";
  case Resolution::Unresolved: return "unresolved";
  }
  return "?";
}

inline constexpr std::size_t kNoSite = static_cast<std::size_t>(-1);

/// One call-graph edge. Unresolved edges come in two shapes:
///  - a call site whose target could not be determined: callee = kUnknownNode;
///  - a function whose address escapes somewhere the field matcher does not
///    model: caller = kUnknownNode, span = the escaping expression.
struct CallEdge {
  std::string caller;
  std::string callee;
  SourceSpan span;
  Resolution resolution = Resolution::Direct;
  /// Index into ProgramModel::call_sites, or kNoSite for escape edges.
  std::size_t site = kNoSite;
  friend bool operator==(const CallEdge &, const CallEdge &) = default;
};

inline constexpr const char *kUnknownNode = "<unknown>";

/// Where a function's address was stored into a (record, field) slot.
struct FieldTarget {
  std::string function;
  SourceSpan span;
};

using FieldKey = std::pair<std::string, std::string>;

struct CallGraph {
  std::set<std::string> functions;
  std::set<std::string> externals;
  std::vector<CallEdge> edges;
  std::map<FieldKey, std::vector<FieldTarget>> field_targets;

  /// Distinct known callers of `name` (excludes the unknown node).
  std::set<std::string> callers_of(const std::string &name) const {
    std::set<std::string> out;
    for (const auto &e : edges)
      if (e.callee == name && e.caller != kUnknownNode)
        out.insert(e.caller);
    return out;
  }
  std::set<std::string> callees_of(const std::string &name) const {
    std::set<std::string> out;
    for (const auto &e : edges)
      if (e.caller == name)
        out.insert(e.callee);
    return out;
  }
  bool has_unresolved_incoming(const std::string &name) const {
    for (const auto &e : edges)
      if (e.callee == name && e.resolution == Resolution::Unresolved)
        return true;
    return false;
  }
  std::vector<const CallEdge *> edges_for_site(std::size_t site) const {
    std::vector<const CallEdge *> out;
    for (const auto &e : edges)
      if (e.site == site)
        out.push_back(&e);
    return out;
  }
};

namespace detail {

class CallGraphBuilder {
public:
  explicit CallGraphBuilder(const ProgramModel &pm) : pm_(pm) {}

  CallGraph run() {
    for (std::size_t i = 0; i < pm_.functions.size(); ++i)
      cg_.functions.insert(pm_.function(i).name);
    for (const auto &[name, decl] : pm_.externals)
      cg_.externals.insert(name);

    collect_field_targets();
    for (std::size_t site = 0; site < pm_.call_sites.size(); ++site)
      resolve(site);
    collect_escapes();
    return std::move(cg_);
  }

private:
  bool global_names_function(const std::string &name) const {
    return !pm_.globals.count(name) && (pm_.function_index.count(name) || pm_.externals.count(name));
  }

  /// Name of the function an expression evaluates to, if it is a function
  /// designator (`&f` or a bare `f`).
  std::optional<std::string> function_value(std::optional<std::size_t> fn, StmtId at,
                                            const std::vector<Expr> &arena, ExprId id) const {
    const Expr &e = arena[id];
    if (e.kind != ExprKind::AddrOf && e.kind != ExprKind::Ident)
      return std::nullopt;
    const bool is_fn = fn ? names_function(pm_, *fn, at, e.text) : global_names_function(e.text);
    if (!is_fn)
      return std::nullopt;
    return e.text;
  }

  void add_target(const std::string &record, const std::string &field, const std::string &fn_name,
                  const SourceSpan &span) {
    cg_.field_targets[{record, field}].push_back(FieldTarget{fn_name, span});
  }

  void init_list(std::optional<std::size_t> fn, StmtId at, const std::vector<Expr> &arena, ExprId list,
                 const std::string &record, std::set<std::pair<const void *, ExprId>> &consumed) {
    const RecordDecl *r = pm_.find_record(record);
    if (!r)
      return;
    const Expr &e = arena[list];
    std::size_t next = 0;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      std::size_t slot = next;
      if (!e.designators[i].empty()) {
        slot = r->fields.size();
        for (std::size_t k = 0; k < r->fields.size(); ++k)
          if (r->fields[k].name == e.designators[i])
            slot = k;
      }
      next = slot + 1;
      if (slot >= r->fields.size())
        continue;
      const Field &fld = r->fields[slot];
      const ExprId item = e.args[i];
      if (arena[item].kind == ExprKind::InitList) {
        if (fld.type.base == BaseType::Struct && fld.type.pointer_depth == 0 && !fld.type.function_pointer)
          init_list(fn, at, arena, item, fld.type.record, consumed);
        continue;
      }
      if (auto target = function_value(fn, at, arena, item)) {
        add_target(record, fld.name, *target, arena[item].span);
        consumed.insert({&arena, item});
      }
    }
  }

  void collect_field_targets() {
    for (std::size_t fi = 0; fi < pm_.files.size(); ++fi)
      for (const auto &g : pm_.files[fi].globals)
        if (g.init != kNone && g.exprs[g.init].kind == ExprKind::InitList && g.type.base == BaseType::Struct &&
            g.type.pointer_depth == 0)
          init_list(std::nullopt, kNone, g.exprs, g.init, g.type.record, consumed_);

    for (std::size_t fn = 0; fn < pm_.functions.size(); ++fn) {
      const AstFunction &f = pm_.function(fn);
      for_each_stmt(f, [&](StmtId sid, const Stmt &s) {
        if (s.kind == StmtKind::Assign && f.expr(s.lhs).kind == ExprKind::FieldAccess) {
          auto owner = field_owner(pm_, fn, sid, f.exprs, s.lhs);
          auto target = function_value(fn, sid, f.exprs, s.expr);
          if (owner && target) {
            add_target(*owner, f.expr(s.lhs).text, *target, f.expr(s.expr).span);
            consumed_.insert({&f.exprs, s.expr});
          }
        }
        if (s.kind == StmtKind::Decl && s.expr != kNone && f.expr(s.expr).kind == ExprKind::InitList &&
            s.decl_type.base == BaseType::Struct && s.decl_type.pointer_depth == 0)
          init_list(fn, sid, f.exprs, s.expr, s.decl_type.record, consumed_);
      });
    }
  }

  void resolve(std::size_t site) {
    const CallSite &cs = pm_.call_sites[site];
    const AstFunction &f = pm_.function(cs.caller);
    const Expr &call = f.expr(cs.call);
    const Expr &callee = f.expr(call.lhs);
    direct_callees_.insert({&f.exprs, call.lhs});
    if (callee.kind == ExprKind::Ident) {
      if (is_variable(pm_, cs.caller, cs.stmt, callee.text))
        unresolved(f.name, cs.span, site);
      else
        cg_.edges.push_back({f.name, callee.text, cs.span, Resolution::Direct, site});
      return;
    }
    auto owner = field_owner(pm_, cs.caller, cs.stmt, f.exprs, call.lhs);
    if (owner) {
      auto it = cg_.field_targets.find({*owner, callee.text});
      if (it != cg_.field_targets.end()) {
        std::set<std::string> seen;
        for (const auto &t : it->second)
          if (seen.insert(t.function).second)
            cg_.edges.push_back({f.name, t.function, cs.span, Resolution::FnPointerField, site});
        return;
      }
    }
    unresolved(f.name, cs.span, site);
  }

  void unresolved(const std::string &caller, const SourceSpan &span, std::size_t site) {
    cg_.edges.push_back({caller, kUnknownNode, span, Resolution::Unresolved, site});
  }

  void escapes_in(std::optional<std::size_t> fn, StmtId at, const std::vector<Expr> &arena, ExprId root) {
    for_each_expr(arena, root, [&](ExprId id, const Expr &) {
      if (consumed_.count({&arena, id}) || direct_callees_.count({&arena, id}))
        return;
      if (auto name = function_value(fn, at, arena, id))
        if (pm_.function_index.count(*name))
          cg_.edges.push_back({kUnknownNode, *name, arena[id].span, Resolution::Unresolved, kNoSite});
    });
  }

  void collect_escapes() {
    for (std::size_t fi = 0; fi < pm_.files.size(); ++fi)
      for (const auto &g : pm_.files[fi].globals)
        escapes_in(std::nullopt, kNone, g.exprs, g.init);
    for (std::size_t fn = 0; fn < pm_.functions.size(); ++fn) {
      const AstFunction &f = pm_.function(fn);
      for_each_stmt(f, [&](StmtId sid, const Stmt &s) {
        if (s.kind == StmtKind::Assign)
          escapes_in(fn, sid, f.exprs, s.lhs);
        escapes_in(fn, sid, f.exprs, s.expr);
      });
    }
  }

  const ProgramModel &pm_;
  CallGraph cg_;
  std::set<std::pair<const void *, ExprId>> consumed_;
  std::set<std::pair<const void *, ExprId>> direct_callees_;
};

} // namespace detail

/// Whole-program call graph. Calls through `expr->field(...)` resolve to every
/// function stored into the same (record, field) slot anywhere in the program.
inline CallGraph build_call_graph(const ProgramModel &program) {
  return detail::CallGraphBuilder(program).run();
}

} // namespace swrr

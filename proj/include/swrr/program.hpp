#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swrr/ast.hpp"
#include "swrr/parser.hpp"

namespace swrr {

/// Location of a function definition inside ProgramModel::files.
struct FunctionRef {
  std::size_t file = 0;
  std::size_t index = 0;
};

/// One syntactic call: `call` is the Call expression inside statement `stmt`
/// of function `caller` (an index into ProgramModel::functions).
struct CallSite {
  std::size_t caller = 0;
  StmtId stmt = kNone;
  ExprId call = kNone;
  SourceSpan span;
};

struct GlobalRef {
  std::size_t file = 0;
  std::size_t index = 0;
};

/// The linked program: every parsed file plus program-wide symbol tables.
/// Function indices follow program order (file order, then source order).
struct ProgramModel {
  std::vector<ParsedFile> files;
  std::vector<FunctionRef> functions;
  std::map<std::string, std::size_t> function_index;
  std::map<std::string, RecordDecl> records;
  /// Declared (or merely called) functions with no definition.
  std::map<std::string, std::optional<ExternDecl>> externals;
  std::map<std::string, GlobalRef> globals;
  std::vector<CallSite> call_sites;

  const AstFunction &function(std::size_t i) const {
    const FunctionRef &r = functions[i];
    return files[r.file].functions[r.index];
  }
  const ParsedFile &file_of(std::size_t i) const { return files[functions[i].file]; }
  const GlobalDecl &global(const GlobalRef &r) const { return files[r.file].globals[r.index]; }

  std::optional<std::size_t> find_function(const std::string &name) const {
    auto it = function_index.find(name);
    if (it == function_index.end())
      return std::nullopt;
    return it->second;
  }
  const RecordDecl *find_record(const std::string &name) const {
    auto it = records.find(name);
    return it == records.end() ? nullptr : &it->second;
  }
};

namespace detail {

inline void renumber(std::vector<Expr> &exprs, FileId id) {
  for (auto &e : exprs)
    e.span.file_id = id;
}

inline void renumber(ParsedFile &pf, FileId id) {
  pf.file.id = id;
  for (auto &f : pf.functions) {
    f.span.file_id = f.body_open_span.file_id = f.name_span.file_id = id;
    for (auto &s : f.stmts)
      s.span.file_id = id;
    renumber(f.exprs, id);
  }
  for (auto &r : pf.records)
    r.span.file_id = id;
  for (auto &e : pf.externs)
    e.span.file_id = id;
  for (auto &g : pf.globals) {
    g.span.file_id = id;
    renumber(g.exprs, id);
  }
  for (auto &s : pf.items)
    s.file_id = id;
  for (auto &d : pf.diagnostics)
    d.span.file_id = id;
}

} // namespace detail

/// Merges parsed files into one program. File ids are reassigned to the file's
/// position. Throws DuplicateFunction when two files define the same name and
/// TypeShape when two files disagree on a struct layout.
inline ProgramModel link_program(std::vector<ParsedFile> parsed_files) {
  ProgramModel pm;
  pm.files = std::move(parsed_files);
  for (std::size_t fi = 0; fi < pm.files.size(); ++fi) {
    ParsedFile &pf = pm.files[fi];
    detail::renumber(pf, static_cast<FileId>(fi));
    for (std::size_t i = 0; i < pf.functions.size(); ++i) {
      const AstFunction &f = pf.functions[i];
      if (pm.function_index.count(f.name)) {
        const AstFunction &prev = pm.function(pm.function_index[f.name]);
        throw Error(ErrorKind::DuplicateFunction,
                    "function '" + f.name + "' already defined in " +
                        pm.file_of(pm.function_index[f.name]).file.name + ":" +
                        std::to_string(prev.name_span.line),
                    pf.file.name, f.name_span.line, pf.file.column_of(f.name_span.byte_start));
      }
      pm.function_index[f.name] = pm.functions.size();
      pm.functions.push_back(FunctionRef{fi, i});
    }
    for (const auto &r : pf.records) {
      auto [it, fresh] = pm.records.emplace(r.name, r);
      if (!fresh && it->second.fields != r.fields)
        throw Error(ErrorKind::TypeShape, "conflicting definitions of struct " + r.name,
                    pf.file.name, r.span.line);
    }
    for (std::size_t i = 0; i < pf.globals.size(); ++i)
      pm.globals.emplace(pf.globals[i].name, GlobalRef{fi, i});
  }
  for (const auto &pf : pm.files)
    for (const auto &e : pf.externs)
      if (!pm.function_index.count(e.name))
        pm.externals.emplace(e.name, e);

  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    for_each_stmt(f, [&](StmtId sid, const Stmt &) {
      for_each_own_expr(f, sid, [&](ExprId eid, const Expr &e) {
        if (e.kind != ExprKind::Call)
          return;
        pm.call_sites.push_back(CallSite{fn, sid, eid, e.span});
        const Expr &callee = f.expr(e.lhs);
        if (callee.kind == ExprKind::Ident && !pm.function_index.count(callee.text))
          pm.externals.emplace(callee.text, std::nullopt);
      });
    });
  }
  return pm;
}

// --- name and type resolution ----------------------------------------------

/// Type of the variable `name` visible at statement `at` of function `fn`
/// (locals in enclosing blocks, then parameters, then globals).
inline std::optional<Type> variable_type(const ProgramModel &pm, std::size_t fn, StmtId at,
                                         const std::string &name) {
  const AstFunction &f = pm.function(fn);
  StmtId child = at;
  StmtId s = at == kNone ? kNone : f.stmt(at).parent;
  while (s != kNone) {
    const Stmt &st = f.stmt(s);
    if (st.kind == StmtKind::Block) {
      std::optional<Type> found;
      for (StmtId c : st.children) {
        if (c == child)
          break;
        const Stmt &cs = f.stmt(c);
        if (cs.kind == StmtKind::Decl && cs.decl_name == name)
          found = cs.decl_type;
      }
      if (found)
        return found;
    }
    child = s;
    s = st.parent;
  }
  for (const auto &p : f.params)
    if (p.name == name)
      return p.type;
  auto g = pm.globals.find(name);
  if (g != pm.globals.end())
    return pm.global(g->second).type;
  return std::nullopt;
}

inline bool is_variable(const ProgramModel &pm, std::size_t fn, StmtId at, const std::string &name) {
  return variable_type(pm, fn, at, name).has_value();
}

/// Whether `name`, used as a value in function `fn`, denotes a function.
inline bool names_function(const ProgramModel &pm, std::size_t fn, StmtId at, const std::string &name) {
  if (is_variable(pm, fn, at, name))
    return false;
  return pm.function_index.count(name) || pm.externals.count(name);
}

/// Static type of an expression, when MiniC's syntactic typing determines it.
inline std::optional<Type> expr_type(const ProgramModel &pm, std::size_t fn, StmtId at,
                                     const std::vector<Expr> &arena, ExprId id) {
  const Expr &e = arena[id];
  switch (e.kind) {
  case ExprKind::Ident:
    return variable_type(pm, fn, at, e.text);
  case ExprKind::FieldAccess: {
    auto base = expr_type(pm, fn, at, arena, e.lhs);
    if (!base || base->base != BaseType::Struct || base->function_pointer)
      return std::nullopt;
    const RecordDecl *r = pm.find_record(base->record);
    if (!r)
      return std::nullopt;
    const Field *fld = r->find(e.text);
    if (!fld)
      return std::nullopt;
    return fld->type;
  }
  case ExprKind::Unary:
    if (e.unary == UnaryOp::Deref) {
      auto inner = expr_type(pm, fn, at, arena, e.lhs);
      if (!inner || inner->pointer_depth == 0)
        return std::nullopt;
      --inner->pointer_depth;
      return inner;
    }
    return Type{};
  case ExprKind::Call: {
    const Expr &callee = arena[e.lhs];
    if (callee.kind == ExprKind::Ident) {
      if (auto idx = pm.find_function(callee.text))
        return pm.function(*idx).return_type;
      auto ext = pm.externals.find(callee.text);
      if (ext != pm.externals.end() && ext->second)
        return ext->second->return_type;
      return std::nullopt;
    }
    auto fp = expr_type(pm, fn, at, arena, e.lhs);
    if (!fp || !fp->function_pointer)
      return std::nullopt;
    fp->function_pointer = false;
    return fp;
  }
  case ExprKind::IntLit:
  case ExprKind::Binary:
    return Type{};
  default:
    return std::nullopt;
  }
}

/// Record type name that a field access `base->f` / `base.f` selects from.
inline std::optional<std::string> field_owner(const ProgramModel &pm, std::size_t fn, StmtId at,
                                              const std::vector<Expr> &arena, ExprId field_access) {
  const Expr &e = arena[field_access];
  auto base = expr_type(pm, fn, at, arena, e.lhs);
  if (!base || base->base != BaseType::Struct || base->function_pointer)
    return std::nullopt;
  if (e.arrow ? base->pointer_depth != 1 : base->pointer_depth != 0)
    return std::nullopt;
  return base->record;
}

} // namespace swrr

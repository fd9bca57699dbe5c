#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "swrr/source.hpp"

namespace swrr {

enum class BaseType { Void, Int, Long, Char, Struct };

/// A MiniC type. For function-pointer record fields, `base`/`record`/
/// `pointer_depth` describe the pointee's return type.
struct Type {
  BaseType base = BaseType::Int;
  std::string record;
  int pointer_depth = 0;
  bool function_pointer = false;

  bool is_pointer() const { return pointer_depth > 0 || function_pointer; }
  /// Name of the record this type points at (or is), empty otherwise.
  const std::string &record_name() const { return record; }
  friend bool operator==(const Type &, const Type &) = default;
};

std::string to_string(const Type &t);

/// How a function returns a value; the shape an error code must have.
enum class ReturnCategory { Void, IntLike, Pointer };

inline const char *to_string(ReturnCategory c) {
  switch (c) {
  case ReturnCategory::Void: return "void";
  case ReturnCategory::IntLike: return "int";
  case ReturnCategory::Pointer: return "pointer";
  }
  return "?";
}

using ExprId = std::uint32_t;
using StmtId = std::uint32_t;
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

enum class ExprKind { IntLit, NullLit, StrLit, Ident, Call, FieldAccess, Unary, Binary, AddrOf, InitList };
enum class UnaryOp { Not, Neg, Deref };
enum class BinaryOp { Eq, Ne, Lt, Gt, Le, Ge, And, Or, Add, Sub, Mul, Div };

const char *to_string(ExprKind k);
const char *to_string(UnaryOp op);
const char *to_string(BinaryOp op);

/// Expression node. Children are indices into the owning arena.
///  - Unary: operand in `lhs`.
///  - Binary: `lhs`, `rhs`.
///  - Call: callee in `lhs`, arguments in `args`.
///  - FieldAccess: base in `lhs`, field name in `text`, `arrow` for `->`.
///  - Ident / AddrOf: name in `text`. StrLit: raw token bytes in `text`.
///  - InitList: items in `args`, `designators[i]` is the `.field` name or empty.
struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceSpan span;
  std::int64_t value = 0;
  std::string text;
  UnaryOp unary = UnaryOp::Not;
  BinaryOp binary = BinaryOp::Eq;
  ExprId lhs = kNone;
  ExprId rhs = kNone;
  std::vector<ExprId> args;
  std::vector<std::string> designators;
  bool arrow = false;
  friend bool operator==(const Expr &, const Expr &) = default;
};

enum class StmtKind { If, While, Return, ExprStmt, Decl, Assign, Block };
const char *to_string(StmtKind k);

/// Statement node.
///  - If: `expr` is the condition, `then_branch`, optional `else_branch`.
///  - While: `expr` is the condition, body in `then_branch`.
///  - Return: optional `expr`.
///  - ExprStmt: `expr`.
///  - Decl: `decl_name`, `decl_type`, optional initializer in `expr`.
///  - Assign: `lhs` = `expr`.
///  - Block: `children`.
struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourceSpan span;
  ExprId expr = kNone;
  ExprId lhs = kNone;
  StmtId then_branch = kNone;
  StmtId else_branch = kNone;
  std::vector<StmtId> children;
  std::string decl_name;
  Type decl_type;
  StmtId parent = kNone;
  friend bool operator==(const Stmt &, const Stmt &) = default;
};

struct Param {
  std::string name;
  Type type;
  friend bool operator==(const Param &, const Param &) = default;
};

struct AstFunction {
  std::string name;
  Type return_type;
  ReturnCategory category = ReturnCategory::IntLike;
  std::vector<Param> params;
  StmtId body = kNone;
  std::vector<Stmt> stmts;
  std::vector<Expr> exprs;
  SourceSpan span;
  SourceSpan body_open_span;
  SourceSpan name_span;

  const Stmt &stmt(StmtId id) const { return stmts[id]; }
  const Expr &expr(ExprId id) const { return exprs[id]; }
  friend bool operator==(const AstFunction &, const AstFunction &) = default;
};

struct Field {
  std::string name;
  Type type;
  friend bool operator==(const Field &, const Field &) = default;
};

struct RecordDecl {
  std::string name;
  std::vector<Field> fields;
  SourceSpan span;

  const Field *find(const std::string &field) const {
    for (const auto &f : fields)
      if (f.name == field)
        return &f;
    return nullptr;
  }
  friend bool operator==(const RecordDecl &, const RecordDecl &) = default;
};

/// `extern` prototype (or a bodiless forward declaration).
struct ExternDecl {
  std::string name;
  Type return_type;
  bool variadic = false;
  SourceSpan span;
  friend bool operator==(const ExternDecl &, const ExternDecl &) = default;
};

/// File-scope variable; the initializer lives in its own arena.
struct GlobalDecl {
  std::string name;
  Type type;
  ExprId init = kNone;
  std::vector<Expr> exprs;
  SourceSpan span;
  friend bool operator==(const GlobalDecl &, const GlobalDecl &) = default;
};

struct Diagnostic {
  SourceSpan span;
  std::string message;
  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

struct ParsedFile {
  SourceFile file;
  std::vector<AstFunction> functions;
  std::vector<RecordDecl> records;
  std::vector<ExternDecl> externs;
  std::vector<GlobalDecl> globals;
  /// Spans of every top-level item in source order.
  std::vector<SourceSpan> items;
  std::vector<Diagnostic> diagnostics;
};

inline bool operator==(const ParsedFile &a, const ParsedFile &b) {
  return a.file.name == b.file.name && a.file.text == b.file.text && a.functions == b.functions &&
         a.records == b.records && a.externs == b.externs && a.globals == b.globals &&
         a.items == b.items && a.diagnostics == b.diagnostics;
}

// ---------------------------------------------------------------------------

inline std::string to_string(const Type &t) {
  std::string out;
  switch (t.base) {
  case BaseType::Void: out = "void"; break;
  case BaseType::Int: out = "int"; break;
  case BaseType::Long: out = "long"; break;
  case BaseType::Char: out = "char"; break;
  case BaseType::Struct: out = "struct " + t.record; break;
  }
  out.append(static_cast<std::size_t>(t.pointer_depth), '*');
  if (t.function_pointer)
    out += "(*)()";
  return out;
}

inline const char *to_string(ExprKind k) {
  switch (k) {
  case ExprKind::IntLit: return "IntLit";
  case ExprKind::NullLit: return "NullLit";
  case ExprKind::StrLit: return "StrLit";
  case ExprKind::Ident: return "Ident";
  case ExprKind::Call: return "Call";
  case ExprKind::FieldAccess: return "FieldAccess";
  case ExprKind::Unary: return "Unary";
  case ExprKind::Binary: return "Binary";
  case ExprKind::AddrOf: return "AddrOf";
  case ExprKind::InitList: return "InitList";
  }
  return "?";
}

inline const char *to_string(UnaryOp op) {
  switch (op) {
  case UnaryOp::Not: return "!";
  case UnaryOp::Neg: return "-";
  case UnaryOp::Deref: return "*";
  }
  return "?";
}

inline const char *to_string(BinaryOp op) {
  switch (op) {
  case BinaryOp::Eq: return "==";
  case BinaryOp::Ne: return "!=";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::And: return "&&";
  case BinaryOp::Or: return "||";
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  }
  return "?";
}

inline const char *to_string(StmtKind k) {
  switch (k) {
  case StmtKind::If: return "If";
  case StmtKind::While: return "While";
  case StmtKind::Return: return "Return";
  case StmtKind::ExprStmt: return "ExprStmt";
  case StmtKind::Decl: return "Decl";
  case StmtKind::Assign: return "Assign";
  case StmtKind::Block: return "Block";
  }
  return "?";
}

/// Visits every expression reachable from `root` in pre-order (source order).
template <typename Fn>
void for_each_expr(const std::vector<Expr> &arena, ExprId root, Fn &&fn) {
  if (root == kNone)
    return;
  const Expr &e = arena[root];
  fn(root, e);
  for_each_expr(arena, e.lhs, fn);
  for (ExprId a : e.args)
    for_each_expr(arena, a, fn);
  for_each_expr(arena, e.rhs, fn);
}

/// Expressions owned directly by a statement (not by nested statements).
template <typename Fn>
void for_each_own_expr(const AstFunction &f, StmtId s, Fn &&fn) {
  const Stmt &st = f.stmt(s);
  if (st.kind == StmtKind::Assign)
    for_each_expr(f.exprs, st.lhs, fn);
  for_each_expr(f.exprs, st.expr, fn);
}

/// Visits statements of `f` in source (pre-)order.
template <typename Fn>
void for_each_stmt(const AstFunction &f, StmtId root, Fn &&fn) {
  if (root == kNone)
    return;
  const Stmt &s = f.stmt(root);
  fn(root, s);
  switch (s.kind) {
  case StmtKind::Block:
    for (StmtId c : s.children)
      for_each_stmt(f, c, fn);
    break;
  case StmtKind::If:
    for_each_stmt(f, s.then_branch, fn);
    for_each_stmt(f, s.else_branch, fn);
    break;
  case StmtKind::While:
    for_each_stmt(f, s.then_branch, fn);
    break;
  default:
    break;
  }
}

template <typename Fn> void for_each_stmt(const AstFunction &f, Fn &&fn) {
  for_each_stmt(f, f.body, std::forward<Fn>(fn));
}

} // namespace swrr

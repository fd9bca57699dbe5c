#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "swrr/error_spec.hpp"
#include "swrr/guards.hpp"
#include "swrr/program.hpp"

namespace swrr {

/// Comparison of a subject value against a constant. Truthy/Falsy are the
/// bare `v` and `!v` forms and carry no constant.
enum class CmpOp { Eq, Ne, Lt, Gt, Le, Ge, Truthy, Falsy };

inline const char *to_string(CmpOp op) {
  switch (op) {
  case CmpOp::Eq: return "==";
  case CmpOp::Ne: return "!=";
  case CmpOp::Lt: return "<";
  case CmpOp::Gt: return ">";
  case CmpOp::Le: return "<=";
  case CmpOp::Ge: return ">=";
  case CmpOp::Truthy: return "truthy";
  case CmpOp::Falsy: return "falsy";
  }
  return "?";
}

struct Constant {
  enum class Kind { Int, Null, Symbol } kind = Kind::Int;
  std::int64_t value = 0;
  std::string token;
  friend bool operator==(const Constant &, const Constant &) = default;
};

/// `subject op constant`, normalised so the subject is on the left.
struct ValuePredicate {
  CmpOp op = CmpOp::Truthy;
  Constant constant;
  ExprId subject = kNone;
};

inline CmpOp negate(CmpOp op) {
  switch (op) {
  case CmpOp::Eq: return CmpOp::Ne;
  case CmpOp::Ne: return CmpOp::Eq;
  case CmpOp::Lt: return CmpOp::Ge;
  case CmpOp::Gt: return CmpOp::Le;
  case CmpOp::Le: return CmpOp::Gt;
  case CmpOp::Ge: return CmpOp::Lt;
  case CmpOp::Truthy: return CmpOp::Falsy;
  case CmpOp::Falsy: return CmpOp::Truthy;
  }
  return op;
}

/// `C op v` rewritten as `v op' C`.
inline CmpOp mirror(CmpOp op) {
  switch (op) {
  case CmpOp::Lt: return CmpOp::Gt;
  case CmpOp::Gt: return CmpOp::Lt;
  case CmpOp::Le: return CmpOp::Ge;
  case CmpOp::Ge: return CmpOp::Le;
  default: return op;
  }
}

/// Integer or NULL literal (optionally negated) as a constant.
inline std::optional<Constant> literal_constant(const std::vector<Expr> &arena, ExprId id) {
  const Expr &e = arena[id];
  if (e.kind == ExprKind::IntLit)
    return Constant{Constant::Kind::Int, e.value, {}};
  if (e.kind == ExprKind::NullLit)
    return Constant{Constant::Kind::Null, 0, {}};
  if (e.kind == ExprKind::Unary && e.unary == UnaryOp::Neg && arena[e.lhs].kind == ExprKind::IntLit &&
      arena[e.lhs].value != std::numeric_limits<std::int64_t>::min())
    return Constant{Constant::Kind::Int, -arena[e.lhs].value, {}};
  return std::nullopt;
}

/// Constant operand: a literal, or an identifier that names neither a
/// variable nor a function (an uninterpreted symbolic constant).
inline std::optional<Constant> constant_operand(const ProgramModel &pm, std::size_t fn, StmtId at, ExprId id) {
  const AstFunction &f = pm.function(fn);
  if (auto lit = literal_constant(f.exprs, id))
    return lit;
  const Expr &e = f.expr(id);
  if (e.kind == ExprKind::Ident && !is_variable(pm, fn, at, e.text) && !pm.function_index.count(e.text) &&
      !pm.externals.count(e.text))
    return Constant{Constant::Kind::Symbol, 0, e.text};
  return std::nullopt;
}

/// Matches `cond` against the supported predicate forms: `v op C`, `C op v`,
/// `!v`, and `v`, where `v` is a call or a variable.
inline std::optional<ValuePredicate> match_predicate(const ProgramModel &pm, std::size_t fn, StmtId at,
                                                     ExprId cond) {
  const AstFunction &f = pm.function(fn);
  auto subject_ok = [&](ExprId id) {
    const Expr &e = f.expr(id);
    return e.kind == ExprKind::Call || (e.kind == ExprKind::Ident && is_variable(pm, fn, at, e.text));
  };
  const Expr &e = f.expr(cond);
  if (e.kind == ExprKind::Unary && e.unary == UnaryOp::Not && subject_ok(e.lhs))
    return ValuePredicate{CmpOp::Falsy, {}, e.lhs};
  if (subject_ok(cond))
    return ValuePredicate{CmpOp::Truthy, {}, cond};
  if (e.kind != ExprKind::Binary)
    return std::nullopt;
  CmpOp op;
  switch (e.binary) {
  case BinaryOp::Eq: op = CmpOp::Eq; break;
  case BinaryOp::Ne: op = CmpOp::Ne; break;
  case BinaryOp::Lt: op = CmpOp::Lt; break;
  case BinaryOp::Gt: op = CmpOp::Gt; break;
  case BinaryOp::Le: op = CmpOp::Le; break;
  case BinaryOp::Ge: op = CmpOp::Ge; break;
  default: return std::nullopt;
  }
  if (subject_ok(e.lhs))
    if (auto c = constant_operand(pm, fn, at, e.rhs))
      return ValuePredicate{op, *c, e.lhs};
  if (subject_ok(e.rhs))
    if (auto c = constant_operand(pm, fn, at, e.lhs))
      return ValuePredicate{mirror(op), *c, e.rhs};
  return std::nullopt;
}

enum class Truth { False, True, Unknown };

/// Decides whether a function returning `code` makes `subject op C` hold.
/// Symbolic constants are only comparable with the identical token.
inline Truth evaluate(const ErrorCode &code, CmpOp op, const Constant &c) {
  auto from_bool = [](bool b) { return b ? Truth::True : Truth::False; };
  if (code.kind == ErrorCodeKind::VoidReturn)
    return Truth::Unknown;
  if (op == CmpOp::Truthy || op == CmpOp::Falsy) {
    if (code.kind == ErrorCodeKind::SymbolicConst)
      return Truth::Unknown;
    const bool nonzero = code.kind == ErrorCodeKind::IntConst && code.value != 0;
    return from_bool(op == CmpOp::Truthy ? nonzero : !nonzero);
  }
  if (code.kind == ErrorCodeKind::SymbolicConst || c.kind == Constant::Kind::Symbol) {
    if (code.kind == ErrorCodeKind::SymbolicConst && c.kind == Constant::Kind::Symbol && code.token == c.token &&
        (op == CmpOp::Eq || op == CmpOp::Ne))
      return from_bool(op == CmpOp::Eq);
    return Truth::Unknown;
  }
  // NULL compares as 0; ordering a null pointer is not meaningful
  if (code.kind == ErrorCodeKind::Null && op != CmpOp::Eq && op != CmpOp::Ne)
    return Truth::Unknown;
  const std::int64_t v = code.kind == ErrorCodeKind::Null ? 0 : code.value;
  const std::int64_t k = c.kind == Constant::Kind::Null ? 0 : c.value;
  switch (op) {
  case CmpOp::Eq: return from_bool(v == k);
  case CmpOp::Ne: return from_bool(v != k);
  case CmpOp::Lt: return from_bool(v < k);
  case CmpOp::Gt: return from_bool(v > k);
  case CmpOp::Le: return from_bool(v <= k);
  case CmpOp::Ge: return from_bool(v >= k);
  default: return Truth::Unknown;
  }
}

inline Truth evaluate(const ErrorCode &code, const ValuePredicate &p, Branch required) {
  return evaluate(code, required == Branch::Then ? p.op : negate(p.op), p.constant);
}

/// Picks a constant making `subject op C` hold on the `required` branch, for a
/// function of return category `category`.
inline std::optional<ErrorCode> solve(const ValuePredicate &p, Branch required, ReturnCategory category) {
  const CmpOp op = required == Branch::Then ? p.op : negate(p.op);
  if (category == ReturnCategory::Void)
    return std::nullopt;
  if (category == ReturnCategory::Pointer) {
    const ErrorCode null = ErrorCode::null();
    if (evaluate(null, op, p.constant) == Truth::True)
      return null;
    return std::nullopt;
  }
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  if (op == CmpOp::Truthy)
    return ErrorCode::integer(1);
  if (op == CmpOp::Falsy)
    return ErrorCode::integer(0);
  if (p.constant.kind == Constant::Kind::Symbol) {
    if (op == CmpOp::Eq)
      return ErrorCode::symbol(p.constant.token);
    return std::nullopt;
  }
  const std::int64_t c = p.constant.kind == Constant::Kind::Null ? 0 : p.constant.value;
  switch (op) {
  case CmpOp::Eq: return ErrorCode::integer(c);
  case CmpOp::Ne: return c == kMax ? std::nullopt : std::optional(ErrorCode::integer(c + 1));
  case CmpOp::Lt: return c == kMin ? std::nullopt : std::optional(ErrorCode::integer(c - 1));
  case CmpOp::Gt: return c == kMax ? std::nullopt : std::optional(ErrorCode::integer(c + 1));
  case CmpOp::Le:
  case CmpOp::Ge: return ErrorCode::integer(c);
  default: return std::nullopt;
  }
}

/// The direct call whose result a predicate subject carries: the subject
/// itself, or for a variable, the call in its latest definition that
/// precedes statement `at` in source order.
inline std::optional<std::string> subject_callee(const ProgramModel &pm, std::size_t fn, StmtId at,
                                                 ExprId subject) {
  const AstFunction &f = pm.function(fn);
  auto direct_name = [&](ExprId call) -> std::optional<std::string> {
    const Expr &c = f.expr(call);
    if (c.kind != ExprKind::Call)
      return std::nullopt;
    const Expr &callee = f.expr(c.lhs);
    if (callee.kind != ExprKind::Ident || is_variable(pm, fn, at, callee.text))
      return std::nullopt;
    return callee.text;
  };
  const Expr &s = f.expr(subject);
  if (s.kind == ExprKind::Call)
    return direct_name(subject);
  if (s.kind != ExprKind::Ident)
    return std::nullopt;
  const auto limit = f.stmt(at).span.byte_start;
  std::optional<std::string> found;
  std::uint32_t best = 0;
  bool any = false;
  for_each_stmt(f, [&](StmtId, const Stmt &st) {
    if (st.span.byte_start >= limit)
      return;
    ExprId value = kNone;
    if (st.kind == StmtKind::Decl && st.decl_name == s.text)
      value = st.expr;
    else if (st.kind == StmtKind::Assign && f.expr(st.lhs).kind == ExprKind::Ident && f.expr(st.lhs).text == s.text)
      value = st.expr;
    else
      return;
    if (!any || st.span.byte_start >= best) {
      any = true;
      best = st.span.byte_start;
      found = value == kNone ? std::nullopt : direct_name(value);
    }
  });
  return found;
}

} // namespace swrr

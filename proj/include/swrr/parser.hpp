#pragma once

#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "swrr/ast.hpp"
#include "swrr/lexer.hpp"

namespace swrr {

namespace detail {

class Parser {
public:
  Parser(const SourceFile &file, std::vector<Token> tokens) : file_(file), toks_(std::move(tokens)) {}

  ParsedFile run() {
    ParsedFile out;
    out.file = file_;
    std::set<std::string> seen;
    while (!at(Tok::Eof)) {
      const SourceSpan item_start = cur().span;
      if (at(Tok::KwStruct) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::LBrace) {
        out.records.push_back(record_decl());
        out.items.push_back(out.records.back().span);
        continue;
      }
      if (at(Tok::KwExtern)) {
        advance();
        Type t = type();
        const Token &name = expect(Tok::Ident);
        ExternDecl d;
        d.name = std::string(name.text);
        d.return_type = t;
        expect(Tok::LParen);
        std::vector<Param> ignored;
        d.variadic = params(ignored, /*names_required=*/false);
        expect(Tok::RParen);
        d.span = join(item_start, expect(Tok::Semi).span);
        out.externs.push_back(std::move(d));
        out.items.push_back(out.externs.back().span);
        continue;
      }
      if (!at_type_start())
        syntax_error("expected a declaration", {"'struct'", "'extern'", "type name"});
      Type t = type();
      const Token &name = expect(Tok::Ident);
      if (at(Tok::LParen)) {
        advance();
        std::vector<Param> ps;
        const bool variadic = params(ps, /*names_required=*/false);
        expect(Tok::RParen);
        if (at(Tok::Semi)) {
          ExternDecl d;
          d.name = std::string(name.text);
          d.return_type = t;
          d.variadic = variadic;
          d.span = join(item_start, advance().span);
          out.externs.push_back(std::move(d));
          out.items.push_back(out.externs.back().span);
          continue;
        }
        if (variadic)
          syntax_error("variadic function definitions are not supported", {});
        for (const auto &p : ps)
          if (p.name.empty())
            syntax_error("parameter name required in a function definition", {"identifier"});
        AstFunction f = function_body(t, name, std::move(ps), item_start);
        if (!seen.insert(f.name).second)
          throw Error(ErrorKind::DuplicateFunction, "function '" + f.name + "' defined twice",
                      file_.name, f.name_span.line, file_.column_of(f.name_span.byte_start));
        out.items.push_back(f.span);
        out.functions.push_back(std::move(f));
        continue;
      }
      // file-scope variable
      GlobalDecl g;
      g.name = std::string(name.text);
      g.type = t;
      exprs_ = &g.exprs;
      if (accept(Tok::Assign))
        g.init = initializer();
      exprs_ = nullptr;
      g.span = join(item_start, expect(Tok::Semi).span);
      out.items.push_back(g.span);
      out.globals.push_back(std::move(g));
    }
    for (const auto &f : out.functions)
      check_function(f, out.diagnostics);
    return out;
  }

private:
  // --- token helpers -------------------------------------------------------
  const Token &cur() const { return toks_[pos_]; }
  const Token &peek(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok t) const { return cur().kind == t; }
  const Token &advance() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  bool accept(Tok t) {
    if (!at(t))
      return false;
    advance();
    return true;
  }
  const Token &expect(Tok t) {
    if (!at(t))
      syntax_error(std::string("expected ") + to_string(t) + ", found " + describe(cur()),
                   {to_string(t)});
    return advance();
  }
  std::string describe(const Token &t) const {
    if (t.kind == Tok::Eof)
      return "end of file";
    return "'" + std::string(t.text) + "'";
  }
  [[noreturn]] void syntax_error(const std::string &msg, std::vector<std::string> expected) const {
    const Token &t = cur();
    throw Error(ErrorKind::Syntax, msg, file_.name, t.span.line, file_.column_of(t.span.byte_start),
                std::move(expected));
  }
  [[noreturn]] void shape_error(const SourceSpan &at, const std::string &msg) const {
    throw Error(ErrorKind::TypeShape, msg, file_.name, at.line, file_.column_of(at.byte_start));
  }

  // --- types ---------------------------------------------------------------
  bool at_type_start() const {
    switch (cur().kind) {
    case Tok::KwVoid:
    case Tok::KwInt:
    case Tok::KwLong:
    case Tok::KwChar:
    case Tok::KwStruct:
    case Tok::KwConst:
      return true;
    default:
      return false;
    }
  }

  Type type() {
    Type t;
    accept(Tok::KwConst);
    switch (cur().kind) {
    case Tok::KwVoid: t.base = BaseType::Void; advance(); break;
    case Tok::KwInt: t.base = BaseType::Int; advance(); break;
    case Tok::KwLong: t.base = BaseType::Long; advance(); accept(Tok::KwInt); break;
    case Tok::KwChar: t.base = BaseType::Char; advance(); break;
    case Tok::KwStruct:
      advance();
      t.base = BaseType::Struct;
      t.record = std::string(expect(Tok::Ident).text);
      break;
    default:
      syntax_error("expected a type, found " + describe(cur()),
                   {"'void'", "'int'", "'long'", "'char'", "'struct'"});
    }
    accept(Tok::KwConst);
    while (accept(Tok::Star)) {
      ++t.pointer_depth;
      accept(Tok::KwConst);
    }
    return t;
  }

  /// Parses a parameter list up to (not including) ')'. Returns true when the
  /// list ends in `...`.
  bool params(std::vector<Param> &out, bool names_required) {
    if (at(Tok::RParen))
      return false;
    if (at(Tok::KwVoid) && peek(1).kind == Tok::RParen) {
      advance();
      return false;
    }
    while (true) {
      if (accept(Tok::Ellipsis))
        return true;
      Param p;
      p.type = type();
      if (at(Tok::Ident))
        p.name = std::string(advance().text);
      else if (names_required)
        expect(Tok::Ident);
      out.push_back(std::move(p));
      if (!accept(Tok::Comma))
        return false;
    }
  }

  RecordDecl record_decl() {
    RecordDecl r;
    const SourceSpan start = expect(Tok::KwStruct).span;
    r.name = std::string(expect(Tok::Ident).text);
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      Field f;
      f.type = type();
      if (accept(Tok::LParen)) {
        // function-pointer field: ret (*name)(params);
        expect(Tok::Star);
        f.name = std::string(expect(Tok::Ident).text);
        expect(Tok::RParen);
        expect(Tok::LParen);
        std::vector<Param> ignored;
        params(ignored, false);
        expect(Tok::RParen);
        f.type.function_pointer = true;
      } else {
        f.name = std::string(expect(Tok::Ident).text);
      }
      expect(Tok::Semi);
      if (r.find(f.name))
        shape_error(start, "duplicate field '" + f.name + "' in struct " + r.name);
      r.fields.push_back(std::move(f));
    }
    expect(Tok::RBrace);
    r.span = join(start, expect(Tok::Semi).span);
    return r;
  }

  // --- functions -----------------------------------------------------------
  AstFunction function_body(const Type &ret, const Token &name, std::vector<Param> ps,
                            const SourceSpan &start) {
    AstFunction f;
    f.name = std::string(name.text);
    f.name_span = name.span;
    f.return_type = ret;
    f.params = std::move(ps);
    if (ret.is_pointer())
      f.category = ReturnCategory::Pointer;
    else if (ret.base == BaseType::Void)
      f.category = ReturnCategory::Void;
    else if (ret.base == BaseType::Struct)
      shape_error(name.span, "function '" + f.name + "' returns a struct by value");
    else
      f.category = ReturnCategory::IntLike;
    fn_ = &f;
    exprs_ = &f.exprs;
    f.body_open_span = cur().span;
    f.body = block();
    f.span = join(start, f.stmts[f.body].span);
    fn_ = nullptr;
    exprs_ = nullptr;
    return f;
  }

  StmtId add_stmt(Stmt s) {
    fn_->stmts.push_back(std::move(s));
    return static_cast<StmtId>(fn_->stmts.size() - 1);
  }
  void adopt(StmtId parent, StmtId child) {
    if (child != kNone)
      fn_->stmts[child].parent = parent;
  }

  StmtId block() {
    const SourceSpan open = expect(Tok::LBrace).span;
    std::vector<StmtId> kids;
    while (!at(Tok::RBrace)) {
      if (at(Tok::Eof))
        syntax_error("unterminated block", {"'}'"});
      kids.push_back(statement());
    }
    const SourceSpan close = advance().span;
    Stmt s;
    s.kind = StmtKind::Block;
    s.span = join(open, close);
    s.children = kids;
    const StmtId id = add_stmt(std::move(s));
    for (StmtId k : kids)
      adopt(id, k);
    return id;
  }

  StmtId statement() {
    const SourceSpan start = cur().span;
    switch (cur().kind) {
    case Tok::LBrace:
      return block();
    case Tok::KwIf: {
      advance();
      expect(Tok::LParen);
      const ExprId cond = expr();
      expect(Tok::RParen);
      const StmtId then_s = statement();
      StmtId else_s = kNone;
      if (accept(Tok::KwElse))
        else_s = statement();
      Stmt s;
      s.kind = StmtKind::If;
      s.expr = cond;
      s.then_branch = then_s;
      s.else_branch = else_s;
      s.span = join(start, fn_->stmts[else_s != kNone ? else_s : then_s].span);
      const StmtId id = add_stmt(std::move(s));
      adopt(id, then_s);
      adopt(id, else_s);
      return id;
    }
    case Tok::KwWhile: {
      advance();
      expect(Tok::LParen);
      const ExprId cond = expr();
      expect(Tok::RParen);
      const StmtId body = statement();
      Stmt s;
      s.kind = StmtKind::While;
      s.expr = cond;
      s.then_branch = body;
      s.span = join(start, fn_->stmts[body].span);
      const StmtId id = add_stmt(std::move(s));
      adopt(id, body);
      return id;
    }
    case Tok::KwReturn: {
      advance();
      Stmt s;
      s.kind = StmtKind::Return;
      if (!at(Tok::Semi))
        s.expr = expr();
      s.span = join(start, expect(Tok::Semi).span);
      return add_stmt(std::move(s));
    }
    default:
      break;
    }
    if (at_type_start()) {
      Stmt s;
      s.kind = StmtKind::Decl;
      s.decl_type = type();
      s.decl_name = std::string(expect(Tok::Ident).text);
      if (accept(Tok::Assign))
        s.expr = initializer();
      s.span = join(start, expect(Tok::Semi).span);
      return add_stmt(std::move(s));
    }
    const ExprId e = expr();
    Stmt s;
    if (accept(Tok::Assign)) {
      const Expr &target = (*exprs_)[e];
      const bool lvalue = target.kind == ExprKind::Ident || target.kind == ExprKind::FieldAccess ||
                          (target.kind == ExprKind::Unary && target.unary == UnaryOp::Deref);
      if (!lvalue)
        throw Error(ErrorKind::Syntax, "left side of assignment is not assignable", file_.name,
                    target.span.line, file_.column_of(target.span.byte_start));
      s.kind = StmtKind::Assign;
      s.lhs = e;
      s.expr = expr();
    } else {
      s.kind = StmtKind::ExprStmt;
      s.expr = e;
    }
    s.span = join(start, expect(Tok::Semi).span);
    return add_stmt(std::move(s));
  }

  // --- expressions ---------------------------------------------------------
  ExprId add_expr(Expr e) {
    exprs_->push_back(std::move(e));
    return static_cast<ExprId>(exprs_->size() - 1);
  }
  const Expr &get(ExprId id) const { return (*exprs_)[id]; }

  ExprId initializer() {
    if (!at(Tok::LBrace))
      return expr();
    const SourceSpan open = advance().span;
    Expr list;
    list.kind = ExprKind::InitList;
    while (!at(Tok::RBrace)) {
      std::string designator;
      if (accept(Tok::Dot)) {
        designator = std::string(expect(Tok::Ident).text);
        expect(Tok::Assign);
      }
      list.args.push_back(initializer());
      list.designators.push_back(std::move(designator));
      if (!accept(Tok::Comma))
        break;
    }
    list.span = join(open, expect(Tok::RBrace).span);
    return add_expr(std::move(list));
  }

  ExprId expr() { return binary(0); }

  static int precedence(Tok t) {
    switch (t) {
    case Tok::OrOr: return 1;
    case Tok::AndAnd: return 2;
    case Tok::EqEq:
    case Tok::NotEq: return 3;
    case Tok::Less:
    case Tok::Greater:
    case Tok::LessEq:
    case Tok::GreaterEq: return 4;
    case Tok::Plus:
    case Tok::Minus: return 5;
    case Tok::Star:
    case Tok::Slash: return 6;
    default: return -1;
    }
  }
  static BinaryOp binop(Tok t) {
    switch (t) {
    case Tok::OrOr: return BinaryOp::Or;
    case Tok::AndAnd: return BinaryOp::And;
    case Tok::EqEq: return BinaryOp::Eq;
    case Tok::NotEq: return BinaryOp::Ne;
    case Tok::Less: return BinaryOp::Lt;
    case Tok::Greater: return BinaryOp::Gt;
    case Tok::LessEq: return BinaryOp::Le;
    case Tok::GreaterEq: return BinaryOp::Ge;
    case Tok::Plus: return BinaryOp::Add;
    case Tok::Minus: return BinaryOp::Sub;
    case Tok::Star: return BinaryOp::Mul;
    default: return BinaryOp::Div;
    }
  }

  // Precedence climbing; all binary operators are left-associative.
  ExprId binary(int min_prec) {
    ExprId lhs = unary();
    while (true) {
      const int prec = precedence(cur().kind);
      if (prec < 0 || prec < min_prec)
        break;
      const Tok op = advance().kind;
      const ExprId rhs = binary(prec + 1);
      Expr e;
      e.kind = ExprKind::Binary;
      e.binary = binop(op);
      e.lhs = lhs;
      e.rhs = rhs;
      e.span = join(get(lhs).span, get(rhs).span);
      lhs = add_expr(std::move(e));
    }
    return lhs;
  }

  ExprId unary() {
    const SourceSpan start = cur().span;
    if (at(Tok::Bang) || at(Tok::Minus) || at(Tok::Star)) {
      const Tok op = advance().kind;
      const ExprId operand = unary();
      Expr e;
      e.kind = ExprKind::Unary;
      e.unary = op == Tok::Bang ? UnaryOp::Not : op == Tok::Minus ? UnaryOp::Neg : UnaryOp::Deref;
      e.lhs = operand;
      e.span = join(start, get(operand).span);
      return add_expr(std::move(e));
    }
    if (at(Tok::Amp)) {
      advance();
      const Token &name = expect(Tok::Ident);
      Expr e;
      e.kind = ExprKind::AddrOf;
      e.text = std::string(name.text);
      e.span = join(start, name.span);
      return add_expr(std::move(e));
    }
    return postfix();
  }

  ExprId postfix() {
    ExprId e = primary();
    while (true) {
      if (at(Tok::LParen)) {
        const Expr &callee = get(e);
        if (callee.kind != ExprKind::Ident && callee.kind != ExprKind::FieldAccess)
          syntax_error("callee must be a function name or a function-pointer field", {});
        advance();
        Expr call;
        call.kind = ExprKind::Call;
        call.lhs = e;
        if (!at(Tok::RParen)) {
          do {
            call.args.push_back(expr());
          } while (accept(Tok::Comma));
        }
        call.span = join(get(e).span, expect(Tok::RParen).span);
        e = add_expr(std::move(call));
      } else if (at(Tok::Arrow) || at(Tok::Dot)) {
        const bool arrow = advance().kind == Tok::Arrow;
        const Token &field = expect(Tok::Ident);
        Expr fa;
        fa.kind = ExprKind::FieldAccess;
        fa.lhs = e;
        fa.text = std::string(field.text);
        fa.arrow = arrow;
        fa.span = join(get(e).span, field.span);
        e = add_expr(std::move(fa));
      } else {
        return e;
      }
    }
  }

  ExprId primary() {
    const Token &t = cur();
    Expr e;
    e.span = t.span;
    switch (t.kind) {
    case Tok::Int:
      e.kind = ExprKind::IntLit;
      e.value = int_value(t);
      advance();
      return add_expr(std::move(e));
    case Tok::String: {
      e.kind = ExprKind::StrLit;
      SourceSpan last = advance().span;
      while (at(Tok::String))
        last = advance().span;
      e.span = join(t.span, last);
      e.text = std::string(file_.slice(e.span));
      return add_expr(std::move(e));
    }
    case Tok::KwNull:
      e.kind = ExprKind::NullLit;
      advance();
      return add_expr(std::move(e));
    case Tok::Ident:
      e.kind = ExprKind::Ident;
      e.text = std::string(t.text);
      advance();
      return add_expr(std::move(e));
    case Tok::LParen: {
      const SourceSpan open = advance().span;
      const ExprId inner = expr();
      const SourceSpan close = expect(Tok::RParen).span;
      (*exprs_)[inner].span = join(open, close);
      return inner;
    }
    default:
      syntax_error("expected an expression, found " + describe(t),
                   {"integer literal", "string literal", "'NULL'", "identifier", "'('"});
    }
  }

  std::int64_t int_value(const Token &t) const {
    std::string_view digits = t.text;
    while (!digits.empty() && (digits.back() == 'L' || digits.back() == 'l'))
      digits.remove_suffix(1);
    int base = 10;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
      base = 16;
      digits.remove_prefix(2);
    } else if (digits.size() > 1 && digits[0] == '0') {
      base = 8;
      digits.remove_prefix(1);
    }
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      syntax_error("malformed integer literal '" + std::string(t.text) + "'", {"integer literal"});
    return v;
  }

  // --- validation ----------------------------------------------------------
  void check_function(const AstFunction &f, std::vector<Diagnostic> &diags) const {
    for_each_stmt(f, [&](StmtId, const Stmt &s) {
      if (s.kind == StmtKind::Return) {
        if (f.category == ReturnCategory::Void && s.expr != kNone)
          shape_error(s.span, "return with a value in void function '" + f.name + "'");
        if (f.category != ReturnCategory::Void && s.expr == kNone)
          shape_error(s.span, "bare return in non-void function '" + f.name + "'");
        if (s.expr != kNone && f.category != ReturnCategory::Pointer &&
            f.expr(s.expr).kind == ExprKind::NullLit)
          shape_error(s.span, "NULL returned from non-pointer function '" + f.name + "'");
      }
      if (s.kind == StmtKind::Block) {
        for (std::size_t i = 0; i + 1 < s.children.size(); ++i)
          if (f.stmt(s.children[i]).kind == StmtKind::Return) {
            diags.push_back({f.stmt(s.children[i + 1]).span,
                             "unreachable statement after return in '" + f.name + "'"});
            break;
          }
      }
    });
  }

  const SourceFile &file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  AstFunction *fn_ = nullptr;
  std::vector<Expr> *exprs_ = nullptr;
};

} // namespace detail

/// Parses one preprocessed MiniC file. Throws Error (Syntax, DuplicateFunction
/// or TypeShape) on failure.
inline ParsedFile parse_file(std::string source_text, std::string file_name, FileId id = 0) {
  SourceFile file{id, std::move(file_name), std::move(source_text)};
  auto tokens = lex(file);
  detail::Parser p(file, std::move(tokens));
  return p.run();
}

} // namespace swrr

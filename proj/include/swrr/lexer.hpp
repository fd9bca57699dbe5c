#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "swrr/source.hpp"

namespace swrr {

enum class Tok {
  Eof,
  Ident,
  Int,
  String,
  // keywords
  KwStruct,
  KwVoid,
  KwInt,
  KwLong,
  KwChar,
  KwConst,
  KwExtern,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwNull,
  // punctuation
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Comma,
  Assign,
  EqEq,
  NotEq,
  Less,
  Greater,
  LessEq,
  GreaterEq,
  AndAnd,
  OrOr,
  Plus,
  Minus,
  Star,
  Slash,
  Bang,
  Amp,
  Arrow,
  Dot,
  Ellipsis,
};

inline const char *to_string(Tok t) {
  switch (t) {
  case Tok::Eof: return "end of file";
  case Tok::Ident: return "identifier";
  case Tok::Int: return "integer literal";
  case Tok::String: return "string literal";
  case Tok::KwStruct: return "'struct'";
  case Tok::KwVoid: return "'void'";
  case Tok::KwInt: return "'int'";
  case Tok::KwLong: return "'long'";
  case Tok::KwChar: return "'char'";
  case Tok::KwConst: return "'const'";
  case Tok::KwExtern: return "'extern'";
  case Tok::KwIf: return "'if'";
  case Tok::KwElse: return "'else'";
  case Tok::KwWhile: return "'while'";
  case Tok::KwReturn: return "'return'";
  case Tok::KwNull: return "'NULL'";
  case Tok::LBrace: return "'{'";
  case Tok::RBrace: return "'}'";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::Semi: return "';'";
  case Tok::Comma: return "','";
  case Tok::Assign: return "'='";
  case Tok::EqEq: return "'=='";
  case Tok::NotEq: return "'!='";
  case Tok::Less: return "'<'";
  case Tok::Greater: return "'>'";
  case Tok::LessEq: return "'<='";
  case Tok::GreaterEq: return "'>='";
  case Tok::AndAnd: return "'&&'";
  case Tok::OrOr: return "'||'";
  case Tok::Plus: return "'+'";
  case Tok::Minus: return "'-'";
  case Tok::Star: return "'*'";
  case Tok::Slash: return "'/'";
  case Tok::Bang: return "'!'";
  case Tok::Amp: return "'&'";
  case Tok::Arrow: return "'->'";
  case Tok::Dot: return "'.'";
  case Tok::Ellipsis: return "'...'";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::Eof;
  SourceSpan span;
  std::string_view text;
};

/// Splits a MiniC file into tokens. Whitespace and comments are skipped; the
/// final token is always Eof (with an empty span at the end of the file).
inline std::vector<Token> lex(const SourceFile &file) {
  const std::string_view src = file.text;
  std::vector<Token> out;
  std::uint32_t pos = 0;
  std::uint32_t line = 1;
  const auto n = static_cast<std::uint32_t>(src.size());

  auto fail = [&](const std::string &msg, std::uint32_t at) -> void {
    throw Error(ErrorKind::Syntax, msg, file.name, line, file.column_of(at));
  };

  while (pos < n) {
    const char c = src[pos];
    if (c == '\n') {
      ++line;
      ++pos;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++pos;
      continue;
    }
    if (c == '/' && pos + 1 < n && src[pos + 1] == '/') {
      while (pos < n && src[pos] != '\n')
        ++pos;
      continue;
    }
    if (c == '/' && pos + 1 < n && src[pos + 1] == '*') {
      const std::uint32_t start = pos;
      pos += 2;
      while (pos + 1 < n && !(src[pos] == '*' && src[pos + 1] == '/')) {
        if (src[pos] == '\n')
          ++line;
        ++pos;
      }
      if (pos + 1 >= n)
        fail("unterminated block comment", start);
      pos += 2;
      continue;
    }
    if (c == '#')
      fail("preprocessor directives are not supported", pos);

    Token tok;
    tok.span = SourceSpan{file.id, pos, pos, line};
    const std::uint32_t start = pos;

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < n && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      const std::string_view word = src.substr(start, pos - start);
      tok.kind = Tok::Ident;
      if (word == "struct") tok.kind = Tok::KwStruct;
      else if (word == "void") tok.kind = Tok::KwVoid;
      else if (word == "int") tok.kind = Tok::KwInt;
      else if (word == "long") tok.kind = Tok::KwLong;
      else if (word == "char") tok.kind = Tok::KwChar;
      else if (word == "const") tok.kind = Tok::KwConst;
      else if (word == "extern") tok.kind = Tok::KwExtern;
      else if (word == "if") tok.kind = Tok::KwIf;
      else if (word == "else") tok.kind = Tok::KwElse;
      else if (word == "while") tok.kind = Tok::KwWhile;
      else if (word == "return") tok.kind = Tok::KwReturn;
      else if (word == "NULL") tok.kind = Tok::KwNull;
      else if (word == "goto" || word == "switch" || word == "break" || word == "continue" ||
               word == "for" || word == "do" || word == "typedef" || word == "case")
        fail("'" + std::string(word) + "' is not part of MiniC", start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < n && std::isalnum(static_cast<unsigned char>(src[pos])))
        ++pos;
      tok.kind = Tok::Int;
    } else if (c == '"') {
      ++pos;
      while (pos < n && src[pos] != '"') {
        if (src[pos] == '\n')
          fail("newline in string literal", start);
        if (src[pos] == '\\')
          ++pos;
        ++pos;
      }
      if (pos >= n)
        fail("unterminated string literal", start);
      ++pos;
      tok.kind = Tok::String;
    } else {
      auto two = [&](char a, char b) { return c == a && pos + 1 < n && src[pos + 1] == b; };
      std::uint32_t len = 1;
      if (c == '.' && pos + 2 < n && src[pos + 1] == '.' && src[pos + 2] == '.') {
        tok.kind = Tok::Ellipsis;
        len = 3;
      } else if (two('=', '=')) { tok.kind = Tok::EqEq; len = 2; }
      else if (two('!', '=')) { tok.kind = Tok::NotEq; len = 2; }
      else if (two('<', '=')) { tok.kind = Tok::LessEq; len = 2; }
      else if (two('>', '=')) { tok.kind = Tok::GreaterEq; len = 2; }
      else if (two('&', '&')) { tok.kind = Tok::AndAnd; len = 2; }
      else if (two('|', '|')) { tok.kind = Tok::OrOr; len = 2; }
      else if (two('-', '>')) { tok.kind = Tok::Arrow; len = 2; }
      else {
        switch (c) {
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case ';': tok.kind = Tok::Semi; break;
        case ',': tok.kind = Tok::Comma; break;
        case '=': tok.kind = Tok::Assign; break;
        case '<': tok.kind = Tok::Less; break;
        case '>': tok.kind = Tok::Greater; break;
        case '+': tok.kind = Tok::Plus; break;
        case '-': tok.kind = Tok::Minus; break;
        case '*': tok.kind = Tok::Star; break;
        case '/': tok.kind = Tok::Slash; break;
        case '!': tok.kind = Tok::Bang; break;
        case '&': tok.kind = Tok::Amp; break;
        case '.': tok.kind = Tok::Dot; break;
        default:
          fail(std::string("unexpected character '") + c + "'", pos);
        }
      }
      pos += len;
    }
    tok.span.byte_end = pos;
    tok.text = src.substr(start, pos - start);
    out.push_back(tok);
  }
  out.push_back(Token{Tok::Eof, SourceSpan{file.id, n, n, line}, {}});
  return out;
}

} // namespace swrr

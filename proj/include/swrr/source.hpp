#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swrr {

using FileId = std::uint32_t;

/// Half-open byte range [byte_start, byte_end) in one source file. `line` is
/// the 1-based line of byte_start.
struct SourceSpan {
  FileId file_id = 0;
  std::uint32_t byte_start = 0;
  std::uint32_t byte_end = 0;
  std::uint32_t line = 0;

  std::uint32_t size() const { return byte_end - byte_start; }
  bool contains(const SourceSpan &o) const {
    return file_id == o.file_id && byte_start <= o.byte_start && o.byte_end <= byte_end;
  }
  bool overlaps(const SourceSpan &o) const {
    return file_id == o.file_id && byte_start < o.byte_end && o.byte_start < byte_end;
  }
  friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

/// Spans from `a` to `b` inclusive.
inline SourceSpan join(const SourceSpan &a, const SourceSpan &b) {
  return SourceSpan{a.file_id, a.byte_start, b.byte_end, a.line};
}

struct SourceFile {
  FileId id = 0;
  std::string name;
  std::string text;

  std::string_view slice(const SourceSpan &s) const {
    return std::string_view(text).substr(s.byte_start, s.byte_end - s.byte_start);
  }

  /// 1-based column of a byte offset.
  std::uint32_t column_of(std::uint32_t offset) const {
    std::uint32_t col = 1;
    while (offset > 0 && text[offset - 1] != '\n') {
      --offset;
      ++col;
    }
    return col;
  }
};

enum class ErrorKind {
  Syntax,
  DuplicateFunction,
  TypeShape,
  PlanMismatch,
  TargetUnprotected,
  AlreadyInstrumented,
  Format,
  UnknownFunction,
  Io,
};

inline const char *to_string(ErrorKind k) {
  switch (k) {
  case ErrorKind::Syntax: return "SyntaxError";
  case ErrorKind::DuplicateFunction: return "DuplicateFunction";
  case ErrorKind::TypeShape: return "TypeShapeError";
  case ErrorKind::PlanMismatch: return "PlanMismatch";
  case ErrorKind::TargetUnprotected: return "TargetUnprotected";
  case ErrorKind::AlreadyInstrumented: return "AlreadyInstrumented";
  case ErrorKind::Format: return "FormatError";
  case ErrorKind::UnknownFunction: return "UnknownFunction";
  case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

/// Every failure the library reports. `file`/`line`/`column` are filled when
/// the failure has a source location (0 otherwise).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, std::string file = {}, std::uint32_t line = 0,
        std::uint32_t column = 0, std::vector<std::string> expected = {})
      : std::runtime_error(format(kind, message, file, line, column)), kind_(kind),
        message_(std::move(message)), file_(std::move(file)), line_(line), column_(column),
        expected_(std::move(expected)) {}

  ErrorKind kind() const { return kind_; }
  const std::string &message() const { return message_; }
  const std::string &file() const { return file_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  /// For syntax errors: the token kinds that would have been accepted.
  const std::vector<std::string> &expected() const { return expected_; }

private:
  static std::string format(ErrorKind kind, const std::string &msg, const std::string &file,
                            std::uint32_t line, std::uint32_t column) {
    std::string out;
    if (!file.empty()) {
      out += file;
      out += ':';
    }
    if (line != 0) {
      out += std::to_string(line);
      out += ':';
      if (column != 0) {
        out += std::to_string(column);
        out += ':';
      }
    }
    if (!out.empty())
      out += ' ';
    out += to_string(kind);
    out += ": ";
    out += msg;
    return out;
  }

  ErrorKind kind_;
  std::string message_;
  std::string file_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::vector<std::string> expected_;
};

} // namespace swrr

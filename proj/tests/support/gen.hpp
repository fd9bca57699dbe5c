#pragma once

// Seeded generators of random MiniC functions and programs.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace swrr::testing {

using Rng = std::mt19937_64;

inline int pick(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool chance(Rng &rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random structured function bodies: nested if/else, while, early returns,
/// logger calls and calls to `helper`.
class StructuredGen {
public:
  explicit StructuredGen(std::uint64_t seed) : rng_(seed) {}

  std::string function(const std::string &name) {
    budget_ = pick(rng_, 4, 28);
    std::string out = "int " + name + "(int a, int b) {\n  int x;\n  x = 0;\n";
    block(out, 1, 0);
    if (chance(rng_, 0.7))
      out += "  return x;\n";
    out += "}\n";
    return out;
  }

  /// Prelude every generated function compiles against.
  static std::string prelude() {
    return "extern void log_msg(const char *fmt, ...);\nextern int helper(int v);\n";
  }

private:
  void indent(std::string &out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

  std::string cond() {
    switch (pick(rng_, 0, 5)) {
    case 0: return "a > " + std::to_string(pick(rng_, -2, 5));
    case 1: return "x";
    case 2: return "!b";
    case 3: return "helper(a) == " + std::to_string(pick(rng_, -1, 2));
    case 4: return "a < b && x != 0";
    default: return "helper(x) != ERR_BUSY";
    }
  }

  void block(std::string &out, int depth, int loop_depth) {
    const int n = pick(rng_, 1, 4);
    for (int i = 0; i < n && budget_ > 0; ++i)
      stmt(out, depth, loop_depth);
  }

  void body(std::string &out, int depth, int loop_depth) {
    if (chance(rng_, 0.2)) {
      indent(out, depth);
      out += "{\n";
      block(out, depth + 1, loop_depth);
      indent(out, depth);
      out += "}\n";
      return;
    }
    block(out, depth, loop_depth);
  }

  void stmt(std::string &out, int depth, int loop_depth) {
    --budget_;
    const int k = depth > 4 ? pick(rng_, 0, 3) : pick(rng_, 0, 7);
    indent(out, depth);
    switch (k) {
    case 0: out += "x = x + " + std::to_string(pick(rng_, 1, 3)) + ";\n"; return;
    case 1: out += "log_msg(\"m" + std::to_string(pick(rng_, 0, 99)) + "\");\n"; return;
    case 2: out += "x = helper(a);\n"; return;
    case 3:
      out += chance(rng_, 0.5) ? "return " + std::to_string(pick(rng_, -3, 3)) + ";\n" : "return x;\n";
      return;
    case 4:
    case 5: {
      out += "if (" + cond() + ") {\n";
      body(out, depth + 1, loop_depth);
      indent(out, depth);
      if (chance(rng_, 0.45)) {
        out += "} else {\n";
        body(out, depth + 1, loop_depth);
        indent(out, depth);
        if (chance(rng_, 0.05)) {
          out += "}\n";
          indent(out, depth);
          out += "if (b) return 9;\n";
          return;
        }
      }
      out += "}\n";
      return;
    }
    case 6:
      if (loop_depth < 2) {
        out += "while (" + cond() + ") {\n";
        body(out, depth + 1, loop_depth + 1);
        indent(out, depth + 1);
        out += "x = x - 1;\n";
        indent(out, depth);
        out += "}\n";
        return;
      }
      out += "x = 1;\n";
      return;
    default:
      out += "if (" + cond() + ")\n";
      indent(out, depth + 1);
      out += chance(rng_, 0.6) ? "return -1;\n" : "log_msg(\"short\");\n";
      return;
    }
  }

  Rng rng_;
  int budget_ = 0;
};

/// A random multi-function program with known call edges.
struct GeneratedProgram {
  std::vector<std::string> files;
  /// (caller, callee) pairs that some execution may invoke.
  std::set<std::pair<std::string, std::string>> true_edges;
  std::set<std::string> functions;
  /// Functions whose address escapes to an unmodelled sink.
  std::set<std::string> escaped;
};

/// Programs over functions f0..f{n-1} spread across up to three files, using
/// direct calls, function-pointer dispatch through `struct ops`, logger calls,
/// constant and propagated returns, and pointer results.
class ProgramGen {
public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  GeneratedProgram program(int n) {
    GeneratedProgram gp;
    const int nfiles = pick(rng_, 1, 3);
    gp.files.assign(static_cast<std::size_t>(nfiles), "");
    gp.files[0] = "extern void log_msg(const char *fmt, ...);\nextern void sink(void *p);\n"
                  "struct ops {\n  int (*op)(int v);\n  int (*alt)(int v);\n};\nstruct ops *t;\n";
    for (int f = 1; f < nfiles; ++f)
      gp.files[static_cast<std::size_t>(f)] = "extern void log_msg(const char *fmt, ...);\nextern void sink(void *p);\n";

    std::vector<int> kind(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      kind[static_cast<std::size_t>(i)] = pick(rng_, 0, 9) < 2 ? (chance(rng_, 0.5) ? 1 : 2) : 0;
      gp.functions.insert(name(i));
    }
    // field targets, all declared in file 0 so the struct is in scope first
    std::vector<int> op_targets, alt_targets;
    for (int i = 0; i < n; ++i)
      if (kind[static_cast<std::size_t>(i)] == 0 && chance(rng_, 0.12))
        (chance(rng_, 0.5) ? op_targets : alt_targets).push_back(i);
    std::string protos;
    for (int i = 0; i < n; ++i)
      protos += signature(i, kind[static_cast<std::size_t>(i)]) + ";\n";
    gp.files[0] += protos;
    for (std::size_t t = 0; t < op_targets.size(); ++t)
      gp.files[0] += "struct ops table" + std::to_string(t) + " = { " + name(op_targets[t]) + ", 0 };\n";
    for (std::size_t t = 0; t < alt_targets.size(); ++t)
      gp.files[0] += "struct ops alt_table" + std::to_string(t) + " = { .alt = &" + name(alt_targets[t]) + " };\n";
    for (int f = 1; f < nfiles; ++f)
      gp.files[static_cast<std::size_t>(f)] += "struct ops {\n  int (*op)(int v);\n  int (*alt)(int v);\n};\n" + protos;

    for (int i = 0; i < n; ++i) {
      const int k = kind[static_cast<std::size_t>(i)];
      std::string body = signature(i, k) + " {\n  int r;\n  r = 0;\n";
      const int stmts = pick(rng_, 1, 5);
      for (int s = 0; s < stmts; ++s) {
        const int callee = pick(rng_, 0, n - 1);
        const int ck = kind[static_cast<std::size_t>(callee)];
        switch (pick(rng_, 0, 8)) {
        case 0:
          if (ck == 0) {
            body += "  r = " + name(callee) + "(r);\n";
            gp.true_edges.insert({name(i), name(callee)});
          } else if (ck == 2) {
            body += "  " + name(callee) + "(r);\n";
            gp.true_edges.insert({name(i), name(callee)});
          } else {
            body += "  if (" + name(callee) + "(r) == NULL) {\n    r = 1;\n  }\n";
            gp.true_edges.insert({name(i), name(callee)});
          }
          break;
        case 1:
          body += "  if (r > " + std::to_string(pick(rng_, -1, 3)) + ") {\n    log_msg(\"bad\");\n    " +
                  ret_const(k) + "\n  }\n";
          break;
        case 2:
          if (ck == 0 && k == 0) {
            body += "  if (" + name(callee) + "(r) != 0)\n    return " + std::to_string(pick(rng_, -4, 4)) + ";\n";
            gp.true_edges.insert({name(i), name(callee)});
          }
          break;
        case 3:
          if (!op_targets.empty() || !alt_targets.empty()) {
            const bool use_op = !op_targets.empty() && (alt_targets.empty() || chance(rng_, 0.5));
            body += "  r = t->" + std::string(use_op ? "op" : "alt") + "(r);\n";
            for (int tgt : use_op ? op_targets : alt_targets)
              gp.true_edges.insert({name(i), name(tgt)});
          }
          break;
        case 4:
          if (chance(rng_, 0.15) && ck == 0) {
            body += "  sink(&" + name(callee) + ");\n";
            gp.escaped.insert(name(callee));
          }
          break;
        case 5:
          if (ck == 0 && k == 0) {
            body += "  if (r < 0)\n    return " + name(callee) + "(r);\n";
            gp.true_edges.insert({name(i), name(callee)});
          }
          break;
        case 6:
          if (k == 0 && ck == 0) {
            body += "  if (" + name(callee) + "(r) < 0) {\n    log_msg(\"callee failed\");\n    return -2;\n  }\n";
            gp.true_edges.insert({name(i), name(callee)});
          }
          break;
        case 7:
          if (k == 1 && chance(rng_, 0.5))
            body += "  if (r == 3)\n    return NULL;\n";
          break;
        default:
          body += "  r = r + 1;\n";
          break;
        }
      }
      body += "  " + ret_tail(k) + "\n}\n";
      gp.files[static_cast<std::size_t>(pick(rng_, 0, nfiles - 1))] += body;
    }
    return gp;
  }

  static std::string name(int i) { return "f" + std::to_string(i); }

private:
  static std::string signature(int i, int kind) {
    switch (kind) {
    case 1: return "char *" + name(i) + "(int v)";
    case 2: return "void " + name(i) + "(int v)";
    default: return "int " + name(i) + "(int v)";
    }
  }
  // dispatch goes through the global `struct ops *t`
  std::string ret_const(int kind) {
    switch (kind) {
    case 1: return "return NULL;";
    case 2: return "return;";
    default: return "return " + std::to_string(pick(rng_, -3, 3)) + ";";
    }
  }
  std::string ret_tail(int kind) {
    switch (kind) {
    case 1: return "return \"ok\";";
    case 2: return "return;";
    default: return chance(rng_, 0.5) ? "return r;" : "return v;";
    }
  }

  Rng rng_;
};

} // namespace swrr::testing

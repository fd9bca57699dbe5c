#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "swrr/heuristics.hpp"
#include "swrr/program.hpp"

namespace swrr {

inline constexpr std::string_view kSentinel = "/* SWRR-INSTRUMENTED */";
inline constexpr std::string_view kSwrrDecl = "extern int SWRR_enabled(const char*);";

enum class PatchMode { InPlace, PatchBased };

struct Edit {
  std::uint32_t insert_at = 0;
  std::string text;
  friend bool operator==(const Edit &, const Edit &) = default;
};

/// Pure insertions against one source file, sorted by offset. Edits at the
/// same offset apply in list order.
struct Patch {
  FileId file_id = 0;
  std::vector<Edit> edits;
  PatchMode mode = PatchMode::InPlace;
  friend bool operator==(const Patch &, const Patch &) = default;
};

inline std::string apply_patch(std::string_view original, const Patch &patch) {
  std::string out;
  std::size_t extra = 0;
  for (const auto &e : patch.edits)
    extra += e.text.size();
  out.reserve(original.size() + extra);
  std::size_t pos = 0;
  for (const auto &e : patch.edits) {
    out.append(original.substr(pos, e.insert_at - pos));
    out += e.text;
    pos = e.insert_at;
  }
  out.append(original.substr(pos));
  return out;
}

struct RuntimeShim {
  std::string header_text;
  std::string impl_text;
  std::string version = "1";
};

namespace detail {

inline void reject_instrumented(const ProgramModel &pm) {
  for (const auto &pf : pm.files)
    if (pf.file.text.find(kSentinel) != std::string::npos)
      throw Error(ErrorKind::AlreadyInstrumented, "file already carries SWRR instrumentation", pf.file.name);
}

inline void check_plan(const ProgramModel &pm, const SwrrPlan &plan) {
  for (const auto &[name, spec] : plan.to_instrument) {
    auto fn = pm.find_function(name);
    if (!fn)
      throw Error(ErrorKind::PlanMismatch, "plan function '" + name + "' is not defined in the program");
    if (!spec.code.fits(pm.function(*fn).category))
      throw Error(ErrorKind::PlanMismatch, "error code of '" + name + "' does not fit its return type");
    auto it = plan.swrr_map.find(name);
    if (it == plan.swrr_map.end() || it->second.size() != 1)
      throw Error(ErrorKind::PlanMismatch, "plan function '" + name + "' has no option");
  }
  for (const auto &name : plan.indirect_only)
    if (!pm.find_function(name))
      throw Error(ErrorKind::PlanMismatch, "plan function '" + name + "' is not defined in the program");
}

inline std::string return_text(const ErrorCode &code) {
  const std::string r = code.render();
  return r.empty() ? "return;" : "return " + r + ";";
}

/// One patch per file; `body` yields the text inserted after a target's `{`.
template <typename BodyText>
std::vector<Patch> build_patches(const ProgramModel &pm, const std::set<std::string> &targets, PatchMode mode,
                                 BodyText &&body) {
  std::vector<Patch> patches(pm.files.size());
  for (std::size_t i = 0; i < pm.files.size(); ++i) {
    patches[i].file_id = static_cast<FileId>(i);
    patches[i].mode = mode;
  }
  for (std::size_t fn = 0; fn < pm.functions.size(); ++fn) {
    const AstFunction &f = pm.function(fn);
    if (!targets.count(f.name))
      continue;
    patches[pm.functions[fn].file].edits.push_back({f.body_open_span.byte_end, body(f)});
  }
  for (auto &p : patches) {
    if (p.edits.empty())
      continue;
    std::stable_sort(p.edits.begin(), p.edits.end(),
                     [](const Edit &a, const Edit &b) { return a.insert_at < b.insert_at; });
    std::string header(kSentinel);
    header += '\n';
    if (mode == PatchMode::InPlace) {
      header += kSwrrDecl;
      header += '\n';
    }
    p.edits.insert(p.edits.begin(), Edit{0, header});
  }
  return patches;
}

} // namespace detail

/// In-place deployment: every directly instrumented function starts with
/// `if (SWRR_enabled("<option>")) return <code>;`.
inline std::vector<Patch> instrument_in_place(const ProgramModel &pm, const SwrrPlan &plan) {
  detail::reject_instrumented(pm);
  detail::check_plan(pm, plan);
  std::set<std::string> targets;
  for (const auto &[name, spec] : plan.to_instrument)
    targets.insert(name);
  return detail::build_patches(pm, targets, PatchMode::InPlace, [&](const AstFunction &f) {
    const ErrorSpec &spec = plan.to_instrument.at(f.name);
    const std::string &option = *plan.swrr_map.at(f.name).begin();
    return "\nif (SWRR_enabled(\"" + option + "\")) " + detail::return_text(spec.code);
  });
}

struct PatchBasedResult {
  std::vector<Patch> patches;
  /// Functions that actually received the early return.
  std::set<std::string> effective;
  std::vector<std::string> notices;
};

/// Patch-based deployment: each target begins with an unconditional
/// `return <code>;`. Indirect-only targets are replaced by the functions
/// owning their options.
inline PatchBasedResult instrument_patch_based(const ProgramModel &pm, const SwrrPlan &plan,
                                               const std::set<std::string> &targets) {
  detail::reject_instrumented(pm);
  detail::check_plan(pm, plan);
  PatchBasedResult res;
  for (const auto &t : targets) {
    if (plan.to_instrument.count(t)) {
      res.effective.insert(t);
      continue;
    }
    if (plan.indirect_only.count(t)) {
      std::string owners;
      for (const auto &opt : plan.swrr_map.at(t)) {
        const std::string &owner = plan.option_owner.at(opt);
        res.effective.insert(owner);
        owners += owners.empty() ? owner : ", " + owner;
      }
      res.notices.push_back("note: '" + t + "' is protected indirectly; patching " + owners + " instead");
      continue;
    }
    throw Error(ErrorKind::TargetUnprotected, "'" + t + "' has no SWRR: not instrumented directly or indirectly");
  }
  res.patches = detail::build_patches(pm, res.effective, PatchMode::PatchBased, [&](const AstFunction &f) {
    return "\n" + detail::return_text(plan.to_instrument.at(f.name).code);
  });
  return res;
}

/// The C runtime behind SWRR_enabled(). The enabled set is read from
/// $SWRR_CONFIG (default ./swrr.conf) and re-read whenever the file's
/// mtime, size or inode changes.
inline RuntimeShim emit_runtime() {
  RuntimeShim shim;
  shim.header_text = R"(/* swrr_runtime.h v1 */
#ifndef SWRR_RUNTIME_H
#define SWRR_RUNTIME_H

#ifdef __cplusplus
extern "C" {
#endif

/* 1 if `option` is listed in the SWRR configuration file, else 0. */
int SWRR_enabled(const char *option);

#ifdef __cplusplus
}
#endif

#endif
)";
  shim.impl_text = R"(/* swrr_runtime.c v1 */
#define _POSIX_C_SOURCE 200809L

#include "swrr_runtime.h"

#include <pthread.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>
#include <sys/types.h>

static pthread_mutex_t swrr_lock = PTHREAD_MUTEX_INITIALIZER;
static char **swrr_set;
static size_t swrr_len;
static int swrr_loaded;
static int swrr_present;
static struct stat swrr_seen;

static const char *swrr_path(void) {
  const char *p = getenv("SWRR_CONFIG");
  return (p && *p) ? p : "./swrr.conf";
}

static int swrr_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

static void swrr_free(char **set, size_t len) {
  size_t i;
  for (i = 0; i < len; i++)
    free(set[i]);
  free(set);
}

static int swrr_has(char **set, size_t len, const char *option) {
  size_t i;
  for (i = 0; i < len; i++)
    if (strcmp(set[i], option) == 0)
      return 1;
  return 0;
}

/* Builds the new set aside and swaps it in whole. */
static void swrr_load(const char *path) {
  char **set = NULL;
  size_t len = 0, cap = 0;
  FILE *f = fopen(path, "r");
  if (f) {
    char *line = NULL;
    size_t line_cap = 0;
    ssize_t n;
    while ((n = getline(&line, &line_cap, f)) != -1) {
      char *s = line;
      char *e = line + n;
      while (s < e && swrr_space(*s))
        s++;
      while (e > s && swrr_space(e[-1]))
        e--;
      *e = '\0';
      if (s == e || *s == '#' || swrr_has(set, len, s))
        continue;
      if (len == cap) {
        size_t ncap = cap ? cap * 2 : 8;
        char **grown = realloc(set, ncap * sizeof *set);
        if (!grown)
          break;
        set = grown;
        cap = ncap;
      }
      set[len] = strdup(s);
      if (!set[len])
        break;
      len++;
    }
    free(line);
    fclose(f);
  }
  swrr_free(swrr_set, swrr_len);
  swrr_set = set;
  swrr_len = len;
}

static int swrr_changed(int present, const struct stat *st) {
  if (!swrr_loaded || present != swrr_present)
    return 1;
  if (!present)
    return 0;
  return st->st_mtim.tv_sec != swrr_seen.st_mtim.tv_sec || st->st_mtim.tv_nsec != swrr_seen.st_mtim.tv_nsec ||
         st->st_size != swrr_seen.st_size || st->st_ino != swrr_seen.st_ino;
}

int SWRR_enabled(const char *option) {
  struct stat st;
  const char *path;
  int present, hit;
  if (!option)
    return 0;
  pthread_mutex_lock(&swrr_lock);
  path = swrr_path();
  present = stat(path, &st) == 0;
  if (swrr_changed(present, &st)) {
    swrr_load(path);
    swrr_loaded = 1;
    swrr_present = present;
    if (present)
      swrr_seen = st;
  }
  hit = swrr_has(swrr_set, swrr_len, option);
  pthread_mutex_unlock(&swrr_lock);
  return hit;
}
)";
  return shim;
}

} // namespace swrr

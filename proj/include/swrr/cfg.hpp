#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "swrr/ast.hpp"

namespace swrr {

using BlockId = std::uint32_t;

enum class EdgeLabel { Uncond, True, False };

struct CfgEdge {
  BlockId from = 0;
  BlockId to = 0;
  EdgeLabel label = EdgeLabel::Uncond;
  friend bool operator==(const CfgEdge &, const CfgEdge &) = default;
};

struct BasicBlock {
  /// Simple statements (and a trailing Return) executed in order.
  std::vector<StmtId> stmts;
  /// If/While whose condition terminates this block, or kNone.
  StmtId branch = kNone;
  /// Block re-evaluating a loop condition after the body (loops are rotated:
  /// the first test lives in the block holding the While statement).
  bool loop_latch = false;
};

/// Per-function control-flow graph. Blocks 0 and 1 are the synthetic entry and
/// exit; every Return's block has the exit as its only successor.
struct Cfg {
  static constexpr BlockId kEntry = 0;
  static constexpr BlockId kExit = 1;

  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  /// Block of each statement, indexed by StmtId. If/While map to the block
  /// evaluating their (first) condition; Blocks map to where they start.
  std::vector<BlockId> block_of;

  BlockId entry() const { return kEntry; }
  BlockId exit() const { return kExit; }
  std::size_t interior_count() const { return blocks.size() - 2; }

  std::vector<CfgEdge> successors(BlockId b) const {
    std::vector<CfgEdge> out;
    for (const auto &e : edges)
      if (e.from == b)
        out.push_back(e);
    return out;
  }
  std::vector<CfgEdge> predecessors(BlockId b) const {
    std::vector<CfgEdge> out;
    for (const auto &e : edges)
      if (e.to == b)
        out.push_back(e);
    return out;
  }
  std::vector<bool> reachable_from_entry() const {
    std::vector<bool> seen(blocks.size(), false);
    std::vector<BlockId> work{kEntry};
    seen[kEntry] = true;
    while (!work.empty()) {
      const BlockId b = work.back();
      work.pop_back();
      for (const auto &e : edges)
        if (e.from == b && !seen[e.to]) {
          seen[e.to] = true;
          work.push_back(e.to);
        }
    }
    return seen;
  }
};

namespace detail {

class CfgBuilder {
public:
  explicit CfgBuilder(const AstFunction &f) : f_(f) {
    cfg_.blocks.resize(2);
    cfg_.block_of.assign(f.stmts.size(), Cfg::kEntry);
  }

  Cfg run() {
    const BlockId first = fresh();
    edge(Cfg::kEntry, first, EdgeLabel::Uncond);
    const BlockId end = build(f_.body, first);
    if (end != kNone)
      edge(end, Cfg::kExit, EdgeLabel::Uncond);
    return std::move(cfg_);
  }

private:
  BlockId fresh() {
    cfg_.blocks.emplace_back();
    return static_cast<BlockId>(cfg_.blocks.size() - 1);
  }
  void edge(BlockId a, BlockId b, EdgeLabel l) { cfg_.edges.push_back({a, b, l}); }

  // Returns the block control falls into after `s`, or kNone when no path
  // leaves `s` normally. `cur == kNone` means `s` is unreachable; it still
  // gets a (predecessor-less) block.
  BlockId build(StmtId s, BlockId cur) {
    if (cur == kNone)
      cur = fresh();
    const Stmt &st = f_.stmt(s);
    cfg_.block_of[s] = cur;
    switch (st.kind) {
    case StmtKind::Block:
      for (StmtId c : st.children)
        cur = build(c, cur);
      return cur;
    case StmtKind::Return:
      cfg_.blocks[cur].stmts.push_back(s);
      edge(cur, Cfg::kExit, EdgeLabel::Uncond);
      return kNone;
    case StmtKind::If: {
      cfg_.blocks[cur].branch = s;
      const BlockId then_b = fresh();
      edge(cur, then_b, EdgeLabel::True);
      const BlockId then_end = build(st.then_branch, then_b);
      BlockId else_end = kNone;
      bool else_direct = false;
      if (st.else_branch != kNone) {
        const BlockId else_b = fresh();
        edge(cur, else_b, EdgeLabel::False);
        else_end = build(st.else_branch, else_b);
      } else {
        else_direct = true;
      }
      if (then_end == kNone && else_end == kNone && !else_direct)
        return kNone;
      const BlockId join = fresh();
      if (then_end != kNone)
        edge(then_end, join, EdgeLabel::Uncond);
      if (else_direct)
        edge(cur, join, EdgeLabel::False);
      else if (else_end != kNone)
        edge(else_end, join, EdgeLabel::Uncond);
      return join;
    }
    case StmtKind::While: {
      cfg_.blocks[cur].branch = s;
      const BlockId body_b = fresh();
      edge(cur, body_b, EdgeLabel::True);
      const BlockId body_end = build(st.then_branch, body_b);
      const BlockId after = fresh();
      edge(cur, after, EdgeLabel::False);
      if (body_end != kNone) {
        const BlockId latch = fresh();
        cfg_.blocks[latch].branch = s;
        cfg_.blocks[latch].loop_latch = true;
        edge(body_end, latch, EdgeLabel::Uncond);
        edge(latch, body_b, EdgeLabel::True);
        edge(latch, after, EdgeLabel::False);
      }
      return after;
    }
    default:
      cfg_.blocks[cur].stmts.push_back(s);
      return cur;
    }
  }

  const AstFunction &f_;
  Cfg cfg_;
};

} // namespace detail

inline Cfg build_cfg(const AstFunction &f) { return detail::CfgBuilder(f).run(); }

/// pdom[b][c] is true when c postdominates b (every path from b to the exit
/// passes through c). Reflexive.
inline std::vector<std::vector<bool>> postdominators(const Cfg &cfg) {
  const std::size_t n = cfg.blocks.size();
  std::vector<std::vector<bool>> pdom(n, std::vector<bool>(n, true));
  pdom[Cfg::kExit].assign(n, false);
  pdom[Cfg::kExit][Cfg::kExit] = true;
  std::vector<std::vector<BlockId>> succ(n);
  for (const auto &e : cfg.edges)
    succ[e.from].push_back(e.to);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == Cfg::kExit)
        continue;
      std::vector<bool> next(n, !succ[b].empty());
      for (BlockId s : succ[b])
        for (std::size_t c = 0; c < n; ++c)
          next[c] = next[c] && pdom[s][c];
      next[b] = true;
      if (next != pdom[b]) {
        pdom[b] = std::move(next);
        changed = true;
      }
    }
  }
  return pdom;
}

/// A (branch block, edge label) pair some block is control dependent on.
struct ControlDep {
  BlockId block = 0;
  EdgeLabel label = EdgeLabel::True;
  friend auto operator<=>(const ControlDep &, const ControlDep &) = default;
};

/// Ferrante-style control dependence: block y depends on edge (x -> s) when y
/// postdominates s but not x.
inline std::vector<std::set<ControlDep>> control_dependence(const Cfg &cfg) {
  const auto pdom = postdominators(cfg);
  const std::size_t n = cfg.blocks.size();
  std::vector<std::set<ControlDep>> cd(n);
  for (const auto &e : cfg.edges) {
    if (e.label == EdgeLabel::Uncond)
      continue;
    for (std::size_t y = 0; y < n; ++y) {
      const bool strictly_pdom_from = pdom[e.from][y] && y != e.from;
      if (pdom[e.to][y] && !strictly_pdom_from)
        cd[y].insert(ControlDep{e.from, e.label});
    }
  }
  return cd;
}

} // namespace swrr

#ifndef GENTREES_SJT_OJT_HPP
#define GENTREES_SJT_OJT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gentrees/order.hpp"
#include "gentrees/posvalue.hpp"
#include "gentrees/term.hpp"

namespace gentrees {

// ---------------------------------------------------------------------------
// Structured join-trees and join-forests (unbounded degree, two sorts).

class SJForest {
 public:
  SJForest() = default;  // empty forest
  SJForest(Poset base, std::vector<std::vector<int>> lines, Sort sort);

  static SJForest empty_tree() { return SJForest(Sort::T); }
  static SJForest empty_forest() { return SJForest(Sort::F); }

  bool empty() const { return base_.empty(); }
  Sort sort() const { return sort_; }
  const Poset& base() const { return base_; }
  const std::vector<std::vector<int>>& lines() const { return lines_; }
  const std::vector<int>& line_nodes(int li) const { return lines_[li]; }
  int line_of(int node) const { return line_of_[node]; }
  int top_of_line(int li) const { return tops_[li]; }
  bool is_axis(int li) const { return tops_[li] < 0; }
  // All lines topped by the node, in discovery order (the set U^x).
  const std::vector<int>& lines_topped_by(int node) const { return topped_[node]; }
  int depth(int node) const { return depth_[node]; }
  // Join-components, each with its axis line index.
  const std::vector<std::vector<int>>& components() const { return components_; }

  Poset fgs() const { return base_; }
  SJForest renamed(const std::string& prefix) const;
  std::string to_text() const;

 private:
  explicit SJForest(Sort s) : sort_(s) {}
  void compute_derived();

  Poset base_;
  std::vector<std::vector<int>> lines_;
  Sort sort_ = Sort::F;
  std::vector<int> line_of_, tops_, depth_;
  std::vector<std::vector<int>> topped_;
  std::vector<std::vector<int>> components_;
};

// the F' algebra
SJForest sj_concat(const SJForest& a, const SJForest& b);  // t x t -> t
SJForest sj_union(const SJForest& a, const SJForest& b);   // f x f -> f
SJForest sj_ext(const SJForest& forest, const std::string& u);  // f -> t
SJForest sj_mkf(const SJForest& tree);                     // t -> f

// value of a finite term over F'
SJForest val_sj(const FiniteTerm& t);

// Greedy structuring of a join-forest along a node enumeration (maximal
// line through the first uncovered node, repeatedly).
SJForest sj_structure(const Poset& forest, const std::vector<int>& enumeration,
                      Sort sort = Sort::T);

// canonical form; equality decides isomorphism of finite SJ-trees/forests
std::string sj_canonical(const SJForest& j);
inline bool sj_iso(const SJForest& a, const SJForest& b) {
  return sj_canonical(a) == sj_canonical(b);
}

// ---------------------------------------------------------------------------
// Ordered join-trees.

class OJTree {
 public:
  OJTree() = default;

  // sqle given as the node permutation in ascending horizontal order.
  // Validates conditions (i) and (ii); violations carry a witness.
  OJTree(Poset base, std::vector<int> sqle_order);

  bool empty() const { return base_.empty(); }
  const Poset& base() const { return base_; }
  bool sqle(int x, int y) const { return rank_[x] <= rank_[y]; }
  int rank(int x) const { return rank_[x]; }
  // nodes in ascending horizontal order
  std::vector<int> horizontal_order() const;

 private:
  Poset base_;
  std::vector<int> rank_;
};

// Builds the global order from per-node direction orders: each entry of
// `local` lists the directions of its node (as node sets) from left to
// right, covering Dir(x) exactly.
OJTree oj_global_from_local(const Poset& base,
                            const std::map<int, std::vector<std::vector<int>>>& local);

// Recovers the per-node direction orders from the global order.
std::map<int, std::vector<std::vector<int>>> oj_local_from_global(const OJTree& j);

class SOJTree;

// Structuring of an ordered join-tree: greedy lines, each tagged by its
// position relative to the central direction of its top (all plus when the
// top has no central direction).
SOJTree soj_structure(const OJTree& j, const std::vector<int>& enumeration);

// ---------------------------------------------------------------------------
// Structured ordered join-trees and join-hedges.

enum class LineTag { Axis, Minus, Plus };

class SOJTree {
 public:
  SOJTree() = default;

  SOJTree(Poset base, std::vector<int> sqle_order, std::vector<std::vector<int>> lines,
          std::vector<LineTag> tags);

  bool empty() const { return base_.empty(); }
  const Poset& base() const { return base_; }
  const OJTree& ordered() const { return oj_; }
  bool sqle(int x, int y) const { return oj_.sqle(x, y); }
  const std::vector<std::vector<int>>& lines() const { return lines_; }
  LineTag tag(int li) const { return tags_[li]; }
  int axis() const { return axis_; }
  int top_of_line(int li) const { return tops_[li]; }
  int line_of(int node) const { return line_of_[node]; }
  const std::vector<int>& lines_topped_by(int node) const { return topped_[node]; }

  std::string to_text() const;
  static SOJTree parse(const std::string& text);
  SOJTree renamed(const std::string& prefix) const;

 private:
  void compute_derived();

  Poset base_;
  OJTree oj_;
  std::vector<std::vector<int>> lines_;
  std::vector<LineTag> tags_;
  int axis_ = -1;
  std::vector<int> line_of_, tops_;
  std::vector<std::vector<int>> topped_;
};

class JoinHedge {
 public:
  JoinHedge() = default;
  JoinHedge(Poset base, std::vector<int> sqle_order, std::vector<std::vector<int>> lines);

  bool empty() const { return base_.empty(); }
  const Poset& base() const { return base_; }
  bool sqle(int x, int y) const { return rank_[x] <= rank_[y]; }
  const std::vector<std::vector<int>>& lines() const { return lines_; }
  // components in ascending hedge order, each a set of node indices
  std::vector<std::vector<int>> ordered_components() const;

 private:
  Poset base_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> lines_;
};

// the F'' algebra
SOJTree soj_concat(const SOJTree& a, const SOJTree& b);           // t x t -> t
SOJTree soj_ext2(const JoinHedge& h1, const JoinHedge& h2, const std::string& u);
JoinHedge hedge_concat(const JoinHedge& a, const JoinHedge& b);   // h x h -> h
JoinHedge soj_mkh(const SOJTree& j);                              // t -> h

// values of finite terms over F''
SOJTree val_soj(const FiniteTerm& t);
JoinHedge val_soj_hedge(const FiniteTerm& t);

std::string soj_canonical(const SOJTree& j);
std::string hedge_canonical(const JoinHedge& h);
inline bool soj_iso(const SOJTree& a, const SOJTree& b) {
  return soj_canonical(a) == soj_canonical(b);
}
inline bool hedge_iso(const JoinHedge& a, const JoinHedge& b) {
  return hedge_canonical(a) == hedge_canonical(b);
}

// ---------------------------------------------------------------------------
// Lazy values of regular terms over F' and F''.

class LazyTermValue {
 public:
  explicit LazyTermValue(TermAutomaton a);

  bool is_node(const std::string& u) const;
  bool leq(const std::string& u, const std::string& v) const;
  bool equiv(const std::string& u, const std::string& v) const;
  std::optional<std::string> join(const std::string& u, const std::string& v) const;
  // horizontal order (F'' values only)
  bool sqle(const std::string& u, const std::string& v) const;

  std::vector<std::string> enumerate_nodes(size_t n) const;
  SJForest materialize_sj(int max_len) const;
  SOJTree materialize_soj(int max_len) const;

 private:
  std::string symbol(const std::string& pos) const;
  TermAutomaton a_;
};

}  // namespace gentrees

#endif

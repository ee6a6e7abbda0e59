#ifndef GENTREES_SBJT_HPP
#define GENTREES_SBJT_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gentrees/arrangement.hpp"
#include "gentrees/order.hpp"
#include "gentrees/term.hpp"

namespace gentrees {

// A structured binary join-tree: a binary join-tree together with a
// partition of its nodes into lines, exactly one of which (the axis) is
// upwards closed; every other line has a top, no node tops two lines, and
// a minimal axis element has degree at most 1.
class SBJTree {
 public:
  SBJTree() = default;  // the empty tree (Omega)

  // Validates all structuring conditions; throws Error with a witness.
  SBJTree(Poset base, std::vector<std::vector<int>> lines);

  static SBJTree singleton(const std::string& name);

  bool empty() const { return base_.empty(); }
  const Poset& base() const { return base_; }
  int axis() const { return axis_; }
  const std::vector<std::vector<int>>& lines() const { return lines_; }
  const std::vector<int>& axis_line() const { return lines_[axis_]; }

  int line_of(int node) const { return line_of_[node]; }
  // The line topped by x, or -1 (U^x in the paper; at most one by (ii)).
  int line_topped_by(int node) const { return topped_[node]; }
  // The top node of a line, or -1 for the axis.
  int top_of_line(int line) const { return tops_[line]; }
  int depth(int node) const { return depth_[node]; }

  // The nodes of a line in ascending order.
  const std::vector<int>& line_nodes(int line) const { return lines_[line]; }

  Poset fgs() const { return base_; }

  // Structuring as the even/odd-depth bipartition (N0, N1).
  std::pair<std::vector<int>, std::vector<int>> encode_S() const;

  std::string to_text() const;
  static SBJTree parse(const std::string& text);

  // Nodes relabelled with a prefix (for disjoint unions).
  SBJTree renamed(const std::string& prefix) const;

 private:
  void compute_derived();

  Poset base_;
  std::vector<std::vector<int>> lines_;
  int axis_ = -1;
  std::vector<int> line_of_, topped_, tops_, depth_;
};

// --- the SBJT algebra -------------------------------------------------------

// Concatenation along axes (Def of the algebra; node sets are namespaced
// "l:" / "r:" when they clash).
SBJTree op_concat(const SBJTree& j1, const SBJTree& j2);

// Extension: a new node u above everything; the old axis keeps its lines
// and gains top u.
SBJTree op_ext(const SBJTree& j, const std::string& u);

// --- values of terms --------------------------------------------------------

// The value of a finite term over F of sort t. Node names come from ext
// labels when present, otherwise from Dewey positions prefixed with '@'.
SBJTree val_sbjt(const FiniteTerm& t);

// Lazy value of a regular term: nodes are the Dewey words of ext
// occurrences, with decidable order/equivalence oracles.
class LazySBJTree {
 public:
  explicit LazySBJTree(TermAutomaton a);

  const TermAutomaton& automaton() const { return a_; }

  bool is_node(const std::string& u) const;        // ext occurrence?
  bool leq(const std::string& u, const std::string& v) const;
  bool equiv(const std::string& u, const std::string& v) const;  // same line
  std::optional<std::string> join(const std::string& u, const std::string& v) const;

  // Both characterizations of the order from the value definition; they
  // must agree (the library asserts this in tests, not here).
  bool leq_via_witness(const std::string& u, const std::string& v) const;
  bool leq_via_sons(const std::string& u, const std::string& v) const;

  // First n node positions in breadth-first order.
  std::vector<std::string> enumerate_nodes(size_t n) const;

  // The finite SBJ-tree induced by all ext occurrences of length <= len.
  SBJTree materialize(int max_len) const;

  // The axis line as a lazy arrangement labelled by position.
  LazyPtr axis_arrangement() const;

 private:
  TermAutomaton a_;
};

// --- structurings and encodings ---------------------------------------------

// Greedy structuring of a binary join-tree along a node enumeration
// (maximal line through the first uncovered node, repeatedly).
SBJTree structure(const Poset& p, const std::vector<int>& enumeration);

struct SEncoding {
  Poset base;
  std::vector<int> n0, n1;  // even- and odd-depth node sets
};

struct SViolation {
  std::string reason;
};

// Checks the semantic conditions for (N0, N1) to encode a structuring:
// both laminar, every N1-component topped in N0, every N0-component but
// one topped in N1, the one exception upwards closed, finite top-chains.
// On success returns the reconstructed structured tree.
std::variant<SBJTree, SViolation> validate_S(const SEncoding& e);

// --- synthesis ---------------------------------------------------------------

// A finite term denoting J (axis words as right combs; children substituted
// below their tops by depth induction).
FiniteTerm synthesize(const SBJTree& j);

// Canonical form deciding isomorphism of finite SBJ-trees.
std::string sbjt_canonical(const SBJTree& j);
inline bool sbjt_iso(const SBJTree& a, const SBJTree& b) {
  return sbjt_canonical(a) == sbjt_canonical(b);
}

}  // namespace gentrees

#endif

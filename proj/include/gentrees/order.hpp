#ifndef GENTREES_ORDER_HPP
#define GENTREES_ORDER_HPP

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gentrees/util.hpp"

namespace gentrees {

// Finite partial order over named nodes. Node indices are assigned in
// lexicographic order of the names, so index order is the canonical output
// order everywhere. The relation is stored as a dense reachability matrix;
// reflexivity, antisymmetry and transitivity are established or checked on
// construction.
class Poset {
 public:
  Poset() = default;

  // Builds the reflexive-transitive closure of the given pairs (x <= y).
  // Throws Error on a cycle (antisymmetry failure) or unknown names.
  static Poset from_cover(std::vector<std::string> names,
                          const std::vector<std::pair<std::string, std::string>>& pairs);

  // Requires the pairs to already be reflexive-transitively closed;
  // throws Error if transitivity or antisymmetry fails.
  static Poset from_relation(std::vector<std::string> names,
                             const std::vector<std::pair<std::string, std::string>>& pairs);

  // Text format: "a < b" per covering pair, "node a" for isolated nodes,
  // '#' starts a comment.
  static Poset parse(const std::string& text);
  std::string to_text() const;

  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index(const std::string& name) const;
  int index_or_throw(const std::string& name) const;

  bool leq(int x, int y) const { return leq_[idx(x, y)]; }
  bool lt(int x, int y) const { return x != y && leq(x, y); }
  bool comparable(int x, int y) const { return leq(x, y) || leq(y, x); }

  // Least upper bound, if it exists.
  std::optional<int> join(int x, int y) const;

  bool is_join_tree() const;
  bool is_join_forest() const;
  // Human-readable witness for a failed join-tree/forest check.
  std::string join_tree_violation() const;

  // ys linearly ordered and convex in this poset.
  bool is_line(const std::vector<int>& ys) const;

  // Equivalence classes of z ~ y  <=>  z `join` y < x, on ]-inf,x[.
  // Requires a join-forest. Classes and their members are in index order.
  std::vector<std::vector<int>> directions(int x) const;
  int degree(int x) const { return static_cast<int>(directions(x).size()); }

  std::vector<int> down_set(const std::vector<int>& xs) const;
  std::vector<int> up_set(int x) const;  // [x, +inf)

  // Immediate predecessor pairs (x covered by y), in index order.
  std::vector<std::pair<int, int>> covers() const;
  std::vector<int> maximal_elements() const;
  std::vector<int> minimal_elements() const;

  // Join-equivalence classes of a join-forest ("two nodes have a join").
  std::vector<std::vector<int>> components() const;

  // Restriction to a subset of nodes (names kept).
  Poset induced(const std::vector<int>& keep) const;

  struct NotLaminar {
    int x, y, z;  // witnessing triple
  };
  // For a join-tree: if xs is laminar, the maximal lines included in xs
  // (its "components"), as a partition of xs; otherwise a violating triple.
  std::variant<std::vector<std::vector<int>>, NotLaminar> laminar_components(
      const std::vector<int>& xs) const;

  bool same_order(const Poset& other) const;

 private:
  size_t idx(int x, int y) const { return static_cast<size_t>(x) * names_.size() + y; }
  void close_transitively();
  void check_partial_order() const;

  std::vector<std::string> names_;
  std::vector<bool> leq_;
};

}  // namespace gentrees

#endif

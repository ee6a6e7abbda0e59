#include "gentrees/sjt_ojt.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace gentrees {

// ---------------------------------------------------------------------------
// SJForest

SJForest::SJForest(Poset base, std::vector<std::vector<int>> lines, Sort sort)
    : base_(std::move(base)), lines_(std::move(lines)), sort_(sort) {
  if (sort_ != Sort::T && sort_ != Sort::F) throw Error("SJ sort must be t or f");
  if (base_.empty()) {
    if (!lines_.empty()) throw Error("empty forest cannot have lines");
    return;
  }
  if (!base_.is_join_forest()) throw Error("not a join-forest");
  std::vector<int> seen(base_.size(), -1);
  for (size_t li = 0; li < lines_.size(); ++li) {
    auto& ln = lines_[li];
    if (ln.empty()) throw Error("empty line in structuring");
    std::sort(ln.begin(), ln.end(), [&](int a, int b) {
      if (a == b) return false;
      if (!base_.comparable(a, b)) throw Error("line not linearly ordered");
      return base_.lt(a, b);
    });
    if (!base_.is_line(ln)) throw Error("line not convex");
    for (int x : ln) {
      if (seen[x] >= 0) throw Error("node in two lines: " + base_.name(x));
      seen[x] = static_cast<int>(li);
    }
  }
  for (int x = 0; x < base_.size(); ++x)
    if (seen[x] < 0) throw Error("node in no line: " + base_.name(x));
  line_of_ = std::move(seen);
  compute_derived();
}

void SJForest::compute_derived() {
  const int n = base_.size();
  const int m = static_cast<int>(lines_.size());
  tops_.assign(m, -1);
  topped_.assign(n, {});
  for (int li = 0; li < m; ++li) {
    int mx = lines_[li].back();
    int top = -1;
    for (int z = 0; z < n; ++z)
      if (base_.lt(mx, z) && (top < 0 || base_.lt(z, top))) top = z;
    tops_[li] = top;
    if (top >= 0) topped_[top].push_back(li);
  }
  components_ = base_.components();
  if (sort_ == Sort::T && components_.size() > 1)
    throw Error("tree sort with several components");
  // one topless line per component; it must be upwards closed
  std::map<int, int> axis_of_component;
  std::vector<int> comp_of(n, -1);
  for (size_t c = 0; c < components_.size(); ++c)
    for (int x : components_[c]) comp_of[x] = static_cast<int>(c);
  for (int li = 0; li < m; ++li) {
    if (tops_[li] >= 0) continue;
    int c = comp_of[lines_[li][0]];
    if (axis_of_component.count(c)) throw Error("two topless lines in one component");
    axis_of_component[c] = li;
    for (int x : lines_[li])
      for (int z = 0; z < n; ++z)
        if (base_.lt(x, z) && line_of_[z] != li)
          throw Error("axis not upwards closed at " + base_.name(x));
  }
  for (size_t c = 0; c < components_.size(); ++c)
    if (!axis_of_component.count(static_cast<int>(c)))
      throw Error("component without an upwards-closed line");
  // depths via top chains
  depth_.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    int d = 0;
    int li = line_of_[x];
    std::set<int> walked;
    while (tops_[li] >= 0) {
      if (!walked.insert(li).second) throw Error("cyclic top chain");
      li = line_of_[tops_[li]];
      ++d;
    }
    depth_[x] = d;
  }
}

SJForest SJForest::renamed(const std::string& prefix) const {
  if (empty()) return *this;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < base_.size(); ++i) names.push_back(prefix + base_.name(i));
  for (int a = 0; a < base_.size(); ++a)
    for (int b = 0; b < base_.size(); ++b)
      if (a != b && base_.leq(a, b))
        pairs.emplace_back(prefix + base_.name(a), prefix + base_.name(b));
  Poset p = Poset::from_relation(names, pairs);
  std::vector<std::vector<int>> lines(lines_.size());
  for (size_t li = 0; li < lines_.size(); ++li)
    for (int x : lines_[li])
      lines[li].push_back(p.index_or_throw(prefix + base_.name(x)));
  return SJForest(std::move(p), std::move(lines), sort_);
}

std::string SJForest::to_text() const {
  std::ostringstream os;
  os << base_.to_text();
  for (size_t li = 0; li < lines_.size(); ++li) {
    os << (tops_[li] < 0 ? "axis:" : "line:");
    for (int x : lines_[li]) os << " " << base_.name(x);
    os << "\n";
  }
  return os.str();
}

namespace {

std::pair<SJForest, SJForest> sj_disjoint(const SJForest& a, const SJForest& b) {
  std::set<std::string> names(a.base().names().begin(), a.base().names().end());
  bool clash = false;
  for (const auto& n : b.base().names())
    if (names.count(n)) clash = true;
  if (!clash) return {a, b};
  return {a.renamed("l:"), b.renamed("r:")};
}

void append_order(const Poset& p, std::vector<std::pair<std::string, std::string>>& pairs) {
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (a != b && p.leq(a, b)) pairs.emplace_back(p.name(a), p.name(b));
}

}  // namespace

SJForest sj_concat(const SJForest& a_in, const SJForest& b_in) {
  if (a_in.sort() != Sort::T || b_in.sort() != Sort::T)
    throw Error("concatenation needs tree sort");
  if (a_in.empty()) return b_in;
  if (b_in.empty()) return a_in;
  auto [a, b] = sj_disjoint(a_in, b_in);
  std::vector<std::string> names;
  for (const auto& n : a.base().names()) names.push_back(n);
  for (const auto& n : b.base().names()) names.push_back(n);
  std::vector<std::pair<std::string, std::string>> pairs;
  append_order(a.base(), pairs);
  append_order(b.base(), pairs);
  int axis_b = -1;
  for (size_t li = 0; li < b.lines().size(); ++li)
    if (b.is_axis(static_cast<int>(li))) axis_b = static_cast<int>(li);
  for (int x = 0; x < a.base().size(); ++x)
    for (int y : b.line_nodes(axis_b))
      pairs.emplace_back(a.base().name(x), b.base().name(y));
  Poset p = Poset::from_cover(names, pairs);

  std::vector<std::vector<int>> lines;
  auto map_line = [&](const SJForest& j, const std::vector<int>& ln) {
    std::vector<int> out;
    for (int x : ln) out.push_back(p.index_or_throw(j.base().name(x)));
    return out;
  };
  int axis_a = -1;
  for (size_t li = 0; li < a.lines().size(); ++li)
    if (a.is_axis(static_cast<int>(li))) axis_a = static_cast<int>(li);
  std::vector<int> axis = map_line(a, a.line_nodes(axis_a));
  for (int x : map_line(b, b.line_nodes(axis_b))) axis.push_back(x);
  lines.push_back(std::move(axis));
  for (size_t li = 0; li < a.lines().size(); ++li)
    if (static_cast<int>(li) != axis_a) lines.push_back(map_line(a, a.lines()[li]));
  for (size_t li = 0; li < b.lines().size(); ++li)
    if (static_cast<int>(li) != axis_b) lines.push_back(map_line(b, b.lines()[li]));
  return SJForest(std::move(p), std::move(lines), Sort::T);
}

SJForest sj_union(const SJForest& a_in, const SJForest& b_in) {
  if (a_in.sort() != Sort::F || b_in.sort() != Sort::F)
    throw Error("union needs forest sort");
  if (a_in.empty()) return b_in;
  if (b_in.empty()) return a_in;
  auto [a, b] = sj_disjoint(a_in, b_in);
  std::vector<std::string> names;
  for (const auto& n : a.base().names()) names.push_back(n);
  for (const auto& n : b.base().names()) names.push_back(n);
  std::vector<std::pair<std::string, std::string>> pairs;
  append_order(a.base(), pairs);
  append_order(b.base(), pairs);
  Poset p = Poset::from_cover(names, pairs);
  std::vector<std::vector<int>> lines;
  for (const auto& j : {a, b})
    for (const auto& ln : j.lines()) {
      std::vector<int> out;
      for (int x : ln) out.push_back(p.index_or_throw(j.base().name(x)));
      lines.push_back(std::move(out));
    }
  return SJForest(std::move(p), std::move(lines), Sort::F);
}

SJForest sj_ext(const SJForest& forest, const std::string& u) {
  if (forest.sort() != Sort::F) throw Error("ext needs forest sort");
  if (!forest.empty() && forest.base().index(u))
    throw Error("ext node id already used: " + u);
  std::vector<std::string> names{u};
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!forest.empty()) {
    for (const auto& n : forest.base().names()) names.push_back(n);
    append_order(forest.base(), pairs);
    for (int x = 0; x < forest.base().size(); ++x)
      pairs.emplace_back(forest.base().name(x), u);
  }
  Poset p = Poset::from_cover(names, pairs);
  std::vector<std::vector<int>> lines{{p.index_or_throw(u)}};
  if (!forest.empty())
    for (const auto& ln : forest.lines()) {
      std::vector<int> out;
      for (int x : ln) out.push_back(p.index_or_throw(forest.base().name(x)));
      lines.push_back(std::move(out));
    }
  return SJForest(std::move(p), std::move(lines), Sort::T);
}

SJForest sj_mkf(const SJForest& tree) {
  if (tree.sort() != Sort::T) throw Error("mkf needs tree sort");
  if (tree.empty()) return SJForest::empty_forest();
  return SJForest(tree.base(), tree.lines(), Sort::F);
}

// ---------------------------------------------------------------------------
// value of a finite term over F'

namespace {

struct TermPositions {
  std::map<std::string, const FiniteTerm*> at;
  std::vector<std::string> ext_positions;
  std::map<std::string, std::string> name_of;

  static TermPositions build(const FiniteTerm& t) {
    TermPositions tp;
    std::function<void(const FiniteTerm&, std::string)> go = [&](const FiniteTerm& n,
                                                                 std::string pos) {
      tp.at.emplace(pos, &n);
      for (size_t i = 0; i < n.children.size(); ++i)
        go(n.children[i], pos + static_cast<char>('1' + i));
    };
    go(t, "");
    std::set<std::string> used;
    for (const auto& [pos, node] : tp.at) {
      if (node->symbol != "ext") continue;
      tp.ext_positions.push_back(pos);
      std::string nm = node->label.empty() ? "@" + pos : node->label;
      if (!used.insert(nm).second) throw Error("duplicate ext node name: " + nm);
      tp.name_of[pos] = nm;
    }
    return tp;
  }

  posval::SymbolFn symbol_fn() const {
    return [this](const std::string& p) { return at.at(p)->symbol; };
  }
};

// value order and equivalence classes shared by all three signatures
struct ValueCore {
  Poset poset;
  std::vector<std::vector<int>> lines;                  // node indices per ~ class
  std::vector<std::string> class_rep;                   // one position per class
  std::map<std::string, int> class_of_pos;

  static ValueCore build(const TermPositions& tp) {
    ValueCore vc;
    auto sym = tp.symbol_fn();
    std::map<std::string, std::vector<std::string>> prefixes;
    for (const auto& u : tp.ext_positions)
      prefixes[u] = posval::ext_prefixes(sym, u);
    std::vector<std::string> names;
    for (const auto& u : tp.ext_positions) names.push_back(tp.name_of.at(u));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& u : tp.ext_positions)
      for (const auto& v : tp.ext_positions) {
        if (u == v) continue;
        bool w1 = posval::leq_witness(sym, prefixes[u], v);
        bool w2 = posval::leq_sons(sym, u, v);
        if (w1 != w2)
          throw Error(cat("value order characterizations disagree at ", u, ", ", v));
        if (w1) pairs.emplace_back(tp.name_of.at(u), tp.name_of.at(v));
      }
    vc.poset = Poset::from_relation(names, pairs);
    for (const auto& u : tp.ext_positions) {
      int found = -1;
      for (size_t i = 0; i < vc.class_rep.size(); ++i)
        if (posval::equiv(sym, u, vc.class_rep[i])) {
          found = static_cast<int>(i);
          break;
        }
      if (found < 0) {
        found = static_cast<int>(vc.class_rep.size());
        vc.class_rep.push_back(u);
        vc.lines.push_back({});
      }
      vc.class_of_pos[u] = found;
      vc.lines[found].push_back(vc.poset.index_or_throw(tp.name_of.at(u)));
    }
    return vc;
  }
};

}  // namespace

SJForest val_sj(const FiniteTerm& t) {
  Sort s = sort_of(Signature::sjt(), t);
  TermPositions tp = TermPositions::build(t);
  if (tp.ext_positions.empty())
    return s == Sort::T ? SJForest::empty_tree() : SJForest::empty_forest();
  ValueCore vc = ValueCore::build(tp);
  return SJForest(std::move(vc.poset), std::move(vc.lines), s);
}

SJForest sj_structure(const Poset& forest, const std::vector<int>& enumeration,
                      Sort sort) {
  if (forest.empty()) return sort == Sort::T ? SJForest::empty_tree() : SJForest::empty_forest();
  if (!forest.is_join_forest()) throw Error("sj_structure: not a join-forest");
  if (static_cast<int>(enumeration.size()) != forest.size())
    throw Error("sj_structure: enumeration must cover all nodes");
  std::vector<int> rank(forest.size(), -1);
  for (size_t i = 0; i < enumeration.size(); ++i) {
    int x = enumeration[i];
    if (x < 0 || x >= forest.size() || rank[x] >= 0)
      throw Error("sj_structure: bad enumeration");
    rank[x] = static_cast<int>(i);
  }
  std::vector<bool> covered(forest.size(), false);
  std::vector<std::vector<int>> lines;
  auto covers_below = [&](int x) {
    std::vector<int> out;
    for (int z = 0; z < forest.size(); ++z) {
      if (!forest.lt(z, x)) continue;
      bool direct = true;
      for (int w = 0; w < forest.size() && direct; ++w)
        if (forest.lt(z, w) && forest.lt(w, x)) direct = false;
      if (direct) out.push_back(z);
    }
    return out;
  };
  for (int r = 0; r < forest.size(); ++r) {
    int seed = enumeration[r];
    if (covered[seed]) continue;
    std::vector<int> maximal = forest.up_set(seed);
    int cur = seed;
    for (;;) {
      auto below = covers_below(cur);
      if (below.empty()) break;
      int pick = below[0];
      for (int z : below)
        if (rank[z] < rank[pick]) pick = z;
      maximal.push_back(pick);
      cur = pick;
    }
    std::sort(maximal.begin(), maximal.end(),
              [&](int a, int b) { return forest.lt(a, b); });
    std::vector<int> fresh;
    for (int x : maximal)
      if (!covered[x]) fresh.push_back(x);
    for (int x : fresh) covered[x] = true;
    lines.push_back(std::move(fresh));
  }
  return SJForest(forest, std::move(lines), sort);
}

std::string sj_canonical(const SJForest& j) {
  std::string tag = j.sort() == Sort::T ? "t:" : "f:";
  if (j.empty()) return tag + "[]";
  std::function<std::string(int)> canon_line = [&](int li) {
    std::string s = "[";
    for (int x : j.line_nodes(li)) {
      std::vector<std::string> subs;
      for (int sub : j.lines_topped_by(x)) subs.push_back(canon_line(sub));
      std::sort(subs.begin(), subs.end());
      s += "(";
      for (const auto& c : subs) s += c;
      s += ")";
    }
    return s + "]";
  };
  std::vector<std::string> comps;
  for (size_t li = 0; li < j.lines().size(); ++li)
    if (j.is_axis(static_cast<int>(li))) comps.push_back(canon_line(static_cast<int>(li)));
  std::sort(comps.begin(), comps.end());
  std::string out = tag;
  for (const auto& c : comps) out += c;
  return out;
}

// ---------------------------------------------------------------------------
// OJTree

OJTree::OJTree(Poset base, std::vector<int> sqle_order) : base_(std::move(base)) {
  const int n = base_.size();
  if (static_cast<int>(sqle_order.size()) != n)
    throw Error("horizontal order must cover all nodes");
  rank_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int x = sqle_order[i];
    if (x < 0 || x >= n || rank_[x] >= 0) throw Error("bad horizontal order");
    rank_[x] = i;
  }
  if (n && !base_.is_join_forest()) throw Error("not a join-forest");
  // (i) x <= y implies x sqle y
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (base_.leq(x, y) && rank_[x] > rank_[y])
        throw Error(cat("order condition (i) fails: ", base_.name(x), " <= ",
                        base_.name(y), " but after it horizontally"));
  // (ii) x<=y, x'<=y', y _|_ y'  =>  (x before x' iff y before y')
  for (int y = 0; y < n; ++y)
    for (int y2 = 0; y2 < n; ++y2) {
      if (y == y2 || base_.comparable(y, y2)) continue;
      for (int x = 0; x < n; ++x) {
        if (!base_.leq(x, y)) continue;
        for (int x2 = 0; x2 < n; ++x2) {
          if (!base_.leq(x2, y2)) continue;
          bool xs = rank_[x] < rank_[x2];
          bool ys = rank_[y] < rank_[y2];
          if (xs != ys)
            throw Error(cat("order condition (ii) fails on (", base_.name(x), ", ",
                            base_.name(x2), ", ", base_.name(y), ", ", base_.name(y2),
                            ")"));
        }
      }
    }
}

std::vector<int> OJTree::horizontal_order() const {
  std::vector<int> out(base_.size());
  for (int x = 0; x < base_.size(); ++x) out[rank_[x]] = x;
  return out;
}

OJTree oj_global_from_local(const Poset& base,
                            const std::map<int, std::vector<std::vector<int>>>& local) {
  const int n = base.size();
  // validate: each entry lists Dir(x) exactly, as disjoint classes
  std::vector<std::vector<std::vector<int>>> dirs(n);
  std::vector<std::vector<int>> dir_index(n, std::vector<int>());
  for (int x = 0; x < n; ++x) {
    auto expect = base.directions(x);
    std::set<std::vector<int>> expect_set;
    for (auto& d : expect) {
      std::sort(d.begin(), d.end());
      expect_set.insert(d);
    }
    std::vector<std::vector<int>> given;
    auto it = local.find(x);
    if (it != local.end()) given = it->second;
    std::set<std::vector<int>> given_set;
    for (auto& d : given) {
      std::sort(d.begin(), d.end());
      given_set.insert(d);
    }
    if (given_set != expect_set)
      throw Error("local order at " + base.name(x) + " does not list the directions");
    dirs[x] = given;
    dir_index[x].assign(n, -1);
    for (size_t i = 0; i < given.size(); ++i)
      for (int z : given[i]) dir_index[x][z] = static_cast<int>(i);
  }
  // derived relation
  std::vector<std::vector<bool>> sq(n, std::vector<bool>(n, false));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (base.leq(x, y)) {
        sq[x][y] = true;
        continue;
      }
      if (base.leq(y, x)) continue;
      auto j = base.join(x, y);
      if (!j) throw Error("nodes in different components");
      int dx = dir_index[*j][x], dy = dir_index[*j][y];
      sq[x][y] = dx < dy;
    }
  // totality and transitivity, then ranks by counting predecessors
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x != y && sq[x][y] == sq[y][x])
        throw Error("derived horizontal relation not total");
      for (int z = 0; z < n; ++z)
        if (sq[x][y] && sq[y][z] && !sq[x][z] && x != y && y != z)
          throw Error("derived horizontal relation not transitive");
    }
  std::vector<std::pair<int, int>> ranked;
  for (int x = 0; x < n; ++x) {
    int r = 0;
    for (int y = 0; y < n; ++y)
      if (y != x && sq[y][x]) ++r;
    ranked.emplace_back(r, x);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> order;
  for (auto& [r, x] : ranked) order.push_back(x);
  return OJTree(base, order);
}

std::map<int, std::vector<std::vector<int>>> oj_local_from_global(const OJTree& j) {
  const Poset& p = j.base();
  std::map<int, std::vector<std::vector<int>>> out;
  for (int x = 0; x < p.size(); ++x) {
    auto dirs = p.directions(x);
    // sort directions by the global order of their members; assert that
    // any-member comparison agrees with all-member comparison
    for (size_t a = 0; a < dirs.size(); ++a)
      for (size_t b = 0; b < dirs.size(); ++b) {
        if (a == b) continue;
        bool first = j.sqle(dirs[a][0], dirs[b][0]);
        for (int u : dirs[a])
          for (int v : dirs[b])
            if (j.sqle(u, v) != first)
              throw Error("direction comparison not uniform at " + p.name(x));
      }
    std::sort(dirs.begin(), dirs.end(), [&](const std::vector<int>& a,
                                            const std::vector<int>& b) {
      return j.rank(a[0]) < j.rank(b[0]);
    });
    out[x] = dirs;
  }
  return out;
}

SOJTree soj_structure(const OJTree& j, const std::vector<int>& enumeration) {
  if (j.empty()) return SOJTree();
  const Poset& p = j.base();
  SJForest structured = sj_structure(p, enumeration, Sort::T);
  std::vector<std::vector<int>> lines = structured.lines();
  std::vector<LineTag> tags(lines.size(), LineTag::Plus);
  for (size_t li = 0; li < lines.size(); ++li) {
    if (structured.is_axis(static_cast<int>(li))) {
      tags[li] = LineTag::Axis;
      continue;
    }
    int x = structured.top_of_line(static_cast<int>(li));
    std::vector<int> central;
    for (int z : structured.line_nodes(structured.line_of(x)))
      if (p.lt(z, x)) central.push_back(z);
    if (central.empty()) continue;  // no central direction: all plus
    std::vector<int> dline = p.down_set(lines[li]);
    std::vector<int> dcentral = p.down_set(central);
    tags[li] = j.rank(dline[0]) < j.rank(dcentral[0]) ? LineTag::Minus : LineTag::Plus;
  }
  return SOJTree(p, j.horizontal_order(), std::move(lines), std::move(tags));
}

// ---------------------------------------------------------------------------
// SOJTree

SOJTree::SOJTree(Poset base, std::vector<int> sqle_order,
                 std::vector<std::vector<int>> lines, std::vector<LineTag> tags)
    : base_(std::move(base)),
      oj_(base_, std::move(sqle_order)),
      lines_(std::move(lines)),
      tags_(std::move(tags)) {
  if (base_.empty()) {
    if (!lines_.empty()) throw Error("empty tree cannot have lines");
    return;
  }
  if (!base_.is_join_tree()) throw Error("not a join-tree: " + base_.join_tree_violation());
  if (lines_.size() != tags_.size()) throw Error("line/tag size mismatch");
  std::vector<int> seen(base_.size(), -1);
  for (size_t li = 0; li < lines_.size(); ++li) {
    auto& ln = lines_[li];
    if (ln.empty()) throw Error("empty line");
    std::sort(ln.begin(), ln.end(), [&](int a, int b) {
      if (a == b) return false;
      if (!base_.comparable(a, b)) throw Error("line not linearly ordered");
      return base_.lt(a, b);
    });
    if (!base_.is_line(ln)) throw Error("line not convex");
    for (int x : ln) {
      if (seen[x] >= 0) throw Error("node in two lines");
      seen[x] = static_cast<int>(li);
    }
  }
  for (int x = 0; x < base_.size(); ++x)
    if (seen[x] < 0) throw Error("node in no line: " + base_.name(x));
  line_of_ = std::move(seen);
  compute_derived();
}

void SOJTree::compute_derived() {
  const int n = base_.size();
  const int m = static_cast<int>(lines_.size());
  tops_.assign(m, -1);
  topped_.assign(n, {});
  axis_ = -1;
  for (int li = 0; li < m; ++li) {
    int mx = lines_[li].back();
    int top = -1;
    for (int z = 0; z < n; ++z)
      if (base_.lt(mx, z) && (top < 0 || base_.lt(z, top))) top = z;
    tops_[li] = top;
    if (top >= 0) {
      topped_[top].push_back(li);
      if (tags_[li] == LineTag::Axis) throw Error("axis tag on a topped line");
    } else {
      if (axis_ >= 0) throw Error("two topless lines");
      if (tags_[li] != LineTag::Axis) throw Error("topless line not tagged as axis");
      axis_ = li;
    }
  }
  if (axis_ < 0) throw Error("no axis line");
  for (int x : lines_[axis_])
    for (int z = 0; z < n; ++z)
      if (base_.lt(x, z) && line_of_[z] != axis_)
        throw Error("axis not upwards closed");
  // finite top chains
  for (int x = 0; x < n; ++x) {
    int li = line_of_[x];
    std::set<int> walked;
    while (tops_[li] >= 0) {
      if (!walked.insert(li).second) throw Error("cyclic top chain");
      li = line_of_[tops_[li]];
    }
  }
  // placement condition at each node: minus lines before the central
  // direction before plus lines
  auto down = [&](const std::vector<int>& xs) { return base_.down_set(xs); };
  auto before = [&](const std::vector<int>& a, const std::vector<int>& b) {
    bool first = oj_.sqle(a[0], b[0]);
    for (int u : a)
      for (int v : b)
        if (oj_.sqle(u, v) != first) throw Error("direction comparison not uniform");
    return first;
  };
  for (int x = 0; x < n; ++x) {
    std::vector<int> central;
    for (int z : lines_[line_of_[x]])
      if (base_.lt(z, x)) central.push_back(z);
    std::vector<int> central_dir = central.empty() ? std::vector<int>() : down(central);
    for (int li : topped_[x]) {
      if (tags_[li] == LineTag::Axis) continue;
      std::vector<int> d = down(lines_[li]);
      if (!central_dir.empty()) {
        bool minus_side = before(d, central_dir);
        if (tags_[li] == LineTag::Minus && !minus_side)
          throw Error("minus line after the central direction at " + base_.name(x));
        if (tags_[li] == LineTag::Plus && minus_side)
          throw Error("plus line before the central direction at " + base_.name(x));
      }
      for (int lj : topped_[x]) {
        if (tags_[li] == LineTag::Minus && tags_[lj] == LineTag::Plus &&
            !before(down(lines_[li]), down(lines_[lj])))
          throw Error("minus line after a plus line at " + base_.name(x));
      }
    }
  }
}

SOJTree SOJTree::renamed(const std::string& prefix) const {
  if (empty()) return *this;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < base_.size(); ++i) names.push_back(prefix + base_.name(i));
  for (int a = 0; a < base_.size(); ++a)
    for (int b = 0; b < base_.size(); ++b)
      if (a != b && base_.leq(a, b))
        pairs.emplace_back(prefix + base_.name(a), prefix + base_.name(b));
  Poset p = Poset::from_relation(names, pairs);
  std::vector<int> order(base_.size());
  for (int x = 0; x < base_.size(); ++x)
    order[oj_.rank(x)] = p.index_or_throw(prefix + base_.name(x));
  std::vector<std::vector<int>> lines(lines_.size());
  for (size_t li = 0; li < lines_.size(); ++li)
    for (int x : lines_[li])
      lines[li].push_back(p.index_or_throw(prefix + base_.name(x)));
  return SOJTree(std::move(p), std::move(order), std::move(lines), tags_);
}

std::string SOJTree::to_text() const {
  std::ostringstream os;
  os << base_.to_text();
  for (size_t li = 0; li < lines_.size(); ++li) {
    switch (tags_[li]) {
      case LineTag::Axis: os << "axis:"; break;
      case LineTag::Minus: os << "uminus:"; break;
      case LineTag::Plus: os << "uplus:"; break;
    }
    for (int x : lines_[li]) os << " " << base_.name(x);
    os << "\n";
  }
  os << "sqle:";
  for (int x : oj_.horizontal_order()) os << " " << base_.name(x);
  os << "\n";
  return os.str();
}

SOJTree SOJTree::parse(const std::string& text) {
  std::ostringstream poset_text;
  std::vector<std::pair<LineTag, std::vector<std::string>>> line_recs;
  std::vector<std::string> sqle_names;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    auto record = [&](const char* key) {
      return body.rfind(key, 0) == 0;
    };
    if (record("axis:"))
      line_recs.emplace_back(LineTag::Axis, split_ws(body.substr(5)));
    else if (record("uminus:"))
      line_recs.emplace_back(LineTag::Minus, split_ws(body.substr(7)));
    else if (record("uplus:"))
      line_recs.emplace_back(LineTag::Plus, split_ws(body.substr(6)));
    else if (record("line:"))
      throw ParseError("use uminus:/uplus: records for ordered trees", lineno);
    else if (record("sqle:"))
      sqle_names = split_ws(body.substr(5));
    else
      poset_text << body << "\n";
  }
  Poset p = Poset::parse(poset_text.str());
  if (p.empty() && line_recs.empty()) return SOJTree();
  std::vector<std::vector<int>> lines;
  std::vector<LineTag> tags;
  for (auto& [tag, names] : line_recs) {
    std::vector<int> ln;
    for (const auto& nm : names) ln.push_back(p.index_or_throw(nm));
    lines.push_back(std::move(ln));
    tags.push_back(tag);
  }
  std::vector<int> order;
  for (const auto& nm : sqle_names) order.push_back(p.index_or_throw(nm));
  return SOJTree(std::move(p), std::move(order), std::move(lines), std::move(tags));
}

// ---------------------------------------------------------------------------
// JoinHedge

JoinHedge::JoinHedge(Poset base, std::vector<int> sqle_order,
                     std::vector<std::vector<int>> lines)
    : base_(std::move(base)), lines_(std::move(lines)) {
  // delegate the order checks to OJTree, the structuring to SJForest
  OJTree check_order(base_, sqle_order);
  SJForest check_lines(base_, lines_, Sort::F);
  lines_ = check_lines.lines();
  rank_.assign(base_.size(), -1);
  for (size_t i = 0; i < sqle_order.size(); ++i) rank_[sqle_order[i]] = static_cast<int>(i);
}

std::vector<std::vector<int>> JoinHedge::ordered_components() const {
  auto comps = base_.components();
  for (const auto& a : comps)
    for (const auto& b : comps) {
      if (&a == &b) continue;
      bool first = rank_[a[0]] < rank_[b[0]];
      for (int u : a)
        for (int v : b)
          if ((rank_[u] < rank_[v]) != first)
            throw Error("hedge components interleave horizontally");
    }
  std::sort(comps.begin(), comps.end(), [&](const std::vector<int>& a,
                                            const std::vector<int>& b) {
    return rank_[a[0]] < rank_[b[0]];
  });
  return comps;
}

// ---------------------------------------------------------------------------
// the F'' algebra

namespace {

std::pair<SOJTree, SOJTree> soj_disjoint(const SOJTree& a, const SOJTree& b) {
  std::set<std::string> names(a.base().names().begin(), a.base().names().end());
  bool clash = false;
  for (const auto& n : b.base().names())
    if (names.count(n)) clash = true;
  if (!clash) return {a, b};
  return {a.renamed("l:"), b.renamed("r:")};
}

}  // namespace

SOJTree soj_concat(const SOJTree& a_in, const SOJTree& b_in) {
  if (a_in.empty()) return b_in;
  if (b_in.empty()) return a_in;
  auto [a, b] = soj_disjoint(a_in, b_in);
  const int na = a.base().size(), nb = b.base().size();
  std::vector<std::string> names;
  for (const auto& n : a.base().names()) names.push_back(n);
  for (const auto& n : b.base().names()) names.push_back(n);
  std::vector<std::pair<std::string, std::string>> pairs;
  append_order(a.base(), pairs);
  append_order(b.base(), pairs);
  for (int x = 0; x < na; ++x)
    for (int y : b.lines()[b.axis()])
      pairs.emplace_back(a.base().name(x), b.base().name(y));
  Poset p = Poset::from_cover(names, pairs);

  // indices in the merged poset; side tells which factor a node came from
  std::vector<int> side(p.size()), back(p.size());
  for (int i = 0; i < p.size(); ++i) {
    const std::string& nm = p.name(i);
    if (auto ia = a.base().index(nm); ia) {
      side[i] = 1;
      back[i] = *ia;
    } else {
      side[i] = 2;
      back[i] = *b.base().index(nm);
    }
  }
  auto in_b_downset_tag = [&](int join_b, int y_b, LineTag want) {
    // y (in b) lies in the down-set of a line of b topped by join_b with
    // the wanted tag
    for (int li : b.lines_topped_by(join_b)) {
      if (b.tag(li) != want) continue;
      for (int z : b.base().down_set(b.lines()[li]))
        if (z == y_b) return true;
    }
    return false;
  };
  std::vector<std::vector<bool>> sq(p.size(), std::vector<bool>(p.size(), false));
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      if (x == y) {
        sq[x][y] = true;
        continue;
      }
      if (p.leq(x, y)) {
        sq[x][y] = true;
        continue;
      }
      if (side[x] == side[y]) {
        sq[x][y] = side[x] == 1 ? a.sqle(back[x], back[y]) : b.sqle(back[x], back[y]);
        continue;
      }
      if (p.leq(y, x)) continue;
      auto j = p.join(x, y);
      if (!j) throw Error("concatenation without joins");
      if (side[x] == 1 && side[y] == 2)
        sq[x][y] = in_b_downset_tag(back[*j], back[y], LineTag::Plus);
      else
        sq[x][y] = in_b_downset_tag(back[*j], back[x], LineTag::Minus);
    }
  std::vector<std::pair<int, int>> ranked;
  for (int x = 0; x < p.size(); ++x) {
    int r = 0;
    for (int y = 0; y < p.size(); ++y)
      if (y != x && sq[y][x] && !sq[x][y]) ++r;
    ranked.emplace_back(r, x);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> order;
  for (auto& [r, x] : ranked) order.push_back(x);

  std::vector<std::vector<int>> lines;
  std::vector<LineTag> tags;
  auto push_lines = [&](const SOJTree& j, bool merge_axis) {
    for (size_t li = 0; li < j.lines().size(); ++li) {
      if (merge_axis && static_cast<int>(li) == j.axis()) continue;
      std::vector<int> ln;
      for (int x : j.lines()[li]) ln.push_back(p.index_or_throw(j.base().name(x)));
      lines.push_back(std::move(ln));
      tags.push_back(j.tag(static_cast<int>(li)));
    }
  };
  std::vector<int> axis;
  for (int x : a.lines()[a.axis()]) axis.push_back(p.index_or_throw(a.base().name(x)));
  for (int x : b.lines()[b.axis()]) axis.push_back(p.index_or_throw(b.base().name(x)));
  lines.push_back(std::move(axis));
  tags.push_back(LineTag::Axis);
  push_lines(a, true);
  push_lines(b, true);
  return SOJTree(std::move(p), std::move(order), std::move(lines), std::move(tags));
}

namespace {

JoinHedge rename_hedge(const JoinHedge& h, const std::string& prefix) {
  if (h.empty()) return h;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  const Poset& p0 = h.base();
  for (int i = 0; i < p0.size(); ++i) names.push_back(prefix + p0.name(i));
  for (int a = 0; a < p0.size(); ++a)
    for (int b = 0; b < p0.size(); ++b)
      if (a != b && p0.leq(a, b)) pairs.emplace_back(prefix + p0.name(a), prefix + p0.name(b));
  Poset p = Poset::from_relation(names, pairs);
  std::vector<std::pair<int, int>> ranked;
  for (int x = 0; x < p0.size(); ++x) ranked.emplace_back(0, x);
  for (int x = 0; x < p0.size(); ++x)
    for (int y = 0; y < p0.size(); ++y)
      if (x != y && h.sqle(x, y)) ++ranked[y].first;
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> order;
  for (auto& [r, x] : ranked) order.push_back(p.index_or_throw(prefix + p0.name(x)));
  std::vector<std::vector<int>> lines;
  for (const auto& ln : h.lines()) {
    std::vector<int> out;
    for (int x : ln) out.push_back(p.index_or_throw(prefix + p0.name(x)));
    lines.push_back(std::move(out));
  }
  return JoinHedge(std::move(p), std::move(order), std::move(lines));
}

std::pair<JoinHedge, JoinHedge> hedge_disjoint(const JoinHedge& a, const JoinHedge& b) {
  std::set<std::string> names(a.base().names().begin(), a.base().names().end());
  bool clash = false;
  for (const auto& n : b.base().names())
    if (names.count(n)) clash = true;
  if (!clash) return {a, b};
  return {rename_hedge(a, "l:"), rename_hedge(b, "r:")};
}

}  // namespace

SOJTree soj_ext2(const JoinHedge& h1_in, const JoinHedge& h2_in, const std::string& u) {
  auto [h1, h2] = hedge_disjoint(h1_in, h2_in);
  if ((!h1.empty() && h1.base().index(u)) || (!h2.empty() && h2.base().index(u)))
    throw Error("ext node id already used: " + u);
  std::vector<std::string> names{u};
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const JoinHedge* h : {&h1, &h2}) {
    if (h->empty()) continue;
    for (const auto& n : h->base().names()) names.push_back(n);
    append_order(h->base(), pairs);
    for (int x = 0; x < h->base().size(); ++x) pairs.emplace_back(h->base().name(x), u);
  }
  Poset p = Poset::from_cover(names, pairs);
  std::vector<int> order;
  auto append_in_order = [&](const JoinHedge& h) {
    if (h.empty()) return;
    std::vector<std::pair<int, int>> ranked;
    for (int x = 0; x < h.base().size(); ++x) {
      int r = 0;
      for (int y = 0; y < h.base().size(); ++y)
        if (y != x && h.sqle(y, x)) ++r;
      ranked.emplace_back(r, x);
    }
    std::sort(ranked.begin(), ranked.end());
    for (auto& [r, x] : ranked) order.push_back(p.index_or_throw(h.base().name(x)));
  };
  append_in_order(h1);
  append_in_order(h2);
  order.push_back(p.index_or_throw(u));
  std::vector<std::vector<int>> lines{{p.index_or_throw(u)}};
  std::vector<bool> from_h1{false};
  for (const JoinHedge* h : {&h1, &h2}) {
    for (const auto& ln : h->lines()) {
      std::vector<int> out;
      for (int x : ln) out.push_back(p.index_or_throw(h->base().name(x)));
      lines.push_back(std::move(out));
      from_h1.push_back(h == &h1);
    }
  }
  // Tag assignment: forced against the central direction where one exists;
  // at the new root the first hedge goes left of the second; the remaining
  // interior choices are free and default to plus (cf. the structuring
  // construction).
  std::vector<int> rank(p.size(), 0);
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::vector<int> line_of(p.size(), -1);
  for (size_t li = 0; li < lines.size(); ++li)
    for (int x : lines[li]) line_of[x] = static_cast<int>(li);
  int u_idx = p.index_or_throw(u);
  std::vector<LineTag> tags(lines.size(), LineTag::Plus);
  tags[0] = LineTag::Axis;
  for (size_t li = 1; li < lines.size(); ++li) {
    int mx = lines[li].back();
    int top = -1;
    for (int z = 0; z < p.size(); ++z)
      if (p.lt(mx, z) && (top < 0 || p.lt(z, top))) top = z;
    if (top == u_idx) {
      tags[li] = from_h1[li] ? LineTag::Minus : LineTag::Plus;
      continue;
    }
    std::vector<int> central;
    for (int z : lines[line_of[top]])
      if (p.lt(z, top)) central.push_back(z);
    if (central.empty()) continue;  // free choice: plus
    std::vector<int> dline = p.down_set(lines[li]);
    std::vector<int> dcentral = p.down_set(central);
    tags[li] = rank[dline[0]] < rank[dcentral[0]] ? LineTag::Minus : LineTag::Plus;
  }
  return SOJTree(std::move(p), std::move(order), std::move(lines), std::move(tags));
}

JoinHedge hedge_concat(const JoinHedge& a_in, const JoinHedge& b_in) {
  if (a_in.empty()) return b_in;
  if (b_in.empty()) return a_in;
  auto [a, b] = hedge_disjoint(a_in, b_in);
  std::vector<std::string> names;
  for (const auto& n : a.base().names()) names.push_back(n);
  for (const auto& n : b.base().names()) names.push_back(n);
  std::vector<std::pair<std::string, std::string>> pairs;
  append_order(a.base(), pairs);
  append_order(b.base(), pairs);
  Poset p = Poset::from_cover(names, pairs);
  std::vector<int> order;
  for (const JoinHedge* h : {&a, &b}) {
    std::vector<std::pair<int, int>> ranked;
    for (int x = 0; x < h->base().size(); ++x) {
      int r = 0;
      for (int y = 0; y < h->base().size(); ++y)
        if (y != x && h->sqle(y, x)) ++r;
      ranked.emplace_back(r, x);
    }
    std::sort(ranked.begin(), ranked.end());
    for (auto& [r, x] : ranked) order.push_back(p.index_or_throw(h->base().name(x)));
  }
  std::vector<std::vector<int>> lines;
  for (const JoinHedge* h : {&a, &b})
    for (const auto& ln : h->lines()) {
      std::vector<int> out;
      for (int x : ln) out.push_back(p.index_or_throw(h->base().name(x)));
      lines.push_back(std::move(out));
    }
  return JoinHedge(std::move(p), std::move(order), std::move(lines));
}

JoinHedge soj_mkh(const SOJTree& j) {
  if (j.empty()) return JoinHedge();
  std::vector<int> order;
  for (int x : j.ordered().horizontal_order()) order.push_back(x);
  return JoinHedge(j.base(), order, j.lines());
}

// ---------------------------------------------------------------------------
// values of finite terms over F''

namespace {

struct SojValue {
  Poset poset;
  std::vector<int> order;
  std::vector<std::vector<int>> lines;
  std::vector<LineTag> tags;
};

SojValue build_soj_value(const TermPositions& tp) {
  auto sym = tp.symbol_fn();
  ValueCore vc = ValueCore::build(tp);
  const int n = vc.poset.size();

  // horizontal order: <= forces sqle, otherwise the case analysis
  std::map<std::string, int> node_of_pos;
  std::vector<std::string> pos_of_node(n);
  for (const auto& u : tp.ext_positions) {
    int idx = vc.poset.index_or_throw(tp.name_of.at(u));
    node_of_pos[u] = idx;
    pos_of_node[idx] = u;
  }
  std::vector<std::vector<bool>> sq(n, std::vector<bool>(n, false));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) {
        sq[x][y] = true;
      } else if (vc.poset.leq(x, y)) {
        sq[x][y] = true;
      } else if (vc.poset.leq(y, x)) {
        sq[x][y] = false;
      } else {
        sq[x][y] = posval::sqle_incomparable(sym, pos_of_node[x], pos_of_node[y]);
      }
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      if (sq[x][y] == sq[y][x])
        throw Error(cat("horizontal order not total at ", pos_of_node[x], ", ",
                        pos_of_node[y]));
      for (int z = 0; z < n; ++z)
        if (z != x && z != y && sq[x][y] && sq[y][z] && !sq[x][z])
          throw Error("horizontal order not transitive");
    }
  std::vector<int> order;
  for (int x = 0; x < n; ++x) order.push_back(x);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return a != b && sq[a][b]; });

  // line tags: the topless class is the axis; other classes hang under the
  // first or second son of their ceiling ext occurrence
  std::vector<LineTag> tags(vc.lines.size(), LineTag::Axis);
  for (size_t li = 0; li < vc.lines.size(); ++li) {
    const std::string& rep = vc.class_rep[li];
    // ceiling: the nearest ext occurrence on rep's strict prefix chain
    std::optional<std::string> ceiling;
    for (size_t len = rep.size(); len-- > 0;) {
      std::string w = rep.substr(0, len);
      if (sym(w) == "ext") {
        ceiling = w;
        break;
      }
    }
    if (!ceiling) {
      tags[li] = LineTag::Axis;
      continue;
    }
    char branch = rep[ceiling->size()];
    LineTag want = branch == '1' ? LineTag::Minus : LineTag::Plus;
    // all members hang under the same son
    for (int node : vc.lines[li]) {
      const std::string& w = pos_of_node[node];
      if (!pos_is_prefix(*ceiling + branch, w))
        throw Error("line members under different sons of their top");
    }
    tags[li] = want;
  }
  return {std::move(vc.poset), std::move(order), std::move(vc.lines), std::move(tags)};
}

}  // namespace

SOJTree val_soj(const FiniteTerm& t) {
  if (sort_of(Signature::sojt(), t) != Sort::T) throw Error("val_soj needs sort t");
  TermPositions tp = TermPositions::build(t);
  if (tp.ext_positions.empty()) return SOJTree();
  SojValue v = build_soj_value(tp);
  return SOJTree(std::move(v.poset), std::move(v.order), std::move(v.lines),
                 std::move(v.tags));
}

JoinHedge val_soj_hedge(const FiniteTerm& t) {
  if (sort_of(Signature::sojt(), t) != Sort::H) throw Error("val_soj_hedge needs sort h");
  TermPositions tp = TermPositions::build(t);
  if (tp.ext_positions.empty()) return JoinHedge();
  SojValue v = build_soj_value(tp);
  return JoinHedge(std::move(v.poset), std::move(v.order), std::move(v.lines));
}

// ---------------------------------------------------------------------------
// canonical forms

std::string soj_canonical(const SOJTree& j) {
  if (j.empty()) return "[]";
  // The minus/plus split of the lines topped by x is semantic exactly when
  // x has a central direction (where it is forced) or x is the axis
  // minimum (where later left-concatenations expose it); elsewhere it is a
  // representation choice and the canonical form merges the two sides.
  std::function<std::string(int)> canon_line = [&](int li) -> std::string {
    std::string s = "[";
    for (int x : j.lines()[li]) {
      std::vector<int> minus, plus;
      for (int sub : j.lines_topped_by(x))
        (j.tag(sub) == LineTag::Minus ? minus : plus).push_back(sub);
      auto by_rank = [&](int a, int b) {
        return j.ordered().rank(j.lines()[a][0]) < j.ordered().rank(j.lines()[b][0]);
      };
      std::sort(minus.begin(), minus.end(), by_rank);
      std::sort(plus.begin(), plus.end(), by_rank);
      bool has_central = false;
      for (int z : j.lines()[j.line_of(x)])
        if (j.base().lt(z, x)) has_central = true;
      bool split_matters = has_central || x == j.lines()[j.axis()].front();
      s += "(";
      for (int sub : minus) s += canon_line(sub);
      if (split_matters) s += ";";
      for (int sub : plus) s += canon_line(sub);
      s += ")";
    }
    return s + "]";
  };
  return canon_line(j.axis());
}

std::string hedge_canonical(const JoinHedge& h) {
  if (h.empty()) return "{}";
  // per component: SJ-structure plus, per node, the horizontal order of
  // its directions with a marker for the central one
  const Poset& p = h.base();
  std::vector<int> line_of(p.size(), -1), tops(h.lines().size(), -1);
  for (size_t li = 0; li < h.lines().size(); ++li)
    for (int x : h.lines()[li]) line_of[x] = static_cast<int>(li);
  for (size_t li = 0; li < h.lines().size(); ++li) {
    int mx = h.lines()[li].back();
    int top = -1;
    for (int z = 0; z < p.size(); ++z)
      if (p.lt(mx, z) && (top < 0 || p.lt(z, top))) top = z;
    tops[li] = top;
  }
  auto rank_of_line = [&](int li) {
    int r = p.size();
    for (int x : h.lines()[li]) {
      int xr = 0;
      for (int y = 0; y < p.size(); ++y)
        if (y != x && h.sqle(y, x)) ++xr;
      r = std::min(r, xr);
    }
    return r;
  };
  std::function<std::string(int)> canon_line = [&](int li) -> std::string {
    std::string s = "[";
    for (int x : h.lines()[li]) {
      // directions at x in horizontal order; the central one is "*"
      struct Entry {
        int rank;
        std::string text;
      };
      std::vector<Entry> entries;
      for (size_t lj = 0; lj < h.lines().size(); ++lj)
        if (tops[lj] == x)
          entries.push_back({rank_of_line(static_cast<int>(lj)),
                             canon_line(static_cast<int>(lj))});
      bool has_central = false;
      for (int z : h.lines()[line_of[x]])
        if (p.lt(z, x)) has_central = true;
      if (has_central) {
        int zr = 0;
        int z = h.lines()[line_of[x]][0];
        for (int y = 0; y < p.size(); ++y)
          if (y != z && h.sqle(y, z)) ++zr;
        entries.push_back({zr, "*"});
      }
      std::sort(entries.begin(), entries.end(),
                [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
      s += "(";
      for (const auto& e : entries) s += e.text;
      s += ")";
    }
    return s + "]";
  };
  std::string out = "{";
  for (const auto& comp : h.ordered_components()) {
    // the component's topless line
    for (size_t li = 0; li < h.lines().size(); ++li) {
      if (tops[li] >= 0) continue;
      if (std::find(comp.begin(), comp.end(), h.lines()[li][0]) != comp.end())
        out += canon_line(static_cast<int>(li));
    }
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// lazy values

LazyTermValue::LazyTermValue(TermAutomaton a) : a_(std::move(a)) {
  auto issues = a_.validate();
  if (!issues.empty()) throw Error("invalid term automaton: " + issues[0]);
}

std::string LazyTermValue::symbol(const std::string& pos) const {
  auto s = a_.symbol_at(pos);
  if (!s) throw Error("position falls off the term: " + pos);
  return *s;
}

bool LazyTermValue::is_node(const std::string& u) const {
  return a_.symbol_at(u) == std::optional<std::string>("ext");
}

bool LazyTermValue::leq(const std::string& u, const std::string& v) const {
  if (!is_node(u) || !is_node(v)) throw Error("leq: not ext occurrences");
  auto sym = [this](const std::string& p) { return symbol(p); };
  return posval::leq_sons(sym, u, v);
}

bool LazyTermValue::equiv(const std::string& u, const std::string& v) const {
  auto sym = [this](const std::string& p) { return symbol(p); };
  return posval::equiv(sym, u, v);
}

std::optional<std::string> LazyTermValue::join(const std::string& u,
                                               const std::string& v) const {
  auto sym = [this](const std::string& p) { return symbol(p); };
  return posval::join(sym, u, v, leq(u, v), leq(v, u));
}

bool LazyTermValue::sqle(const std::string& u, const std::string& v) const {
  if (u == v) return true;
  if (leq(u, v)) return true;
  if (leq(v, u)) return false;
  auto sym = [this](const std::string& p) { return symbol(p); };
  return posval::sqle_incomparable(sym, u, v);
}

std::vector<std::string> LazyTermValue::enumerate_nodes(size_t n) const {
  std::vector<std::string> out;
  std::deque<std::string> queue{""};
  while (!queue.empty() && out.size() < n) {
    std::string pos = queue.front();
    queue.pop_front();
    auto sym = a_.symbol_at(pos);
    if (!sym) continue;
    if (*sym == "ext") out.push_back(pos);
    auto q = a_.state_at(pos);
    for (size_t i = 0; i < a_.at(*q).children.size(); ++i)
      queue.push_back(pos + static_cast<char>('1' + i));
  }
  return out;
}

namespace {

std::vector<std::string> collect_ext_positions(const TermAutomaton& a, int max_len) {
  std::vector<std::string> out;
  std::deque<std::string> queue{""};
  while (!queue.empty()) {
    std::string pos = queue.front();
    queue.pop_front();
    if (static_cast<int>(pos.size()) > max_len) continue;
    auto sym = a.symbol_at(pos);
    if (!sym) continue;
    if (*sym == "ext") out.push_back(pos);
    auto q = a.state_at(pos);
    for (size_t i = 0; i < a.at(*q).children.size(); ++i)
      queue.push_back(pos + static_cast<char>('1' + i));
  }
  return out;
}

}  // namespace

SJForest LazyTermValue::materialize_sj(int max_len) const {
  auto positions = collect_ext_positions(a_, max_len);
  Sort s = a_.state_sort(a_.root());
  if (positions.empty())
    return s == Sort::F ? SJForest::empty_forest() : SJForest::empty_tree();
  std::vector<std::string> names;
  for (const auto& u : positions) names.push_back("@" + u);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& u : positions)
    for (const auto& v : positions)
      if (u != v && leq(u, v)) pairs.emplace_back("@" + u, "@" + v);
  Poset p = Poset::from_relation(names, pairs);
  std::vector<std::vector<int>> lines;
  std::vector<std::string> reps;
  for (const auto& u : positions) {
    int found = -1;
    for (size_t i = 0; i < reps.size(); ++i)
      if (equiv(u, reps[i])) {
        found = static_cast<int>(i);
        break;
      }
    if (found < 0) {
      found = static_cast<int>(reps.size());
      reps.push_back(u);
      lines.push_back({});
    }
    lines[found].push_back(p.index_or_throw("@" + u));
  }
  // a truncated forest can have several components even for sort t
  Sort eff = s == Sort::T && p.components().size() <= 1 ? Sort::T : Sort::F;
  return SJForest(std::move(p), std::move(lines), eff);
}

SOJTree LazyTermValue::materialize_soj(int max_len) const {
  auto positions = collect_ext_positions(a_, max_len);
  if (positions.empty()) return SOJTree();
  auto sym = [this](const std::string& p) { return symbol(p); };
  std::vector<std::string> names;
  for (const auto& u : positions) names.push_back("@" + u);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& u : positions)
    for (const auto& v : positions)
      if (u != v && leq(u, v)) pairs.emplace_back("@" + u, "@" + v);
  Poset p = Poset::from_relation(names, pairs);
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& u : positions) {
    int r = 0;
    for (const auto& v : positions)
      if (v != u && sqle(v, u) && !sqle(u, v)) ++r;
    ranked.emplace_back(r, u);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> order;
  for (auto& [r, u] : ranked) order.push_back(p.index_or_throw("@" + u));
  std::vector<std::vector<int>> lines;
  std::vector<LineTag> tags;
  std::vector<std::string> reps;
  for (const auto& u : positions) {
    int found = -1;
    for (size_t i = 0; i < reps.size(); ++i)
      if (equiv(u, reps[i])) {
        found = static_cast<int>(i);
        break;
      }
    if (found < 0) {
      found = static_cast<int>(reps.size());
      reps.push_back(u);
      lines.push_back({});
      // nearest ext occurrence above the class representative
      LineTag tag = LineTag::Axis;
      for (size_t len = u.size(); len-- > 0;) {
        std::string w = u.substr(0, len);
        if (sym(w) == "ext") {
          tag = u[len] == '1' ? LineTag::Minus : LineTag::Plus;
          break;
        }
      }
      tags.push_back(tag);
    }
    lines[found].push_back(p.index_or_throw("@" + u));
  }
  return SOJTree(std::move(p), std::move(order), std::move(lines), std::move(tags));
}

}  // namespace gentrees

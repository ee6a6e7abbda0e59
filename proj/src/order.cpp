#include "gentrees/order.hpp"

#include <algorithm>
#include <map>

namespace gentrees {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  auto dup = std::adjacent_find(names.begin(), names.end());
  if (dup != names.end()) throw Error("duplicate node id: " + *dup);
  return names;
}

}  // namespace

Poset Poset::from_cover(std::vector<std::string> names,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  Poset p;
  p.names_ = sorted_unique(std::move(names));
  const int n = p.size();
  p.leq_.assign(static_cast<size_t>(n) * n, false);
  for (int i = 0; i < n; ++i) p.leq_[p.idx(i, i)] = true;
  for (const auto& [a, b] : pairs) {
    int x = p.index_or_throw(a);
    int y = p.index_or_throw(b);
    if (x == y) throw Error("node below itself: " + a + " < " + b);
    p.leq_[p.idx(x, y)] = true;
  }
  p.close_transitively();
  p.check_partial_order();
  return p;
}

Poset Poset::from_relation(std::vector<std::string> names,
                           const std::vector<std::pair<std::string, std::string>>& pairs) {
  Poset p;
  p.names_ = sorted_unique(std::move(names));
  const int n = p.size();
  p.leq_.assign(static_cast<size_t>(n) * n, false);
  for (int i = 0; i < n; ++i) p.leq_[p.idx(i, i)] = true;
  for (const auto& [a, b] : pairs)
    p.leq_[p.idx(p.index_or_throw(a), p.index_or_throw(b))] = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (p.leq(x, y))
        for (int z = 0; z < n; ++z)
          if (p.leq(y, z) && !p.leq(x, z))
            throw Error(cat("relation not transitive: ", p.name(x), " <= ", p.name(y),
                            " <= ", p.name(z), " but not ", p.name(x), " <= ", p.name(z)));
  p.check_partial_order();
  return p;
}

Poset Poset::parse(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (seen.insert(s).second) names.push_back(s);
  };
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (toks.size() == 2 && toks[0] == "node") {
      add(toks[1]);
    } else if (toks.size() == 3 && toks[1] == "<") {
      add(toks[0]);
      add(toks[2]);
      pairs.emplace_back(toks[0], toks[2]);
    } else {
      throw ParseError("expected 'a < b' or 'node a', got: " + line, lineno);
    }
  }
  return from_cover(std::move(names), pairs);
}

std::string Poset::to_text() const {
  std::ostringstream os;
  std::vector<bool> mentioned(size(), false);
  for (const auto& [x, y] : covers()) {
    os << name(x) << " < " << name(y) << "\n";
    mentioned[x] = mentioned[y] = true;
  }
  for (int i = 0; i < size(); ++i)
    if (!mentioned[i]) os << "node " << name(i) << "\n";
  return os.str();
}

std::optional<int> Poset::index(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

int Poset::index_or_throw(const std::string& name) const {
  auto i = index(name);
  if (!i) throw Error("unknown node id: " + name);
  return *i;
}

void Poset::close_transitively() {
  const int n = size();
  for (int k = 0; k < n; ++k)
    for (int x = 0; x < n; ++x)
      if (leq(x, k))
        for (int y = 0; y < n; ++y)
          if (leq(k, y)) leq_[idx(x, y)] = true;
}

void Poset::check_partial_order() const {
  const int n = size();
  for (int x = 0; x < n; ++x) {
    if (!leq(x, x)) throw Error("relation not reflexive at " + name(x));
    for (int y = x + 1; y < n; ++y)
      if (leq(x, y) && leq(y, x))
        throw Error("antisymmetry fails: " + name(x) + " and " + name(y));
  }
}

std::optional<int> Poset::join(int x, int y) const {
  std::optional<int> best;
  for (int z = 0; z < size(); ++z) {
    if (!leq(x, z) || !leq(y, z)) continue;
    if (!best || leq(z, *best)) {
      // candidate; make sure it is below every other upper bound
      best = z;
    }
  }
  if (!best) return std::nullopt;
  for (int z = 0; z < size(); ++z)
    if (leq(x, z) && leq(y, z) && !leq(*best, z)) return std::nullopt;
  return best;
}

bool Poset::is_join_tree() const { return join_tree_violation().empty(); }

std::string Poset::join_tree_violation() const {
  const int n = size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (leq(x, y) && leq(x, z) && !comparable(y, z))
          return cat("up-set of ", name(x), " not a chain: ", name(y), " vs ", name(z));
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (!join(x, y)) return cat("no join for ", name(x), " and ", name(y));
  return "";
}

bool Poset::is_join_forest() const {
  const int n = size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (leq(x, y) && leq(x, z) && !comparable(y, z)) return false;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      bool bounded = false;
      for (int z = 0; z < n && !bounded; ++z) bounded = leq(x, z) && leq(y, z);
      if (bounded && !join(x, y)) return false;
    }
  return true;
}

bool Poset::is_line(const std::vector<int>& ys) const {
  for (size_t i = 0; i < ys.size(); ++i)
    for (size_t j = i + 1; j < ys.size(); ++j)
      if (!comparable(ys[i], ys[j])) return false;
  std::vector<bool> in(size(), false);
  for (int y : ys) in[y] = true;
  for (int a : ys)
    for (int b : ys)
      if (lt(a, b))
        for (int z = 0; z < size(); ++z)
          if (!in[z] && lt(a, z) && lt(z, b)) return false;
  return true;
}

std::vector<std::vector<int>> Poset::directions(int x) const {
  if (!is_join_forest()) throw Error("directions: not a join-forest");
  std::vector<int> below;
  for (int z = 0; z < size(); ++z)
    if (lt(z, x)) below.push_back(z);
  std::vector<std::vector<int>> classes;
  std::vector<int> cls(below.size(), -1);
  for (size_t i = 0; i < below.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = static_cast<int>(classes.size());
    classes.push_back({below[i]});
    for (size_t j = i + 1; j < below.size(); ++j) {
      if (cls[j] >= 0) continue;
      auto jn = join(below[i], below[j]);
      if (jn && lt(*jn, x)) {
        cls[j] = cls[i];
        classes[cls[i]].push_back(below[j]);
      }
    }
  }
  return classes;
}

std::vector<int> Poset::down_set(const std::vector<int>& xs) const {
  std::vector<bool> in(size(), false);
  for (int x : xs)
    for (int z = 0; z < size(); ++z)
      if (leq(z, x)) in[z] = true;
  std::vector<int> out;
  for (int z = 0; z < size(); ++z)
    if (in[z]) out.push_back(z);
  return out;
}

std::vector<int> Poset::up_set(int x) const {
  std::vector<int> out;
  for (int z = 0; z < size(); ++z)
    if (leq(x, z)) out.push_back(z);
  return out;
}

std::vector<std::pair<int, int>> Poset::covers() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < size(); ++x)
    for (int y = 0; y < size(); ++y) {
      if (!lt(x, y)) continue;
      bool direct = true;
      for (int z = 0; z < size() && direct; ++z)
        if (lt(x, z) && lt(z, y)) direct = false;
      if (direct) out.emplace_back(x, y);
    }
  return out;
}

std::vector<int> Poset::maximal_elements() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x) {
    bool maximal = true;
    for (int y = 0; y < size() && maximal; ++y)
      if (lt(x, y)) maximal = false;
    if (maximal) out.push_back(x);
  }
  return out;
}

std::vector<int> Poset::minimal_elements() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x) {
    bool minimal = true;
    for (int y = 0; y < size() && minimal; ++y)
      if (lt(y, x)) minimal = false;
    if (minimal) out.push_back(x);
  }
  return out;
}

std::vector<std::vector<int>> Poset::components() const {
  std::vector<int> comp(size(), -1);
  int count = 0;
  for (int x = 0; x < size(); ++x) {
    if (comp[x] >= 0) continue;
    comp[x] = count++;
    // joins give the equivalence in a join-forest; propagate
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
          if (comp[a] == comp[x] && comp[b] < 0 && join(a, b)) {
            comp[b] = comp[x];
            changed = true;
          }
    }
  }
  std::vector<std::vector<int>> out(count);
  for (int x = 0; x < size(); ++x) out[comp[x]].push_back(x);
  return out;
}

Poset Poset::induced(const std::vector<int>& keep) const {
  std::vector<std::string> names;
  for (int k : keep) names.push_back(name(k));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int a : keep)
    for (int b : keep)
      if (a != b && leq(a, b)) pairs.emplace_back(name(a), name(b));
  return from_relation(std::move(names), pairs);
}

std::variant<std::vector<std::vector<int>>, Poset::NotLaminar> Poset::laminar_components(
    const std::vector<int>& xs) const {
  std::vector<bool> in(size(), false);
  for (int x : xs) in[x] = true;
  auto interval_in = [&](int a, int b) {  // [a,b] subset of xs, a < b
    for (int z = 0; z < size(); ++z)
      if (leq(a, z) && leq(z, b) && !in[z]) return false;
    return true;
  };
  // Laminar: x<z, y<z, [x,z] u [y,z] in X  =>  the intervals are nested.
  for (int x : xs)
    for (int y : xs)
      for (int z : xs) {
        if (!lt(x, z) || !lt(y, z)) continue;
        if (!interval_in(x, z) || !interval_in(y, z)) continue;
        // in a join-tree both intervals are chains ending at z; nested iff
        // x and y comparable
        if (!comparable(x, y)) return NotLaminar{x, y, z};
      }
  // Components: u ~ v when comparable with the whole interval inside xs.
  std::vector<int> cls(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) cls[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (cls[i] != i) i = cls[i] = cls[cls[i]];
    return i;
  };
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j) {
      int a = xs[i], b = xs[j];
      if (lt(b, a)) std::swap(a, b);
      if (lt(a, b) && interval_in(a, b))
        cls[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < xs.size(); ++i) groups[find(static_cast<int>(i))].push_back(xs[i]);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Poset::same_order(const Poset& other) const {
  return names_ == other.names_ && leq_ == other.leq_;
}

}  // namespace gentrees

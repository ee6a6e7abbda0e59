#include "gentrees/arrangement.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace gentrees {

// ---------------------------------------------------------------------------
// LabelledSet

void LabelledSet::add(const std::string& letter, Count c) {
  if (c.is_zero()) return;
  auto [it, fresh] = counts_.emplace(letter, c);
  if (!fresh) it->second = it->second + c;
}

Count LabelledSet::count(const std::string& letter) const {
  auto it = counts_.find(letter);
  return it == counts_.end() ? Count::of(0) : it->second;
}

std::string LabelledSet::to_text() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : counts_) {
    if (!first) os << " ";
    os << a << ":" << c.to_text();
    first = false;
  }
  return os.str();
}

LabelledSet LabelledSet::parse(const std::string& text) {
  LabelledSet m;
  for (const auto& tok : split_ws(text)) {
    size_t colon = tok.rfind(':');
    if (colon == std::string::npos) throw ParseError("expected letter:count, got " + tok);
    std::string letter = tok.substr(0, colon);
    std::string num = tok.substr(colon + 1);
    if (letter.empty() || num.empty()) throw ParseError("bad multiset entry: " + tok);
    if (num == "w")
      m.add(letter, Count::inf());
    else
      m.add(letter, Count::of(std::stoull(num)));
  }
  return m;
}

LabelledSet LabelledSet::relabel(const std::map<std::string, std::string>& r) const {
  LabelledSet out;
  for (const auto& [a, c] : counts_) {
    auto it = r.find(a);
    out.add(it == r.end() ? a : it->second, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FiniteArrangement

std::string FiniteArrangement::to_text() const {
  std::ostringstream os;
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) os << " ";
    os << letters[i];
  }
  return os.str();
}

LabelledSet FiniteArrangement::labelled_set() const {
  LabelledSet m;
  for (const auto& a : letters) m.add(a);
  return m;
}

// ---------------------------------------------------------------------------
// ArrExpr

ArrExpr ArrExpr::concat(std::vector<ArrExpr> es) {
  if (es.empty()) return empty();
  if (es.size() == 1) return std::move(es[0]);
  ArrExpr e;
  e.kind = Concat;
  e.children = std::move(es);
  return e;
}

ArrExpr ArrExpr::word(const std::vector<std::string>& letters) {
  std::vector<ArrExpr> es;
  for (const auto& a : letters) es.push_back(lit(a));
  return concat(std::move(es));
}

bool ArrExpr::operator==(const ArrExpr& o) const {
  if (kind != o.kind || letter != o.letter || children.size() != o.children.size())
    return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!(children[i] == o.children[i])) return false;
  return true;
}

bool ArrExpr::operator<(const ArrExpr& o) const { return to_text() < o.to_text(); }

namespace {

bool bare_ok(const std::string& s) {
  if (s.empty() || s == "empty" || s == "sh" || s == "w") return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'' &&
        c != '@' && c != '-')
      return false;
  return !std::isdigit(static_cast<unsigned char>(s[0])) || true;
}

class ArrParser {
 public:
  explicit ArrParser(const std::string& s) : s_(s) {}

  ArrExpr parse() {
    ArrExpr e = parse_concat();
    skip_ws();
    if (i_ < s_.size()) throw ParseError("trailing input in arrangement expression");
    return e;
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  ArrExpr parse_concat() {
    std::vector<ArrExpr> parts{parse_postfix()};
    while (eat('.')) parts.push_back(parse_postfix());
    return parts.size() == 1 ? std::move(parts[0]) : ArrExpr::concat(std::move(parts));
  }

  ArrExpr parse_postfix() {
    ArrExpr e = parse_primary();
    for (;;) {
      skip_ws();
      if (i_ < s_.size() && s_[i_] == '^') {
        ++i_;
        bool rev = false;
        if (i_ < s_.size() && s_[i_] == '-') {
          rev = true;
          ++i_;
        }
        if (i_ >= s_.size() || s_[i_] != 'w')
          throw ParseError("expected ^w or ^-w in arrangement expression");
        ++i_;
        e = rev ? ArrExpr::omega_rev(std::move(e)) : ArrExpr::omega(std::move(e));
      } else {
        return e;
      }
    }
  }

  ArrExpr parse_primary() {
    skip_ws();
    if (i_ >= s_.size()) throw ParseError("unexpected end of arrangement expression");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      ArrExpr e = parse_concat();
      if (!eat(')')) throw ParseError("expected ')'");
      return e;
    }
    if (c == '\'') {
      size_t j = s_.find('\'', i_ + 1);
      if (j == std::string::npos) throw ParseError("unterminated letter quote");
      std::string a = s_.substr(i_ + 1, j - i_ - 1);
      i_ = j + 1;
      return ArrExpr::lit(a);
    }
    // identifier
    size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) ||
                             s_[j] == '_' || s_[j] == '\'' || s_[j] == '@' || s_[j] == '-'))
      ++j;
    if (j == i_) throw ParseError(cat("unexpected character '", c, "'"));
    std::string id = s_.substr(i_, j - i_);
    i_ = j;
    if (id == "empty") return ArrExpr::empty();
    if (id == "sh") {
      if (!eat('{')) throw ParseError("expected '{' after sh");
      std::vector<ArrExpr> members{parse_concat()};
      while (eat(',')) members.push_back(parse_concat());
      if (!eat('}')) throw ParseError("expected '}'");
      return ArrExpr::shuffle(std::move(members));
    }
    return ArrExpr::lit(id);
  }

  const std::string& s_;
  size_t i_ = 0;
};

}  // namespace

ArrExpr ArrExpr::parse(const std::string& text) { return ArrParser(text).parse(); }

std::string ArrExpr::to_text() const {
  switch (kind) {
    case Empty:
      return "empty";
    case Letter:
      return bare_ok(letter) ? letter : "'" + letter + "'";
    case Concat: {
      std::ostringstream os;
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) os << " . ";
        bool paren = children[i].kind == Concat;
        os << (paren ? "(" : "") << children[i].to_text() << (paren ? ")" : "");
      }
      return os.str();
    }
    case OmegaPow:
    case OmegaRevPow: {
      const ArrExpr& c = children[0];
      bool paren = c.kind == Concat || c.kind == OmegaPow || c.kind == OmegaRevPow;
      return (paren ? "(" : "") + c.to_text() + (paren ? ")" : "") +
             (kind == OmegaPow ? "^w" : "^-w");
    }
    case Shuffle: {
      std::ostringstream os;
      os << "sh{";
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) os << ", ";
        os << children[i].to_text();
      }
      os << "}";
      return os.str();
    }
  }
  return "?";
}

namespace {

std::vector<ArrExpr> as_items(const ArrExpr& e) {
  if (e.kind == ArrExpr::Concat) return e.children;
  return {e};
}

std::vector<ArrExpr> primitive_root(std::vector<ArrExpr> items) {
  size_t n = items.size();
  for (size_t p = 1; p <= n / 2; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (size_t i = p; i < n && periodic; ++i) periodic = items[i] == items[i % p];
    if (periodic) return std::vector<ArrExpr>(items.begin(), items.begin() + p);
  }
  return items;
}

ArrExpr make_power(ArrExpr::Kind kind, std::vector<ArrExpr> items) {
  ArrExpr body = ArrExpr::concat(primitive_root(std::move(items)));
  return kind == ArrExpr::OmegaPow ? ArrExpr::omega(std::move(body))
                                   : ArrExpr::omega_rev(std::move(body));
}

}  // namespace

ArrExpr ArrExpr::normalized() const {
  switch (kind) {
    case Empty:
    case Letter:
      return *this;
    case Concat: {
      std::vector<ArrExpr> flat;
      for (const auto& c : children) {
        ArrExpr n = c.normalized();
        if (n.kind == Empty) continue;
        if (n.kind == Concat)
          for (auto& g : n.children) flat.push_back(std::move(g));
        else
          flat.push_back(std::move(n));
      }
      // rotations: x (y x)^w = (x y)^w and its mirror for ^-w
      bool changed = true;
      while (changed) {
        changed = false;
        for (size_t i = 0; i < flat.size(); ++i) {
          if (flat[i].kind == OmegaPow && i > 0) {
            std::vector<ArrExpr> body = as_items(flat[i].children[0]);
            if (flat[i - 1] == body.back()) {
              std::rotate(body.rbegin(), body.rbegin() + 1, body.rend());
              flat[i] = make_power(OmegaPow, std::move(body));
              flat.erase(flat.begin() + static_cast<long>(i) - 1);
              changed = true;
              break;
            }
          }
          if (flat[i].kind == OmegaRevPow && i + 1 < flat.size()) {
            std::vector<ArrExpr> body = as_items(flat[i].children[0]);
            if (flat[i + 1] == body.front()) {
              std::rotate(body.begin(), body.begin() + 1, body.end());
              flat[i] = make_power(OmegaRevPow, std::move(body));
              flat.erase(flat.begin() + static_cast<long>(i) + 1);
              changed = true;
              break;
            }
          }
        }
      }
      return concat(std::move(flat));
    }
    case OmegaPow:
    case OmegaRevPow: {
      ArrExpr c = children[0].normalized();
      if (c.kind == Empty) return empty();
      return make_power(kind, as_items(c));
    }
    case Shuffle: {
      std::vector<ArrExpr> members;
      for (const auto& m : children) {
        ArrExpr n = m.normalized();
        if (n.kind != Empty) members.push_back(std::move(n));
      }
      if (members.empty()) return empty();
      // sh{sh{T}} = sh{T}
      if (members.size() == 1 && members[0].kind == Shuffle) return members[0];
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      // absorption: drop a shuffle member whose members all appear beside it
      for (size_t i = 0; i < members.size();) {
        bool drop = false;
        if (members[i].kind == Shuffle) {
          drop = true;
          for (const auto& t : members[i].children) {
            bool present = false;
            for (size_t j = 0; j < members.size() && !present; ++j)
              present = j != i && members[j] == t;
            if (!present) {
              drop = false;
              break;
            }
          }
        }
        if (drop)
          members.erase(members.begin() + static_cast<long>(i));
        else
          ++i;
      }
      if (members.size() == 1 && members[0].kind == Shuffle) return members[0];
      ArrExpr e;
      e.kind = Shuffle;
      e.children = std::move(members);
      return e;
    }
  }
  return *this;
}

ArrExpr ArrExpr::relabel(const std::map<std::string, std::string>& r) const {
  if (kind == Letter) {
    auto it = r.find(letter);
    return it == r.end() ? *this : lit(it->second);
  }
  ArrExpr e = *this;
  for (auto& c : e.children) c = c.relabel(r);
  return e;
}

LabelledSet ArrExpr::labelled_set() const {
  LabelledSet m;
  switch (kind) {
    case Empty:
      break;
    case Letter:
      m.add(letter);
      break;
    case Concat:
      for (const auto& c : children) {
        LabelledSet sub = c.labelled_set();
        for (const auto& [a, cnt] : sub.counts()) m.add(a, cnt);
      }
      break;
    case OmegaPow:
    case OmegaRevPow: {
      LabelledSet sub = children[0].labelled_set();
      for (const auto& [a, cnt] : sub.counts()) m.add(a, Count::inf());
      break;
    }
    case Shuffle:
      for (const auto& c : children) {
        LabelledSet sub = c.labelled_set();
        for (const auto& [a, cnt] : sub.counts()) m.add(a, Count::inf());
      }
      break;
  }
  return m;
}

std::set<std::string> ArrExpr::alphabet() const {
  std::set<std::string> out;
  if (kind == Letter) out.insert(letter);
  for (const auto& c : children)
    for (const auto& a : c.alphabet()) out.insert(a);
  return out;
}

std::optional<FiniteArrangement> ArrExpr::as_finite() const {
  switch (kind) {
    case Empty:
      return FiniteArrangement{};
    case Letter:
      return FiniteArrangement{{letter}};
    case Concat: {
      FiniteArrangement w;
      for (const auto& c : children) {
        auto part = c.as_finite();
        if (!part) return std::nullopt;
        for (auto& a : part->letters) w.letters.push_back(std::move(a));
      }
      return w;
    }
    case OmegaPow:
    case OmegaRevPow:
    case Shuffle: {
      // only finite if the body vanishes
      if (labelled_set().counts().empty()) return FiniteArrangement{};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LazyArrangement base

std::vector<std::string> LazyArrangement::enumerate(size_t n) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (cache_.size() < n && !complete_) {
    auto next = produce_next();
    if (!next)
      complete_ = true;
    else
      cache_.push_back(std::move(*next));
  }
  return std::vector<std::string>(cache_.begin(),
                                  cache_.begin() + static_cast<long>(std::min(n, cache_.size())));
}

bool LazyArrangement::known_complete() const {
  std::lock_guard<std::mutex> lock(mu_);
  return complete_;
}

namespace {

// --- lazy view of a finite word --------------------------------------------

class WordView : public LazyArrangement {
 public:
  explicit WordView(FiniteArrangement w) : w_(std::move(w)) {}

  int compare(const std::string& a, const std::string& b) const override {
    long x = std::stol(a), y = std::stol(b);
    return x < y ? -1 : x > y ? 1 : 0;
  }
  std::string label(const std::string& a) const override {
    return w_.letters.at(static_cast<size_t>(std::stol(a)));
  }
  std::optional<LabelledSet> counts() const override { return w_.labelled_set(); }
  std::string describe() const override { return "word " + w_.to_text(); }

 protected:
  std::optional<std::string> produce_next() const override {
    if (i_ >= w_.size()) return std::nullopt;
    return std::to_string(i_++);
  }

 private:
  FiniteArrangement w_;
  mutable size_t i_ = 0;
};

// --- lazy view of an expression --------------------------------------------
//
// Addresses are '.'-joined components:
//   cI  concat child I        wK  omega-power copy K (ascending)
//   rK  reversed-power copy K (descending)
//   sB  shuffle slot at dyadic word B over {0,1}

struct AddrCursor {
  std::vector<std::string> comps;
  size_t i = 0;
  explicit AddrCursor(const std::string& a) {
    std::string cur;
    for (char c : a) {
      if (c == '.') {
        comps.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) comps.push_back(cur);
  }
  bool done() const { return i >= comps.size(); }
  const std::string& head() const { return comps[i]; }
};

int dyadic_compare(const std::string& a, const std::string& b) {
  // word over {0,1} read as a path in the infinite binary tree; the slot of
  // w sits strictly between its 0- and 1-refinements
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  if (i == a.size() && i == b.size()) return 0;
  if (i == a.size()) return b[i] == '0' ? 1 : -1;  // b refines a
  if (i == b.size()) return a[i] == '0' ? -1 : 1;
  return a[i] < b[i] ? -1 : 1;
}

size_t shuffle_member(const std::string& slot, size_t k) {
  size_t v = slot.size();
  for (char c : slot) v += (c == '1');
  return v % k;
}

class ExprView : public LazyArrangement {
 public:
  explicit ExprView(ArrExpr e) : e_(e.normalized()) {}

  int compare(const std::string& a, const std::string& b) const override {
    AddrCursor ca(a), cb(b);
    return cmp(e_, ca, cb);
  }

  std::string label(const std::string& a) const override {
    AddrCursor c(a);
    const ArrExpr* e = &e_;
    while (true) {
      switch (e->kind) {
        case ArrExpr::Letter:
          return e->letter;
        case ArrExpr::Concat:
          e = &e->children.at(std::stoul(c.head().substr(1)));
          ++c.i;
          break;
        case ArrExpr::OmegaPow:
        case ArrExpr::OmegaRevPow:
          e = &e->children[0];
          ++c.i;
          break;
        case ArrExpr::Shuffle:
          e = &e->children[shuffle_member(c.head().substr(1), e->children.size())];
          ++c.i;
          break;
        default:
          throw Error("bad arrangement address: " + a);
      }
    }
  }

  std::optional<LabelledSet> counts() const override { return e_.labelled_set(); }
  std::string describe() const override { return "expr " + e_.to_text(); }
  const ArrExpr& expr() const { return e_; }

 protected:
  std::optional<std::string> produce_next() const override {
    while (buf_i_ >= buf_.size()) {
      if (layer_ > 0 && buf_.empty() && last_layer_empty_) return std::nullopt;
      last_layer_empty_ = true;
      buf_.clear();
      buf_i_ = 0;
      gen_layer(e_, layer_, "", buf_);
      if (!buf_.empty()) last_layer_empty_ = false;
      ++layer_;
      if (layer_ > 4096) return std::nullopt;  // safety stop
    }
    return buf_[buf_i_++];
  }

 private:
  static void gen_layer(const ArrExpr& e, size_t w, const std::string& prefix,
                        std::vector<std::string>& out) {
    auto join = [&](const std::string& comp) {
      return prefix.empty() ? comp : prefix + "." + comp;
    };
    switch (e.kind) {
      case ArrExpr::Empty:
        return;
      case ArrExpr::Letter:
        if (w == 0) out.push_back(prefix);
        return;
      case ArrExpr::Concat:
        for (size_t i = 0; i < e.children.size(); ++i)
          gen_layer(e.children[i], w, join("c" + std::to_string(i)), out);
        return;
      case ArrExpr::OmegaPow:
      case ArrExpr::OmegaRevPow: {
        const char tag = e.kind == ArrExpr::OmegaPow ? 'w' : 'r';
        for (size_t k = 0; k <= w; ++k)
          gen_layer(e.children[0], w - k, join(std::string(1, tag) + std::to_string(k)),
                    out);
        return;
      }
      case ArrExpr::Shuffle: {
        for (size_t len = 0; len <= w; ++len) {
          // all {0,1} words of this length, lexicographic
          for (size_t bits = 0; bits < (size_t{1} << len); ++bits) {
            std::string slot;
            for (size_t p = 0; p < len; ++p)
              slot.push_back((bits >> (len - 1 - p)) & 1 ? '1' : '0');
            const ArrExpr& member = e.children[shuffle_member(slot, e.children.size())];
            gen_layer(member, w - len, join("s" + slot), out);
          }
        }
        return;
      }
    }
  }

  static int cmp(const ArrExpr& e, AddrCursor& a, AddrCursor& b) {
    switch (e.kind) {
      case ArrExpr::Letter:
        return 0;
      case ArrExpr::Concat: {
        size_t ia = std::stoul(a.head().substr(1)), ib = std::stoul(b.head().substr(1));
        if (ia != ib) return ia < ib ? -1 : 1;
        ++a.i;
        ++b.i;
        return cmp(e.children[ia], a, b);
      }
      case ArrExpr::OmegaPow: {
        size_t ka = std::stoul(a.head().substr(1)), kb = std::stoul(b.head().substr(1));
        if (ka != kb) return ka < kb ? -1 : 1;
        ++a.i;
        ++b.i;
        return cmp(e.children[0], a, b);
      }
      case ArrExpr::OmegaRevPow: {
        size_t ka = std::stoul(a.head().substr(1)), kb = std::stoul(b.head().substr(1));
        if (ka != kb) return ka > kb ? -1 : 1;
        ++a.i;
        ++b.i;
        return cmp(e.children[0], a, b);
      }
      case ArrExpr::Shuffle: {
        std::string sa = a.head().substr(1), sb = b.head().substr(1);
        int c = dyadic_compare(sa, sb);
        if (c != 0) return c;
        ++a.i;
        ++b.i;
        return cmp(e.children[shuffle_member(sa, e.children.size())], a, b);
      }
      default:
        throw Error("bad arrangement address");
    }
  }

  ArrExpr e_;
  mutable std::vector<std::string> buf_;
  mutable size_t buf_i_ = 0;
  mutable size_t layer_ = 0;
  mutable bool last_layer_empty_ = false;
};

// --- frontier of a term automaton ------------------------------------------

class FrontierView : public LazyArrangement {
 public:
  FrontierView(TermAutomaton a, std::string anchor, std::set<std::string> targets,
               std::function<std::string(int, const std::string&)> label_of)
      : a_(std::move(a)),
        anchor_(std::move(anchor)),
        targets_(std::move(targets)),
        label_of_(std::move(label_of)) {
    auto q = a_.state_at(anchor_);
    if (!q) throw Error("frontier anchor falls off the term: " + anchor_);
    queue_.push_back({anchor_, *q});
  }

  int compare(const std::string& a, const std::string& b) const override {
    return lex_compare(a, b);
  }

  std::string label(const std::string& pos) const override {
    auto q = a_.state_at(pos);
    if (!q) throw Error("position falls off the term: " + pos);
    const std::string& sym = a_.at(*q).symbol;
    return label_of_ ? label_of_(*q, sym) : sym;
  }

  std::optional<LabelledSet> counts() const override {
    // per-state path counts in the stop-respecting reachability graph
    auto anchor_state = a_.state_at(anchor_);
    std::map<int, Count> paths;
    if (is_target(*anchor_state)) {
      paths[*anchor_state] = Count::of(1);
    } else {
      // reachable subgraph, not descending below targets
      std::set<int> reach;
      std::vector<int> stack{*anchor_state};
      while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        if (!reach.insert(q).second) continue;
        if (is_target(q)) continue;
        for (int c : a_.at(q).children) stack.push_back(c);
      }
      // states lying on cycles of the non-target subgraph
      std::set<int> cyclic;
      for (int s : reach) {
        if (is_target(s)) continue;
        std::set<int> seen;
        std::vector<int> st;
        for (int c : a_.at(s).children)
          if (reach.count(c)) st.push_back(c);
        while (!st.empty()) {
          int q = st.back();
          st.pop_back();
          if (q == s) {
            cyclic.insert(s);
            break;
          }
          if (!seen.insert(q).second || is_target(q) || !reach.count(q)) continue;
          for (int c : a_.at(q).children) st.push_back(c);
        }
      }
      // propagate: path counts from anchor
      std::map<int, Count> in;
      in[*anchor_state] = Count::of(1);
      // topological-ish relaxation; omega dominates so a bounded number of
      // sweeps suffices on these small graphs
      for (size_t sweep = 0; sweep <= reach.size() + 2; ++sweep) {
        std::map<int, Count> next;
        next[*anchor_state] = Count::of(1);
        for (int q : reach) {
          if (is_target(q)) continue;
          auto qit = in.find(q);
          if (qit == in.end()) continue;
          Count c = qit->second;
          if (cyclic.count(q)) c = Count::inf();
          for (int child : a_.at(q).children) {
            auto [it, fresh] = next.emplace(child, c);
            if (!fresh) it->second = it->second + c;
          }
        }
        if (next == in) break;
        in = std::move(next);
      }
      for (const auto& [q, c] : in)
        if (is_target(q)) paths[q] = c;
    }
    LabelledSet m;
    for (const auto& [q, c] : paths) {
      const std::string& sym = a_.at(q).symbol;
      m.add(label_of_ ? label_of_(q, sym) : sym, c);
    }
    return m;
  }

  std::string describe() const override {
    return cat("frontier at '", anchor_.empty() ? "eps" : anchor_, "'");
  }

 protected:
  std::optional<std::string> produce_next() const override {
    while (!queue_.empty()) {
      auto [pos, q] = queue_.front();
      queue_.pop_front();
      if (is_target(q)) return pos;
      const auto& ch = a_.at(q).children;
      for (size_t i = 0; i < ch.size(); ++i)
        queue_.push_back({pos + static_cast<char>('1' + i), ch[i]});
    }
    return std::nullopt;
  }

 private:
  bool is_target(int q) const { return targets_.count(a_.at(q).symbol) > 0; }

  TermAutomaton a_;
  std::string anchor_;
  std::set<std::string> targets_;
  std::function<std::string(int, const std::string&)> label_of_;
  mutable std::deque<std::pair<std::string, int>> queue_;
};

// --- adapters ---------------------------------------------------------------

class RelabelView : public LazyArrangement {
 public:
  RelabelView(LazyPtr inner, std::map<std::string, std::string> r)
      : inner_(std::move(inner)), r_(std::move(r)) {}

  int compare(const std::string& a, const std::string& b) const override {
    return inner_->compare(a, b);
  }
  std::string label(const std::string& a) const override {
    std::string l = inner_->label(a);
    auto it = r_.find(l);
    return it == r_.end() ? l : it->second;
  }
  std::optional<LabelledSet> counts() const override {
    auto c = inner_->counts();
    if (!c) return std::nullopt;
    return c->relabel(r_);
  }
  std::string describe() const override { return "relabel of " + inner_->describe(); }

 protected:
  std::optional<std::string> produce_next() const override {
    auto items = inner_->enumerate(i_ + 1);
    if (items.size() <= i_) return std::nullopt;
    return items[i_++];
  }

 private:
  LazyPtr inner_;
  std::map<std::string, std::string> r_;
  mutable size_t i_ = 0;
};

class ConcatView : public LazyArrangement {
 public:
  ConcatView(LazyPtr a, LazyPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  int compare(const std::string& x, const std::string& y) const override {
    if (x[0] != y[0]) return x[0] < y[0] ? -1 : 1;
    const LazyPtr& side = x[0] == '1' ? a_ : b_;
    return side->compare(x.substr(2), y.substr(2));
  }
  std::string label(const std::string& x) const override {
    const LazyPtr& side = x[0] == '1' ? a_ : b_;
    return side->label(x.substr(2));
  }
  std::optional<LabelledSet> counts() const override {
    auto ca = a_->counts(), cb = b_->counts();
    if (!ca || !cb) return std::nullopt;
    LabelledSet m = *ca;
    for (const auto& [l, c] : cb->counts()) m.add(l, c);
    return m;
  }
  std::string describe() const override {
    return cat("(", a_->describe(), ") . (", b_->describe(), ")");
  }

 protected:
  std::optional<std::string> produce_next() const override {
    for (int attempt = 0; attempt < 2; ++attempt) {
      bool left = take_left_;
      take_left_ = !take_left_;
      const LazyPtr& side = left ? a_ : b_;
      size_t& idx = left ? ia_ : ib_;
      auto items = side->enumerate(idx + 1);
      if (items.size() > idx) {
        std::string addr = cat(left ? "1" : "2", ":", items[idx]);
        ++idx;
        return addr;
      }
    }
    return std::nullopt;
  }

 private:
  LazyPtr a_, b_;
  mutable size_t ia_ = 0, ib_ = 0;
  mutable bool take_left_ = true;
};

}  // namespace

LazyPtr lazy_of_expr(const ArrExpr& e) { return std::make_shared<ExprView>(e); }

LazyPtr frontier(const TermAutomaton& a, const std::string& anchor,
                 const std::set<std::string>& targets,
                 std::function<std::string(int, const std::string&)> label_of) {
  return std::make_shared<FrontierView>(a, anchor, targets, std::move(label_of));
}

LazyPtr lazy_relabel(LazyPtr w, const std::map<std::string, std::string>& r) {
  return std::make_shared<RelabelView>(std::move(w), r);
}

LazyPtr lazy_concat(LazyPtr a, LazyPtr b) {
  return std::make_shared<ConcatView>(std::move(a), std::move(b));
}

LazyPtr lazy_of_word(FiniteArrangement w) { return std::make_shared<WordView>(std::move(w)); }

// ---------------------------------------------------------------------------
// Arrangement

std::optional<LabelledSet> Arrangement::counts() const {
  switch (kind_) {
    case Kind::Fin:
      return fin_.labelled_set();
    case Kind::Expr:
      return expr_.labelled_set();
    case Kind::Lazy:
      return lazy_->counts();
  }
  return std::nullopt;
}

std::optional<FiniteArrangement> Arrangement::as_finite() const {
  switch (kind_) {
    case Kind::Fin:
      return fin_;
    case Kind::Expr:
      return expr_.normalized().as_finite();
    case Kind::Lazy:
      return std::nullopt;
  }
  return std::nullopt;
}

LazyPtr Arrangement::lazy_view() const {
  switch (kind_) {
    case Kind::Fin:
      return lazy_of_word(fin_);
    case Kind::Expr:
      return lazy_of_expr(expr_);
    case Kind::Lazy:
      return lazy_;
  }
  return nullptr;
}

Arrangement Arrangement::relabel(const std::map<std::string, std::string>& r) const {
  switch (kind_) {
    case Kind::Fin: {
      FiniteArrangement w = fin_;
      for (auto& a : w.letters) {
        auto it = r.find(a);
        if (it != r.end()) a = it->second;
      }
      return Arrangement(std::move(w));
    }
    case Kind::Expr:
      return Arrangement(expr_.relabel(r));
    case Kind::Lazy:
      return Arrangement(lazy_relabel(lazy_, r));
  }
  return {};
}

std::string Arrangement::to_text() const {
  switch (kind_) {
    case Kind::Fin:
      return fin_.size() ? fin_.to_text() : "empty";
    case Kind::Expr:
      return expr_.to_text();
    case Kind::Lazy:
      return lazy_->describe();
  }
  return "";
}

FiniteArrangement Arrangement::window(size_t k,
                                      const std::optional<std::string>& center) const {
  if (k == 0) return {};
  LazyPtr v = lazy_view();
  size_t ci = 0;
  if (center) {
    size_t cap = 4 * k + 256;
    auto items = v->enumerate(cap);
    auto it = std::find(items.begin(), items.end(), *center);
    if (it == items.end()) throw Error("window center not enumerated: " + *center);
    ci = static_cast<size_t>(it - items.begin());
  }
  auto items = v->enumerate(ci + k + 1);
  if (items.empty()) return {};
  // k indices nearest ci in enumeration order; ties to the smaller index
  std::vector<size_t> idx(items.size());
  for (size_t i = 0; i < items.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    size_t da = a > ci ? a - ci : ci - a;
    size_t db = b > ci ? b - ci : ci - b;
    return da != db ? da < db : a < b;
  });
  idx.resize(std::min(k, idx.size()));
  std::vector<std::string> chosen;
  for (size_t i : idx) chosen.push_back(items[i]);
  std::sort(chosen.begin(), chosen.end(),
            [&](const std::string& a, const std::string& b) { return v->compare(a, b) < 0; });
  FiniteArrangement w;
  for (const auto& a : chosen) w.letters.push_back(v->label(a));
  return w;
}

Arrangement concat(const Arrangement& w1, const Arrangement& w2) {
  auto f1 = w1.as_finite(), f2 = w2.as_finite();
  if (f1 && f1->size() == 0) return w2;
  if (f2 && f2->size() == 0) return w1;
  if (f1 && f2) {
    FiniteArrangement w = *f1;
    for (const auto& a : f2->letters) w.letters.push_back(a);
    return Arrangement(std::move(w));
  }
  if (!w1.is_lazy_backed() && !w2.is_lazy_backed()) {
    auto to_expr = [](const Arrangement& w) {
      if (w.is_expr_backed()) return w.expr();
      return ArrExpr::word(w.as_finite()->letters);
    };
    return Arrangement(
        ArrExpr::concat({to_expr(w1), to_expr(w2)}).normalized());
  }
  return Arrangement(lazy_concat(w1.lazy_view(), w2.lazy_view()));
}

namespace {

IsoResult word_iso(const FiniteArrangement& a, const FiniteArrangement& b) {
  if (a.size() != b.size())
    return {IsoVerdict::NotIso, cat("lengths differ: ", a.size(), " vs ", b.size()), 0};
  for (size_t i = 0; i < a.size(); ++i)
    if (a.letters[i] != b.letters[i])
      return {IsoVerdict::NotIso,
              cat("position ", i, ": ", a.letters[i], " vs ", b.letters[i]), 0};
  return {IsoVerdict::Iso, "equal words", 0};
}

std::optional<std::string> counts_mismatch(const LabelledSet& a, const LabelledSet& b) {
  std::set<std::string> letters;
  for (const auto& [l, c] : a.counts()) letters.insert(l);
  for (const auto& [l, c] : b.counts()) letters.insert(l);
  for (const auto& l : letters)
    if (!(a.count(l) == b.count(l)))
      return cat("letter ", l, " occurs ", a.count(l).to_text(), " vs ",
                 b.count(l).to_text(), " times");
  return std::nullopt;
}

}  // namespace

IsoResult iso(const Arrangement& w1, const Arrangement& w2, int bound) {
  auto c1 = w1.counts(), c2 = w2.counts();
  if (c1 && c2) {
    if (auto diff = counts_mismatch(*c1, *c2)) return {IsoVerdict::NotIso, *diff, 0};
  }
  auto f1 = w1.as_finite(), f2 = w2.as_finite();
  if (f1 && f2) return word_iso(*f1, *f2);

  if (!w1.is_lazy_backed() && !w2.is_lazy_backed()) {
    auto to_expr = [&](const Arrangement& w) {
      return w.is_expr_backed() ? w.expr() : ArrExpr::word(w.as_finite()->letters);
    };
    ArrExpr n1 = to_expr(w1).normalized(), n2 = to_expr(w2).normalized();
    if (n1 == n2) return {IsoVerdict::Iso, "equal normal forms: " + n1.to_text(), 0};
    return {IsoVerdict::Unknown,
            cat("distinct normal forms (", n1.to_text(), " vs ", n2.to_text(),
                "), counts agree"),
            0};
  }

  // at least one lazy side: exhaustive if both enumerations complete
  LazyPtr v1 = w1.lazy_view(), v2 = w2.lazy_view();
  size_t n = static_cast<size_t>(bound);
  auto e1 = v1->enumerate(n + 1);
  auto e2 = v2->enumerate(n + 1);
  if (v1->known_complete() && v2->known_complete()) {
    auto materialize = [](const LazyPtr& v, std::vector<std::string> addrs) {
      std::sort(addrs.begin(), addrs.end(), [&](const std::string& a, const std::string& b) {
        return v->compare(a, b) < 0;
      });
      FiniteArrangement w;
      for (const auto& a : addrs) w.letters.push_back(v->label(a));
      return w;
    };
    return word_iso(materialize(v1, e1), materialize(v2, e2));
  }
  return {IsoVerdict::Unknown,
          cat("not decided by enumeration to bound ", bound,
              (c1 && c2 ? "; letter counts agree" : "")),
          bound};
}

}  // namespace gentrees

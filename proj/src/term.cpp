#include "gentrees/term.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gentrees {

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::One: return "value";
    case Sort::T: return "t";
    case Sort::F: return "f";
    case Sort::H: return "h";
  }
  return "?";
}

Signature Signature::sbjt() {
  Signature s;
  s.kind_ = SigKind::F;
  s.ops_["."] = {2, Sort::T, {Sort::T, Sort::T}};
  s.ops_["ext"] = {1, Sort::T, {Sort::T}};
  s.ops_["Omega"] = {0, Sort::T, {}};
  return s;
}

Signature Signature::sjt() {
  Signature s;
  s.kind_ = SigKind::Fprime;
  s.ops_["."] = {2, Sort::T, {Sort::T, Sort::T}};
  s.ops_["U+"] = {2, Sort::F, {Sort::F, Sort::F}};
  s.ops_["ext"] = {1, Sort::T, {Sort::F}};
  s.ops_["mkf"] = {1, Sort::F, {Sort::T}};
  s.ops_["Omega_t"] = {0, Sort::T, {}};
  s.ops_["Omega_f"] = {0, Sort::F, {}};
  return s;
}

Signature Signature::sojt() {
  Signature s;
  s.kind_ = SigKind::Fsecond;
  s.ops_["."] = {2, Sort::T, {Sort::T, Sort::T}};
  s.ops_["x"] = {2, Sort::H, {Sort::H, Sort::H}};
  s.ops_["ext"] = {2, Sort::T, {Sort::H, Sort::H}};
  s.ops_["mkh"] = {1, Sort::H, {Sort::T}};
  s.ops_["Omega_t"] = {0, Sort::T, {}};
  s.ops_["Omega_h"] = {0, Sort::H, {}};
  return s;
}

Signature Signature::arrangement(std::set<std::string> letters) {
  Signature s;
  s.kind_ = SigKind::Arr;
  s.ops_["."] = {2, Sort::One, {Sort::One, Sort::One}};
  s.ops_["Omega"] = {0, Sort::One, {}};
  s.letters_ = std::move(letters);
  return s;
}

Signature Signature::free() {
  Signature s;
  s.kind_ = SigKind::Free;
  return s;
}

std::optional<OpType> Signature::lookup(const std::string& symbol) const {
  auto it = ops_.find(symbol);
  if (it != ops_.end()) return it->second;
  if (kind_ == SigKind::Arr && letters_.count(symbol)) return OpType{0, Sort::One, {}};
  if (kind_ == SigKind::Free) {
    auto fit = free_arities_.find(symbol);
    if (fit != free_arities_.end())
      return OpType{fit->second, Sort::One, std::vector<Sort>(fit->second, Sort::One)};
  }
  return std::nullopt;
}

void Signature::record_free(const std::string& symbol, int arity) {
  if (kind_ != SigKind::Free) return;
  auto [it, fresh] = free_arities_.emplace(symbol, arity);
  if (!fresh && it->second != arity)
    throw Error(cat("symbol ", symbol, " used with arities ", it->second, " and ", arity));
}

bool Signature::is_omega(const std::string& symbol) const {
  return symbol == "Omega" || symbol == "Omega_t" || symbol == "Omega_f" ||
         symbol == "Omega_h";
}

std::string FiniteTerm::to_text() const {
  std::ostringstream os;
  std::function<void(const FiniteTerm&)> go = [&](const FiniteTerm& t) {
    if (t.symbol == "." || t.symbol == "U+" || t.symbol == "x") {
      os << "(";
      go(t.children[0]);
      os << (t.symbol == "." ? " . " : t.symbol == "U+" ? " U+ " : " x ");
      go(t.children[1]);
      os << ")";
      return;
    }
    os << t.symbol;
    if (!t.label.empty()) os << "_" << t.label;
    if (!t.children.empty()) {
      os << "(";
      for (size_t i = 0; i < t.children.size(); ++i) {
        if (i) os << ", ";
        go(t.children[i]);
      }
      os << ")";
    }
  };
  go(*this);
  return os.str();
}

TermAutomaton::TermAutomaton(Signature sig, std::vector<Transition> states, int root)
    : sig_(std::move(sig)), states_(std::move(states)), root_(root) {
  if (root_ < 0 || root_ >= state_count()) throw Error("root state out of range");
  if (sig_.kind() == SigKind::Free)
    for (const auto& tr : states_) {
      // first use wins; conflicts surface through validate()
      try {
        sig_.record_free(tr.symbol, static_cast<int>(tr.children.size()));
      } catch (const Error&) {
      }
    }
}

TermAutomaton TermAutomaton::from_finite(const Signature& sig, const FiniteTerm& t) {
  std::vector<Transition> states;
  std::function<int(const FiniteTerm&)> go = [&](const FiniteTerm& node) {
    int id = static_cast<int>(states.size());
    states.push_back({node.symbol, {}});
    std::vector<int> ch;
    for (const auto& c : node.children) ch.push_back(go(c));
    states[id].children = std::move(ch);
    return id;
  };
  int root = go(t);
  return TermAutomaton(sig, std::move(states), root);
}

std::vector<std::string> TermAutomaton::validate() const {
  std::vector<std::string> issues;
  for (int q = 0; q < state_count(); ++q) {
    const auto& tr = states_[q];
    auto ty = sig_.lookup(tr.symbol);
    if (!ty) {
      issues.push_back(cat("state ", q, ": unknown symbol ", tr.symbol));
      continue;
    }
    if (static_cast<int>(tr.children.size()) != ty->arity) {
      issues.push_back(cat("state ", q, ": symbol ", tr.symbol, " has arity ", ty->arity,
                           " but ", tr.children.size(), " arguments"));
      continue;
    }
    for (size_t i = 0; i < tr.children.size(); ++i) {
      int c = tr.children[i];
      if (c < 0 || c >= state_count()) {
        issues.push_back(cat("state ", q, ": argument ", i + 1, " out of range"));
        continue;
      }
      Sort got = state_sort(c);
      Sort want = ty->args[i];
      if (want != Sort::One && got != Sort::One && got != want)
        issues.push_back(cat("state ", q, ": argument ", i + 1, " of ", tr.symbol,
                             " has sort ", sort_name(got), ", expected ", sort_name(want)));
    }
  }
  std::vector<bool> reach(state_count(), false);
  std::vector<int> stack{root_};
  reach[root_] = true;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int c : states_[q].children)
      if (c >= 0 && c < state_count() && !reach[c]) {
        reach[c] = true;
        stack.push_back(c);
      }
  }
  for (int q = 0; q < state_count(); ++q)
    if (!reach[q]) issues.push_back(cat("state ", q, ": unreachable from root"));
  return issues;
}

Sort TermAutomaton::state_sort(int q) const {
  auto ty = sig_.lookup(states_[q].symbol);
  return ty ? ty->result : Sort::One;
}

std::optional<int> TermAutomaton::state_at(const std::string& pos) const {
  int q = root_;
  for (char d : pos) {
    int i = d - '1';
    const auto& ch = states_[q].children;
    if (i < 0 || i >= static_cast<int>(ch.size())) return std::nullopt;
    q = ch[i];
  }
  return q;
}

std::optional<std::string> TermAutomaton::symbol_at(const std::string& pos) const {
  auto q = state_at(pos);
  if (!q) return std::nullopt;
  return states_[*q].symbol;
}

namespace {
std::string omega_for(const Signature& sig, Sort s) {
  switch (sig.kind()) {
    case SigKind::F:
    case SigKind::Arr:
    case SigKind::Free:
      return "Omega";
    case SigKind::Fprime:
      return s == Sort::F ? "Omega_f" : "Omega_t";
    case SigKind::Fsecond:
      return s == Sort::H ? "Omega_h" : "Omega_t";
  }
  return "Omega";
}
}  // namespace

FiniteTerm TermAutomaton::truncate(int depth) const {
  std::function<FiniteTerm(int, int)> go = [&](int q, int d) -> FiniteTerm {
    if (d <= 0) return FiniteTerm::leaf(omega_for(sig_, state_sort(q)));
    const auto& tr = states_[q];
    FiniteTerm t = FiniteTerm::leaf(tr.symbol);
    for (int c : tr.children) t.children.push_back(go(c, d - 1));
    return t;
  };
  return go(root_, depth);
}

TermAutomaton TermAutomaton::canonical_merge() const {
  // iterated partition refinement on (symbol, child classes)
  std::vector<int> cls(state_count(), 0);
  for (;;) {
    std::map<std::pair<std::string, std::vector<int>>, int> sigs;
    std::vector<int> next(state_count());
    for (int q = 0; q < state_count(); ++q) {
      std::vector<int> ch;
      for (int c : states_[q].children) ch.push_back(cls[c]);
      auto key = std::make_pair(states_[q].symbol, ch);
      auto [it, fresh] = sigs.emplace(key, static_cast<int>(sigs.size()));
      next[q] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  int n = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<Transition> merged(n);
  for (int q = 0; q < state_count(); ++q) {
    Transition tr{states_[q].symbol, {}};
    for (int c : states_[q].children) tr.children.push_back(cls[c]);
    merged[cls[q]] = tr;
  }
  return TermAutomaton(sig_, std::move(merged), cls[root_]);
}

bool TermAutomaton::equal_unfolding(const TermAutomaton& other) const {
  // product walk with memoized visited pairs
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> stack{{root_, other.root_}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (!seen.insert({a, b}).second) continue;
    const auto& ta = states_[a];
    const auto& tb = other.states_[b];
    if (ta.symbol != tb.symbol || ta.children.size() != tb.children.size()) return false;
    for (size_t i = 0; i < ta.children.size(); ++i)
      stack.push_back({ta.children[i], tb.children[i]});
  }
  return true;
}

bool pos_is_prefix(const std::string& u, const std::string& v) {
  return v.size() >= u.size() && v.compare(0, u.size(), u) == 0;
}

bool pos_leq_t(const std::string& u, const std::string& v) { return pos_is_prefix(v, u); }

PosMeet pos_meet(const std::string& u, const std::string& v) {
  size_t i = 0;
  while (i < u.size() && i < v.size() && u[i] == v[i]) ++i;
  PosMeet m;
  m.meet = u.substr(0, i);
  if (i < u.size()) m.branch_u = u[i];
  if (i < v.size()) m.branch_v = v[i];
  return m;
}

int lex_compare(const std::string& u, const std::string& v) {
  size_t i = 0;
  while (i < u.size() && i < v.size() && u[i] == v[i]) ++i;
  if (i == u.size() && i == v.size()) return 0;
  if (i == u.size()) return -1;  // u prefix of v: u first
  if (i == v.size()) return 1;
  return u[i] < v[i] ? -1 : 1;
}

bool term_leq(const Signature& sig, const FiniteTerm& t1, const FiniteTerm& t2) {
  if (sig.is_omega(t1.symbol)) return true;
  if (t1.symbol != t2.symbol || t1.children.size() != t2.children.size()) return false;
  for (size_t i = 0; i < t1.children.size(); ++i)
    if (!term_leq(sig, t1.children[i], t2.children[i])) return false;
  return true;
}

bool term_leq(const Signature& sig, const FiniteTerm& t1, const TermAutomaton& t2) {
  std::function<bool(const FiniteTerm&, int)> go = [&](const FiniteTerm& t, int q) {
    if (sig.is_omega(t.symbol)) return true;
    const auto& tr = t2.at(q);
    if (t.symbol != tr.symbol || t.children.size() != tr.children.size()) return false;
    for (size_t i = 0; i < t.children.size(); ++i)
      if (!go(t.children[i], tr.children[i])) return false;
    return true;
  };
  return go(t1, t2.root());
}

// ---------------------------------------------------------------------------
// Term expression parsing

namespace {

struct Token {
  enum Kind { Ident, Quoted, LParen, RParen, Comma, Dot, End } kind;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}
  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) return {Token::End, ""};
    char c = s_[i_];
    if (c == '(') return ++i_, Token{Token::LParen, "("};
    if (c == ')') return ++i_, Token{Token::RParen, ")"};
    if (c == ',') return ++i_, Token{Token::Comma, ","};
    if (c == '.') return ++i_, Token{Token::Dot, "."};
    if (c == '\'') {
      size_t j = s_.find('\'', i_ + 1);
      if (j == std::string::npos) throw ParseError("unterminated quoted letter");
      std::string body = s_.substr(i_ + 1, j - i_ - 1);
      i_ = j + 1;
      return {Token::Quoted, body};
    }
    if (c == 'U' && i_ + 1 < s_.size() && s_[i_ + 1] == '+') {
      i_ += 2;
      return {Token::Ident, "U+"};
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) ||
                               s_[j] == '_' || s_[j] == '\''))
        ++j;
      std::string id = s_.substr(i_, j - i_);
      i_ = j;
      return {Token::Ident, id};
    }
    throw ParseError(cat("unexpected character '", c, "' in term expression"));
  }

 private:
  const std::string& s_;
  size_t i_ = 0;
};

class TermParser {
 public:
  explicit TermParser(const std::string& s) : lex_(s) { advance(); }

  TermExpr parse() {
    TermExpr e = parse_infix();
    if (tok_.kind != Token::End) throw ParseError("trailing input after term expression");
    return e;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  // left-associative chain of '.', 'U+' and infix 'x'
  TermExpr parse_infix() {
    TermExpr lhs = parse_primary();
    for (;;) {
      if (tok_.kind == Token::Dot) {
        advance();
        TermExpr rhs = parse_primary();
        lhs = TermExpr{TermExpr::Op, ".", "", {std::move(lhs), std::move(rhs)}};
      } else if (tok_.kind == Token::Ident && (tok_.text == "U+" || tok_.text == "x")) {
        std::string op = tok_.text;
        advance();
        TermExpr rhs = parse_primary();
        lhs = TermExpr{TermExpr::Op, op, "", {std::move(lhs), std::move(rhs)}};
      } else {
        return lhs;
      }
    }
  }

  TermExpr parse_primary() {
    if (tok_.kind == Token::LParen) {
      advance();
      TermExpr e = parse_infix();
      expect(Token::RParen, ")");
      return e;
    }
    if (tok_.kind == Token::Quoted) {
      TermExpr e{TermExpr::Letter, tok_.text, "", {}};
      advance();
      return e;
    }
    if (tok_.kind != Token::Ident) throw ParseError("expected a term");
    std::string id = tok_.text;
    advance();
    if (tok_.kind == Token::LParen) {
      advance();
      std::vector<TermExpr> args;
      if (tok_.kind != Token::RParen) {
        args.push_back(parse_infix());
        while (tok_.kind == Token::Comma) {
          advance();
          args.push_back(parse_infix());
        }
      }
      expect(Token::RParen, ")");
      std::string label;
      if (id.rfind("ext_", 0) == 0) {
        label = id.substr(4);
        id = "ext";
      }
      if (id == "ext2") id = "ext";
      return TermExpr{TermExpr::Op, id, label, std::move(args)};
    }
    if (id == "Omega" || id == "Omega_t" || id == "Omega_f" || id == "Omega_h")
      return TermExpr{TermExpr::Op, id, "", {}};
    // bare identifier: unknown reference or letter, resolved later
    return TermExpr{TermExpr::Ref, id, "", {}};
  }

  void expect(Token::Kind k, const std::string& what) {
    if (tok_.kind != k) throw ParseError("expected '" + what + "'");
    advance();
  }

  Lexer lex_;
  Token tok_{Token::End, ""};
};

void collect_symbols(const TermExpr& e, std::set<std::string>& ops,
                     std::set<std::string>& refs) {
  if (e.kind == TermExpr::Op) {
    ops.insert(e.symbol + "/" + std::to_string(e.children.size()));
    for (const auto& c : e.children) collect_symbols(c, ops, refs);
  } else {
    refs.insert(e.symbol);
  }
}

}  // namespace

TermExpr parse_term_expr(const std::string& text) { return TermParser(text).parse(); }

EquationSystem EquationSystem::parse(const std::string& text) {
  EquationSystem sys;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> defined;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'name = expr'", lineno);
    std::string name = trim(line.substr(0, eq));
    if (name.empty() || split_ws(name).size() != 1)
      throw ParseError("bad equation name: '" + name + "'", lineno);
    if (!defined.insert(name).second)
      throw ParseError("unknown '" + name + "' defined twice", lineno);
    try {
      sys.equations.emplace_back(name, parse_term_expr(line.substr(eq + 1)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (sys.equations.empty()) throw ParseError("no equations found");
  return sys;
}

SigKind infer_sig_kind(const EquationSystem& eqs) {
  std::set<std::string> ops, refs;
  for (const auto& [name, e] : eqs.equations) collect_symbols(e, ops, refs);
  std::set<std::string> unknowns;
  for (const auto& [name, e] : eqs.equations) unknowns.insert(name);
  bool letters = false;
  for (const auto& r : refs)
    if (!unknowns.count(r)) letters = true;
  auto has = [&](const std::string& s) { return ops.count(s) > 0; };
  if (has("x/2") || has("mkh/1") || has("Omega_h/0") || has("ext/2")) return SigKind::Fsecond;
  if (has("U+/2") || has("mkf/1") || has("Omega_f/0")) return SigKind::Fprime;
  if (letters) return SigKind::Arr;
  if (has("Omega_t/0")) return SigKind::Fprime;
  return SigKind::F;
}

namespace {

Sort check_expr_sorts(Signature& sig, const TermExpr& e,
                      const std::map<std::string, int>& unknown_state,
                      const std::vector<Sort>& unknown_sorts) {
  if (e.kind == TermExpr::Ref) {
    auto it = unknown_state.find(e.symbol);
    if (it != unknown_state.end()) return unknown_sorts[it->second];
    if (sig.kind() == SigKind::Arr || sig.kind() == SigKind::Free) {
      sig.record_free(e.symbol, 0);
      return Sort::One;
    }
    throw Error("undefined unknown: " + e.symbol);
  }
  if (e.kind == TermExpr::Letter) return Sort::One;
  if (sig.kind() == SigKind::Free)
    sig.record_free(e.symbol, static_cast<int>(e.children.size()));
  auto ty = sig.lookup(e.symbol);
  if (!ty) throw Error("symbol not in signature: " + e.symbol);
  if (static_cast<int>(e.children.size()) != ty->arity)
    throw Error(cat(e.symbol, " expects ", ty->arity, " arguments, got ", e.children.size()));
  for (size_t i = 0; i < e.children.size(); ++i) {
    Sort got = check_expr_sorts(sig, e.children[i], unknown_state, unknown_sorts);
    if (ty->args[i] != Sort::One && got != Sort::One && got != ty->args[i])
      throw Error(cat("argument ", i + 1, " of ", e.symbol, " has sort ", sort_name(got),
                      ", expected ", sort_name(ty->args[i])));
  }
  return ty->result;
}

Sort expr_result_sort(const Signature& sig, const TermExpr& e) {
  if (e.kind != TermExpr::Op) return Sort::One;
  auto ty = sig.lookup(e.symbol);
  return ty ? ty->result : Sort::One;
}

}  // namespace

TermAutomaton from_equations(const EquationSystem& eqs, const Signature& sig_in,
                             const std::string& root_name) {
  Signature sig = sig_in;
  std::map<std::string, int> unknown_id;
  for (size_t i = 0; i < eqs.equations.size(); ++i)
    unknown_id[eqs.equations[i].first] = static_cast<int>(i);

  // guardedness: an unknown may not be defined as a bare unknown
  for (const auto& [name, rhs] : eqs.equations)
    if (rhs.kind == TermExpr::Ref && unknown_id.count(rhs.symbol))
      throw Error("unguarded equation: " + name + " = " + rhs.symbol);

  // sorts of the unknowns come from their right-hand sides' head symbols
  std::vector<Sort> unknown_sorts(eqs.equations.size(), Sort::One);
  for (size_t i = 0; i < eqs.equations.size(); ++i)
    unknown_sorts[i] = expr_result_sort(sig, eqs.equations[i].second);
  for (const auto& [name, rhs] : eqs.equations)
    check_expr_sorts(sig, rhs, unknown_id, unknown_sorts);

  std::vector<TermAutomaton::Transition> states(eqs.equations.size());
  std::function<int(const TermExpr&)> build = [&](const TermExpr& e) -> int {
    if (e.kind == TermExpr::Ref) {
      auto it = unknown_id.find(e.symbol);
      if (it != unknown_id.end()) return it->second;
      if (sig.kind() == SigKind::Arr || sig.kind() == SigKind::Free) {
        if (sig.kind() == SigKind::Free) sig.record_free(e.symbol, 0);
        int id = static_cast<int>(states.size());
        states.push_back({e.symbol, {}});
        return id;
      }
      throw Error("undefined unknown: " + e.symbol);
    }
    if (e.kind == TermExpr::Letter) {
      int id = static_cast<int>(states.size());
      states.push_back({e.symbol, {}});
      return id;
    }
    if (!e.label.empty())
      throw Error("named ext_" + e.label + " is not allowed in an equation system");
    int id = static_cast<int>(states.size());
    states.push_back({e.symbol, {}});
    std::vector<int> ch;
    for (const auto& c : e.children) ch.push_back(build(c));
    states[id].children = std::move(ch);
    return id;
  };
  for (size_t i = 0; i < eqs.equations.size(); ++i) {
    const TermExpr& rhs = eqs.equations[i].second;
    if (rhs.kind == TermExpr::Letter ||
        (rhs.kind == TermExpr::Ref &&
         (sig.kind() == SigKind::Arr || sig.kind() == SigKind::Free))) {
      states[i] = {rhs.symbol, {}};
      if (sig.kind() == SigKind::Free) sig.record_free(rhs.symbol, 0);
      continue;
    }
    states[i].symbol = rhs.symbol;
    std::vector<int> ch;
    for (const auto& c : rhs.children) ch.push_back(build(c));
    states[i].children = std::move(ch);
  }

  int root = 0;
  if (!root_name.empty()) {
    auto it = unknown_id.find(root_name);
    if (it == unknown_id.end()) throw Error("no equation defines " + root_name);
    root = it->second;
  }
  TermAutomaton a(sig, std::move(states), root);
  auto issues = a.validate();
  for (const auto& msg : issues)
    if (msg.find("unreachable") == std::string::npos) throw Error(msg);
  return a;
}

FiniteTerm finite_term_of_expr(const TermExpr& e, const Signature& sig) {
  if (e.kind == TermExpr::Ref || e.kind == TermExpr::Letter) {
    if (sig.kind() == SigKind::Arr || sig.kind() == SigKind::Free)
      return FiniteTerm::leaf(e.symbol);
    throw Error("unresolved reference in finite term: " + e.symbol);
  }
  FiniteTerm t;
  t.symbol = e.symbol;
  t.label = e.label;
  for (const auto& c : e.children) t.children.push_back(finite_term_of_expr(c, sig));
  return t;
}

bool expr_is_closed(const TermExpr& e, const EquationSystem& eqs) {
  std::set<std::string> unknowns;
  for (const auto& [name, rhs] : eqs.equations) unknowns.insert(name);
  std::function<bool(const TermExpr&)> go = [&](const TermExpr& x) {
    if (x.kind == TermExpr::Ref) return !unknowns.count(x.symbol);
    for (const auto& c : x.children)
      if (!go(c)) return false;
    return true;
  };
  return go(e);
}

Sort sort_of(const Signature& sig, const FiniteTerm& t) {
  auto ty = sig.lookup(t.symbol);
  if (!ty) {
    if (sig.kind() == SigKind::Arr || sig.kind() == SigKind::Free) return Sort::One;
    throw Error("symbol not in signature: " + t.symbol);
  }
  if (static_cast<int>(t.children.size()) != ty->arity)
    throw Error(cat(t.symbol, " expects ", ty->arity, " arguments, got ", t.children.size()));
  for (size_t i = 0; i < t.children.size(); ++i) {
    Sort got = sort_of(sig, t.children[i]);
    if (ty->args[i] != Sort::One && got != Sort::One && got != ty->args[i])
      throw Error(cat("argument ", i + 1, " of ", t.symbol, " has sort ", sort_name(got),
                      ", expected ", sort_name(ty->args[i])));
  }
  return ty->result;
}

}  // namespace gentrees

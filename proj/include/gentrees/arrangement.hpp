#ifndef GENTREES_ARRANGEMENT_HPP
#define GENTREES_ARRANGEMENT_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gentrees/term.hpp"
#include "gentrees/util.hpp"

namespace gentrees {

// ---------------------------------------------------------------------------
// Counts in N u {omega}, saturating.

struct Count {
  bool omega = false;
  unsigned long long n = 0;

  static Count of(unsigned long long k) { return {false, k}; }
  static Count inf() { return {true, 0}; }
  bool is_zero() const { return !omega && n == 0; }
  Count operator+(const Count& o) const {
    if (omega || o.omega) return inf();
    return of(n + o.n);
  }
  bool operator==(const Count& o) const {
    return omega == o.omega && (omega || n == o.n);
  }
  std::string to_text() const { return omega ? "w" : std::to_string(n); }
};

// Multiset of letters with multiplicities in N u {omega}.
class LabelledSet {
 public:
  LabelledSet() = default;
  void add(const std::string& letter, Count c = Count::of(1));
  Count count(const std::string& letter) const;
  const std::map<std::string, Count>& counts() const { return counts_; }
  bool operator==(const LabelledSet& o) const { return counts_ == o.counts_; }
  std::string to_text() const;
  // "a:3 b:w" tokens
  static LabelledSet parse(const std::string& text);
  LabelledSet relabel(const std::map<std::string, std::string>& r) const;

 private:
  std::map<std::string, Count> counts_;  // zero counts are never stored
};

// ---------------------------------------------------------------------------
// Finite arrangements are just words.

struct FiniteArrangement {
  std::vector<std::string> letters;

  size_t size() const { return letters.size(); }
  bool operator==(const FiniteArrangement& o) const = default;
  std::string to_text() const;
  LabelledSet labelled_set() const;
};

// ---------------------------------------------------------------------------
// Regular arrangement expressions.
//
// Grammar:  empty | 'a' | ident | e1 . e2 | e^w | e^-w | sh{e1,...,ek}

struct ArrExpr {
  enum Kind { Empty, Letter, Concat, OmegaPow, OmegaRevPow, Shuffle } kind = Empty;
  std::string letter;              // Kind::Letter
  std::vector<ArrExpr> children;   // Concat: n-ary; powers: 1; Shuffle: members

  static ArrExpr empty() { return {}; }
  static ArrExpr lit(std::string a) { return {Letter, std::move(a), {}}; }
  static ArrExpr concat(std::vector<ArrExpr> es);
  static ArrExpr omega(ArrExpr e) { return {OmegaPow, "", {std::move(e)}}; }
  static ArrExpr omega_rev(ArrExpr e) { return {OmegaRevPow, "", {std::move(e)}}; }
  static ArrExpr shuffle(std::vector<ArrExpr> es) { return {Shuffle, "", std::move(es)}; }
  static ArrExpr word(const std::vector<std::string>& letters);

  bool operator==(const ArrExpr& o) const;
  bool operator<(const ArrExpr& o) const;  // structural, for canonical member order

  static ArrExpr parse(const std::string& text);
  std::string to_text() const;

  // Rewrites by Omega-elimination, x(yx)^w = (xy)^w and its mirror,
  // (x^n)^w = x^w, and shuffle idempotence/absorption. Equal normal forms
  // denote isomorphic arrangements; the converse is not claimed.
  ArrExpr normalized() const;

  ArrExpr relabel(const std::map<std::string, std::string>& r) const;
  LabelledSet labelled_set() const;
  std::set<std::string> alphabet() const;
  // The denoted word when the expression has no powers or shuffles
  // (after normalization).
  std::optional<FiniteArrangement> as_finite() const;
};

// ---------------------------------------------------------------------------
// Lazy arrangements: a possibly infinite labelled linear order given by a
// decidable comparison on printable addresses, a labelling, and a fair
// enumerator. Enumeration is cached; queries are thread-safe.

class LazyArrangement {
 public:
  virtual ~LazyArrangement() = default;

  virtual int compare(const std::string& a, const std::string& b) const = 0;
  virtual std::string label(const std::string& a) const = 0;
  virtual std::optional<LabelledSet> counts() const { return std::nullopt; }
  virtual std::string describe() const = 0;

  // First min(n, size) addresses in fair order.
  std::vector<std::string> enumerate(size_t n) const;
  // True when the enumeration is known to be exhausted (after a call to
  // enumerate that returned fewer items than requested).
  bool known_complete() const;

 protected:
  virtual std::optional<std::string> produce_next() const = 0;

 private:
  mutable std::mutex mu_;
  mutable std::vector<std::string> cache_;
  mutable bool complete_ = false;
};

using LazyPtr = std::shared_ptr<const LazyArrangement>;

// Lazy view of an expression (normalized internally).
LazyPtr lazy_of_expr(const ArrExpr& e);

// Frontier of a term automaton: the maximal occurrences of `targets`
// symbols at or below `anchor`, ordered by <=_lex and labelled by
// `label_of(state, symbol)`.
LazyPtr frontier(const TermAutomaton& a, const std::string& anchor,
                 const std::set<std::string>& targets,
                 std::function<std::string(int, const std::string&)> label_of = {});

LazyPtr lazy_relabel(LazyPtr w, const std::map<std::string, std::string>& r);
LazyPtr lazy_concat(LazyPtr a, LazyPtr b);
LazyPtr lazy_of_word(FiniteArrangement w);

// ---------------------------------------------------------------------------
// The arrangement sum type used across the library.

enum class IsoVerdict { Iso, NotIso, Unknown };

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::Unknown;
  std::string certificate;  // witness or reason
  int bound = 0;            // enumeration bound used for lazy comparisons

  bool iso() const { return verdict == IsoVerdict::Iso; }
  bool not_iso() const { return verdict == IsoVerdict::NotIso; }
};

class Arrangement {
 public:
  Arrangement() : kind_(Kind::Fin) {}
  explicit Arrangement(FiniteArrangement w) : kind_(Kind::Fin), fin_(std::move(w)) {}
  explicit Arrangement(ArrExpr e) : kind_(Kind::Expr), expr_(std::move(e)) {}
  explicit Arrangement(LazyPtr l) : kind_(Kind::Lazy), lazy_(std::move(l)) {}

  static Arrangement word(std::vector<std::string> letters) {
    return Arrangement(FiniteArrangement{std::move(letters)});
  }

  bool is_finite_backed() const { return kind_ == Kind::Fin; }
  bool is_expr_backed() const { return kind_ == Kind::Expr; }
  bool is_lazy_backed() const { return kind_ == Kind::Lazy; }
  const ArrExpr& expr() const { return expr_; }

  // Exact letter multiplicities when decidable for this backing.
  std::optional<LabelledSet> counts() const;
  // The underlying finite word, when the arrangement is known finite.
  std::optional<FiniteArrangement> as_finite() const;
  LazyPtr lazy_view() const;

  Arrangement relabel(const std::map<std::string, std::string>& r) const;
  std::string to_text() const;

  // Positions nearest `center` (default: the enumeration head) in
  // enumeration order, sorted by the arrangement order.
  FiniteArrangement window(size_t k, const std::optional<std::string>& center = {}) const;

  friend IsoResult iso(const Arrangement& w1, const Arrangement& w2, int bound);

 private:
  enum class Kind { Fin, Expr, Lazy };
  Kind kind_;
  FiniteArrangement fin_;
  ArrExpr expr_;
  LazyPtr lazy_;
};

// Concatenation; Omega (the empty arrangement) is neutral on both sides.
Arrangement concat(const Arrangement& w1, const Arrangement& w2);

// Isomorphism oracle. Exact on finite inputs; decides the normal-form
// fragment on expressions; count certificates and bounded enumeration on
// lazy inputs, otherwise Unknown.
IsoResult iso(const Arrangement& w1, const Arrangement& w2, int bound = 64);

}  // namespace gentrees

#endif

#ifndef GENTREES_TERM_HPP
#define GENTREES_TERM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gentrees/util.hpp"

namespace gentrees {

// Sorts. Single-sorted signatures use Sort::One.
enum class Sort { One, T, F, H };

std::string sort_name(Sort s);

// The signatures used throughout:
//   F       = { . : txt->t, ext : t->t, Omega : t }            (SBJ-trees)
//   Fprime  = { . , U+ : fxf->f, ext : f->t, mkf : t->f, Omega_t, Omega_f }
//   Fsecond = { . , x : hxh->h, ext : hxh->t, mkh : t->h, Omega_t, Omega_h }
//   Arr     = { . : 2, Omega : 0 } plus nullary letters
//   Free    = any symbols, arities fixed at first use, single sort
enum class SigKind { F, Fprime, Fsecond, Arr, Free };

struct OpType {
  int arity = 0;
  Sort result = Sort::One;
  std::vector<Sort> args;
};

class Signature {
 public:
  static Signature sbjt();                                  // F
  static Signature sjt();                                   // F'
  static Signature sojt();                                  // F''
  static Signature arrangement(std::set<std::string> letters);
  static Signature free();

  SigKind kind() const { return kind_; }
  // Letters (nullary alphabet symbols) for Arr signatures.
  const std::set<std::string>& letters() const { return letters_; }

  // Looks up a symbol; for Arr, unknown identifiers are treated as letters
  // if declared; for Free, arity is recorded on first use (mutable table).
  std::optional<OpType> lookup(const std::string& symbol) const;
  void record_free(const std::string& symbol, int arity);

  bool is_concat(const std::string& symbol) const { return symbol == "."; }
  bool is_ext(const std::string& symbol) const { return symbol == "ext"; }
  bool is_omega(const std::string& symbol) const;

 private:
  SigKind kind_ = SigKind::Free;
  std::map<std::string, OpType> ops_;
  std::set<std::string> letters_;
  mutable std::map<std::string, int> free_arities_;
};

// Explicit finite term. `label` carries the node name of an ext_a occurrence
// (empty when unnamed).
struct FiniteTerm {
  std::string symbol;
  std::string label;
  std::vector<FiniteTerm> children;

  static FiniteTerm leaf(std::string sym) { return {std::move(sym), "", {}}; }
  static FiniteTerm node(std::string sym, std::vector<FiniteTerm> ch) {
    return {std::move(sym), "", std::move(ch)};
  }
  std::string to_text() const;
  bool operator==(const FiniteTerm& o) const = default;
};

// Finite-state presentation of a regular term: a total map
// state -> (symbol, argument states), plus a root state.
class TermAutomaton {
 public:
  struct Transition {
    std::string symbol;
    std::vector<int> children;
  };

  TermAutomaton() = default;
  TermAutomaton(Signature sig, std::vector<Transition> states, int root);

  static TermAutomaton from_finite(const Signature& sig, const FiniteTerm& t);

  const Signature& sig() const { return sig_; }
  int root() const { return root_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  const Transition& at(int q) const { return states_[q]; }

  // Arity/sort consistency plus reachability; returns one message per issue.
  std::vector<std::string> validate() const;

  // Sort of a state (One for single-sorted signatures).
  Sort state_sort(int q) const;

  // State reached by walking the Dewey word from the root; nullopt if the
  // word falls off the term.
  std::optional<int> state_at(const std::string& pos) const;
  std::optional<std::string> symbol_at(const std::string& pos) const;

  // Finite term agreeing with this automaton on positions shorter than
  // depth, with sort-matching Omega symbols at the cut.
  FiniteTerm truncate(int depth) const;

  // Merges states with identical transition structure (hash-consing-style
  // canonicalization); preserves the unfolded term.
  TermAutomaton canonical_merge() const;

  bool equal_unfolding(const TermAutomaton& other) const;

 private:
  Signature sig_;
  std::vector<Transition> states_;
  int root_ = 0;
};

// Dewey position calculus. Positions are words over digits '1'..'9'.
bool pos_is_prefix(const std::string& u, const std::string& v);  // u prefix of v
// <=_t : reversal of the prefix order (u <=_t v iff v is a prefix of u).
bool pos_leq_t(const std::string& u, const std::string& v);
// Longest common prefix plus each side's next digit (0 when none).
struct PosMeet {
  std::string meet;
  char branch_u = 0;
  char branch_v = 0;
};
PosMeet pos_meet(const std::string& u, const std::string& v);
// Lexicographic order: u <=_lex v iff v = uw, or they diverge with a
// smaller digit on u's side.
int lex_compare(const std::string& u, const std::string& v);

// <<= order on terms: every non-Omega occurrence of t1 carries the same
// symbol in t2.
bool term_leq(const Signature& sig, const FiniteTerm& t1, const FiniteTerm& t2);
bool term_leq(const Signature& sig, const FiniteTerm& t1, const TermAutomaton& t2);

// A parsed term expression: operators, letters, and unknown references.
struct TermExpr {
  enum Kind { Op, Ref, Letter } kind = Op;
  std::string symbol;  // operator name, reference target, or letter
  std::string label;   // ext label when kind==Op and symbol=="ext"
  std::vector<TermExpr> children;
};

// Parses one term expression. Infix: '.' (concatenation), 'U+' (forest
// union), 'x' (hedge concatenation); prefix: ext(..), ext_a(..), ext2(..),
// mkf(..), mkh(..); nullary: Omega, Omega_t, Omega_f, Omega_h, letters.
TermExpr parse_term_expr(const std::string& text);

// An equation system "name = expr" per line; '#' comments.
struct EquationSystem {
  std::vector<std::pair<std::string, TermExpr>> equations;
  static EquationSystem parse(const std::string& text);
};

// Infers the signature kind of a system or expression from the symbols used
// (Fprime if U+/mkf/Omega_f appear, Fsecond if x/mkh/ext2/Omega_h appear,
// Arr if letters appear, else F).
SigKind infer_sig_kind(const EquationSystem& eqs);

// Builds the automaton whose unfolding is the unique solution. Guardedness:
// no right-hand side may be a bare unknown. Named ext occurrences are
// rejected here (names cannot recur in an infinite unfolding); use
// finite_term_of_expr for finite labelled terms.
TermAutomaton from_equations(const EquationSystem& eqs, const Signature& sig,
                             const std::string& root_name = "");

// Converts an expression without unknown references into a finite term.
FiniteTerm finite_term_of_expr(const TermExpr& e, const Signature& sig);

// True if the expression references no unknowns.
bool expr_is_closed(const TermExpr& e, const EquationSystem& eqs);

// Sort-checks a finite term; returns its sort or throws Error.
Sort sort_of(const Signature& sig, const FiniteTerm& t);

}  // namespace gentrees

#endif

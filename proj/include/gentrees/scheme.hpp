#ifndef GENTREES_SCHEME_HPP
#define GENTREES_SCHEME_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gentrees/arrangement.hpp"
#include "gentrees/sbjt.hpp"
#include "gentrees/sjt_ojt.hpp"

namespace gentrees {

// ---------------------------------------------------------------------------
// Description schemes. The three kinds share states Q; SJ and SOJ schemes
// add direction labels D. Arrangements may be finite words, regular
// expressions, or lazy (automaton frontiers).

enum class SchemeKind { SBJ, SJ, SOJ };

struct Scheme {
  SchemeKind kind = SchemeKind::SBJ;
  std::vector<std::string> states;            // Q
  std::vector<std::string> dirs;              // D (SJ, SOJ)
  Arrangement axis;                           // w_Ax over Q
  std::map<std::string, Arrangement> word;    // SBJ: w_q over Q
  std::map<std::string, LabelledSet> mset;    // SJ: m_q over D
  std::map<std::string, Arrangement> wminus;  // SOJ: w_q^- over D
  std::map<std::string, Arrangement> wplus;   // SOJ: w_q^+ over D
  std::map<std::string, Arrangement> dir_word;  // SJ/SOJ: w_d over Q

  std::string to_text() const;
  static Scheme parse(const std::string& text);

  // True when every arrangement is backed by a finite word.
  bool finite_words() const;
};

// A run: node names to states, and (SJ/SOJ) line indices to directions.
struct Run {
  std::map<std::string, std::string> state_of;
  std::map<int, std::string> dir_of_line;
};

// ---------------------------------------------------------------------------
// Standard schemes (states are the nodes, the run is the identity).

std::pair<Scheme, Run> standard_scheme(const SBJTree& j);
std::pair<Scheme, Run> standard_scheme_sj(const SJForest& j);
std::pair<Scheme, Run> standard_scheme_soj(const SOJTree& j);

// ---------------------------------------------------------------------------
// Scheme of a regular term over F: states are the automaton's ext states,
// per-state words are the ext frontiers below the state's son, expressed as
// regular expressions when the frontier equations fall in the supported
// fragment and as lazy frontiers otherwise.

Scheme scheme_of_term(const TermAutomaton& a);

// ---------------------------------------------------------------------------
// describes

struct DescribeReport {
  enum Status { Ok, OkUpToBound, Violation } status = Ok;
  std::string detail;
  int bound = 0;

  bool ok() const { return status != Violation; }
};

DescribeReport describes(const Scheme& d, const SBJTree& j, const Run& run,
                         int bound = 64);
DescribeReport describes_sj(const Scheme& d, const SJForest& j, const Run& run,
                            int bound = 64);
DescribeReport describes_soj(const Scheme& d, const SOJTree& j, const Run& run,
                             int bound = 64);

// describes for the lazy value of a regular term over F against a scheme,
// materialized out to the given node bound
DescribeReport describes_lazy(const Scheme& d, const LazySBJTree& j, int node_bound,
                              int bound = 64);

// ---------------------------------------------------------------------------
// unfolding

struct Unfolding {
  // materialized structured tree (kind matches the scheme)
  SchemeKind kind = SchemeKind::SBJ;
  SBJTree sbj;
  SJForest sj;
  SOJTree soj;
  Run run;  // run showing that the scheme describes the unfolding
  bool truncated = false;  // some arrangement enumeration was cut off
};

// Nodes are the scheme's position sequences with depth <= depth_bound and
// every coordinate among the first width_bound enumerated positions of its
// arrangement (finite arrangements are always exhausted).
Unfolding unfold(const Scheme& d, int depth_bound, int width_bound);

// Exact comparison oracle on explicit unfolding sequences: each coordinate
// is an address in the respective arrangement.
struct UnfoldNode {
  std::vector<std::pair<std::string, std::string>> coords;  // (owner, address)
};

// ---------------------------------------------------------------------------
// quotients and minimization

// Quotient by a state map; requires s(q) = s(q') to imply isomorphic
// relabelled words (checked through the iso oracle; Unknown outcomes reject).
Scheme quotient(const Scheme& d, const std::map<std::string, std::string>& s);

struct MinimizeResult {
  bool supported = false;
  std::string diagnostic;  // set when unsupported
  Scheme canonical;        // states renamed canonically
};

// Partition refinement on finite-word schemes; canonical state names follow
// a breadth-first scan from the axis word. Isomorphic inputs yield
// byte-identical canonical schemes.
MinimizeResult minimize(const Scheme& d);

// Convenience: canonical text of a minimized scheme (empty when unsupported).
std::string canonical_text(const Scheme& d);

}  // namespace gentrees

#endif

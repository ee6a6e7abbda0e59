#ifndef GENTREES_POSVALUE_HPP
#define GENTREES_POSVALUE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gentrees/term.hpp"

namespace gentrees::posval {

// The position-level relations behind the value of a term. All take a
// symbol oracle for positions of the underlying term and work on Dewey
// words; every query is a finite walk between the arguments and their meet.
using SymbolFn = std::function<std::string(const std::string&)>;

// u ~ v: every position strictly above u or v, up to their meet inclusive,
// is a concatenation.
bool equiv(const SymbolFn& sym, const std::string& u, const std::string& v);

// u <= v via the son characterization: u <=_t v, or the meet is a
// concatenation with u under its first son, v under its second, and
// v ~ meet.
bool leq_sons(const SymbolFn& sym, const std::string& u, const std::string& v);

// u <= v via a witness: some ext occurrence w above-or-equal u with
// w <=_lex v and w ~ v. `ext_prefixes_of_u` lists the ext occurrences on
// u's prefix chain, u included when it is one.
bool leq_witness(const SymbolFn& sym, const std::vector<std::string>& ext_prefixes_of_u,
                 const std::string& v);

// Join of two ext occurrences in the value order: the larger of a
// comparable pair; the first ext above the right-hand side below a
// concatenation meet; the meet itself when it is a binary ext; absent
// across forest/hedge unions.
std::optional<std::string> join(const SymbolFn& sym, const std::string& u,
                                const std::string& v, bool u_leq_v, bool v_leq_u);

// The horizontal order of ordered-join-tree values on incomparable ext
// occurrences (cases on the meet symbol); preconditions: u, v ext
// occurrences, neither below the other in the value order.
bool sqle_incomparable(const SymbolFn& sym, const std::string& u, const std::string& v);

// Ext occurrences on the prefix chain of u, shortest first, u included.
std::vector<std::string> ext_prefixes(const SymbolFn& sym, const std::string& u);

}  // namespace gentrees::posval

#endif

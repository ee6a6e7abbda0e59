#include "gentrees/posvalue.hpp"

#include "gentrees/util.hpp"

namespace gentrees::posval {

bool equiv(const SymbolFn& sym, const std::string& u, const std::string& v) {
  std::string meet = pos_meet(u, v).meet;
  auto side = [&](const std::string& x) {
    for (size_t len = meet.size(); len < x.size(); ++len)
      if (sym(x.substr(0, len)) != ".") return false;
    return true;
  };
  return side(u) && side(v);
}

bool leq_sons(const SymbolFn& sym, const std::string& u, const std::string& v) {
  if (pos_leq_t(u, v)) return true;
  PosMeet m = pos_meet(u, v);
  if (m.branch_u != '1' || m.branch_v != '2') return false;
  if (sym(m.meet) != ".") return false;
  return equiv(sym, v, m.meet);
}

bool leq_witness(const SymbolFn& sym, const std::vector<std::string>& ext_prefixes_of_u,
                 const std::string& v) {
  for (const auto& w : ext_prefixes_of_u)
    if (lex_compare(w, v) <= 0 && equiv(sym, w, v)) return true;
  return false;
}

std::vector<std::string> ext_prefixes(const SymbolFn& sym, const std::string& u) {
  std::vector<std::string> out;
  for (size_t len = 0; len <= u.size(); ++len) {
    std::string w = u.substr(0, len);
    if (sym(w) == "ext") out.push_back(w);
  }
  return out;
}

namespace {

// shortest ext occurrence strictly above x and strictly below the meet
std::optional<std::string> first_ext_above(const SymbolFn& sym, const std::string& x,
                                           size_t meet_len) {
  for (size_t len = meet_len + 1; len < x.size(); ++len) {
    std::string z = x.substr(0, len);
    if (sym(z) == "ext") return z;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> join(const SymbolFn& sym, const std::string& u,
                                const std::string& v, bool u_leq_v, bool v_leq_u) {
  if (u_leq_v) return v;
  if (v_leq_u) return u;
  PosMeet m = pos_meet(u, v);
  std::string ms = sym(m.meet);
  if (ms == "ext") return m.meet;  // binary ext: the node at the meet
  if (ms != ".") return std::nullopt;  // forest or hedge union: no join
  const std::string& right = m.branch_u == '2' ? u : v;
  auto z = first_ext_above(sym, right, m.meet.size());
  if (!z) throw Error(cat("join: incomparable pair without a separating ext: ", u, ", ", v));
  return z;
}

bool sqle_incomparable(const SymbolFn& sym, const std::string& u, const std::string& v) {
  PosMeet m = pos_meet(u, v);
  std::string ms = sym(m.meet);
  if (ms == "x" || ms == "ext")  // same hedge level or the two sides of an ext
    return m.branch_u == '1';
  if (ms != ".") throw Error("sqle: unexpected meet symbol " + ms);
  if (m.branch_u == '1') {
    // u left, v right: u before v iff v hangs under the second son of the
    // first ext above it
    auto z = first_ext_above(sym, v, m.meet.size());
    if (!z) throw Error("sqle: right side equivalent to the meet");
    return v.size() > z->size() && v[z->size()] == '2';
  }
  // u right, v left: u before v iff u hangs under the first son of the
  // first ext above it
  auto z = first_ext_above(sym, u, m.meet.size());
  if (!z) throw Error("sqle: right side equivalent to the meet");
  return u.size() > z->size() && u[z->size()] == '1';
}

}  // namespace gentrees::posval

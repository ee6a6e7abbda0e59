#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "gentrees/sbjt.hpp"

using namespace gentrees;
using gentrees_tests::random_binary_tree;
using gentrees_tests::random_f_term;

namespace {

// the term of Figure 4, denoting the SBJ-tree of Figure 3
FiniteTerm fig4_term() {
  TermExpr e = parse_term_expr(
      "(ext_f(Omega) . (ext_e(ext_h(Omega) . ext_g(ext_i(Omega)))"
      " . ext_d(ext_k(Omega) . ext_j(ext_m(Omega)))))"
      " . (ext_c(ext_b(Omega)) . ext_a(Omega))");
  return finite_term_of_expr(e, Signature::sbjt());
}

std::vector<std::string> line_names(const SBJTree& j, int line) {
  std::vector<std::string> out;
  for (int x : j.line_nodes(line)) out.push_back(j.base().name(x));
  return out;
}

}  // namespace

TEST_CASE("value of the Figure 4 term") {
  SBJTree j = val_sbjt(fig4_term());
  REQUIRE(j.base().size() == 12);
  const Poset& p = j.base();
  auto lt = [&](const std::string& a, const std::string& b) {
    return p.lt(p.index_or_throw(a), p.index_or_throw(b));
  };
  auto incomp = [&](const std::string& a, const std::string& b) {
    return !p.comparable(p.index_or_throw(a), p.index_or_throw(b));
  };
  // order facts of Example 3.16(2)
  CHECK(lt("i", "d"));
  CHECK(lt("i", "g"));
  CHECK(lt("g", "e"));
  CHECK(lt("m", "j"));
  CHECK(lt("j", "d"));
  CHECK(lt("f", "e"));
  CHECK(lt("e", "d"));
  CHECK(lt("d", "c"));
  CHECK(lt("c", "a"));
  CHECK(incomp("i", "j"));
  // the axis word is fedca
  CHECK(line_names(j, j.axis()) == std::vector<std::string>{"f", "e", "d", "c", "a"});
  // the other lines
  std::set<std::vector<std::string>> lines;
  for (size_t li = 0; li < j.lines().size(); ++li)
    if (static_cast<int>(li) != j.axis()) lines.insert(line_names(j, static_cast<int>(li)));
  std::set<std::vector<std::string>> expect = {{"b"}, {"h", "g"}, {"i"}, {"k", "j"}, {"m"}};
  CHECK(lines == expect);
  // line tops as in Figure 3
  auto top_of_node_line = [&](const std::string& n) {
    int li = j.line_of(p.index_or_throw(n));
    int t = j.top_of_line(li);
    return t < 0 ? std::string("-") : p.name(t);
  };
  CHECK(top_of_node_line("b") == "c");
  CHECK(top_of_node_line("h") == "e");
  CHECK(top_of_node_line("i") == "g");
  CHECK(top_of_node_line("k") == "d");
  CHECK(top_of_node_line("m") == "j");
}

TEST_CASE("Omega is neutral for concatenation") {
  SBJTree j = val_sbjt(fig4_term());
  CHECK(sbjt_iso(op_concat(j, SBJTree()), j));
  CHECK(sbjt_iso(op_concat(SBJTree(), j), j));
}

TEST_CASE("concat of two singletons is a two-node axis") {
  SBJTree a = SBJTree::singleton("a");
  SBJTree b = SBJTree::singleton("b");
  SBJTree ab = op_concat(a, b);
  CHECK(ab.base().size() == 2);
  CHECK(ab.lines().size() == 1);
  CHECK(ab.base().lt(ab.base().index_or_throw("a"), ab.base().index_or_throw("b")));
}

TEST_CASE("splitting along the axis inverts concatenation") {
  std::mt19937 rng(42);
  for (int round = 0; round < 25; ++round) {
    FiniteTerm t = random_f_term(rng, 8);
    SBJTree j = val_sbjt(t);
    if (j.empty()) continue;
    const auto& axis = j.axis_line();
    for (size_t cut = 1; cut < axis.size(); ++cut) {
      // J1 = down-set of the lower axis part, J2 the rest (Def 3.13 recipe)
      std::vector<int> lowA(axis.begin(), axis.begin() + static_cast<long>(cut));
      std::vector<int> n1 = j.base().down_set(lowA);
      std::vector<bool> in1(j.base().size(), false);
      for (int x : n1) in1[x] = true;

      auto build_part = [&](bool lower) {
        std::vector<int> keep;
        for (int x = 0; x < j.base().size(); ++x)
          if (in1[x] == lower) keep.push_back(x);
        Poset p = j.base().induced(keep);
        std::vector<std::vector<int>> lines;
        for (size_t li = 0; li < j.lines().size(); ++li) {
          std::vector<int> ln;
          for (int x : j.line_nodes(static_cast<int>(li)))
            if (in1[x] == lower) ln.push_back(p.index_or_throw(j.base().name(x)));
          if (!ln.empty()) lines.push_back(std::move(ln));
        }
        return SBJTree(std::move(p), std::move(lines));
      };
      SBJTree j1 = build_part(true);
      SBJTree j2 = build_part(false);
      CHECK(sbjt_iso(op_concat(j1, j2), j));
    }
  }
}

TEST_CASE("ext of the empty tree is a singleton") {
  SBJTree e = op_ext(SBJTree(), "u");
  CHECK(e.base().size() == 1);
  CHECK(e.lines().size() == 1);
}

TEST_CASE("ext of a chain hangs the old axis below the new top") {
  SBJTree ab = op_concat(SBJTree::singleton("a"), SBJTree::singleton("b"));
  SBJTree e = op_ext(ab, "u");
  const Poset& p = e.base();
  CHECK(p.lt(p.index_or_throw("a"), p.index_or_throw("u")));
  CHECK(p.lt(p.index_or_throw("b"), p.index_or_throw("u")));
  CHECK(e.lines().size() == 2);
  CHECK(line_names(e, e.axis()) == std::vector<std::string>{"u"});
  int old_axis = 1 - e.axis();
  CHECK(e.top_of_line(old_axis) == p.index_or_throw("u"));
  // depth shifted by one
  CHECK(e.depth(p.index_or_throw("a")) == 1);
}

TEST_CASE("iterated ext gives the unary join-tree with singleton lines") {
  SBJTree j;
  for (const char* n : {"a1", "a2", "a3", "a4"}) j = op_ext(j, n);
  CHECK(j.base().size() == 4);
  CHECK(j.lines().size() == 4);
  for (const auto& ln : j.lines()) CHECK(ln.size() == 1);
  const Poset& p = j.base();
  CHECK(p.lt(p.index_or_throw("a1"), p.index_or_throw("a2")));
  CHECK(p.lt(p.index_or_throw("a3"), p.index_or_throw("a4")));
}

TEST_CASE("val is a homomorphism") {
  std::mt19937 rng(7);
  int agree = 0;
  for (int round = 0; round < 100; ++round) {
    int ctr = 0;
    FiniteTerm t1 = random_f_term(rng, 5, &ctr);
    FiniteTerm t2 = random_f_term(rng, 5, &ctr);
    SBJTree v1 = val_sbjt(t1), v2 = val_sbjt(t2);
    // concatenation
    FiniteTerm cat = FiniteTerm::node(".", {t1, t2});
    CHECK(sbjt_iso(val_sbjt(cat), op_concat(v1, v2)));
    // extension
    FiniteTerm ex = FiniteTerm::node("ext", {t1});
    ex.label = "fresh";
    CHECK(sbjt_iso(val_sbjt(ex), op_ext(v1, "fresh")));
    ++agree;
  }
  CHECK(agree == 100);
}

TEST_CASE("lazy value of t1: incomparabilities and the omega axis") {
  auto eqs = EquationSystem::parse("t1 = ext(ext(Omega)) . t1\n");
  LazySBJTree lazy(from_equations(eqs, Signature::sbjt()));
  // a' and c' are the occurrences 11 and 2211; 221 is an ext between
  // 2211 and the root, so they are incomparable
  CHECK(lazy.is_node("11"));
  CHECK(lazy.is_node("2211"));
  CHECK_FALSE(lazy.leq("11", "2211"));
  CHECK_FALSE(lazy.leq("2211", "11"));
  // a < b < c ... on the axis (occurrences 1, 21, 221)
  CHECK(lazy.leq("1", "21"));
  CHECK(lazy.leq("21", "221"));
  CHECK(lazy.leq("1", "221"));
  CHECK(lazy.equiv("1", "21"));
  CHECK_FALSE(lazy.equiv("111", "1"));
  // a' < a (11 is below 1)
  CHECK(lazy.leq("11", "1"));
  // join of a' and c' is c (the axis node above c')
  CHECK(lazy.join("11", "2211") == std::optional<std::string>("221"));

  SBJTree m = lazy.materialize(10);
  // axis nodes are 2^k 1 for k <= 9, primed nodes 2^k 11 for k <= 8
  CHECK(m.base().size() == 10 + 9);
  auto axis = m.line_nodes(m.axis());
  REQUIRE(axis.size() == 10);
  for (size_t i = 0; i + 1 < axis.size(); ++i) CHECK(m.base().lt(axis[i], axis[i + 1]));
  CHECK(m.base().name(axis[0]) == "@1");
  CHECK(m.base().name(axis[1]) == "@21");
}

TEST_CASE("lazy leq agrees with the order of finite truncations") {
  for (const char* eq :
       {"t = ext(ext(Omega)) . t\n", "t = t . (ext(t) . t)\n", "t = ext(t) . (t . ext(Omega))\n"}) {
    auto eqs = EquationSystem::parse(eq);
    TermAutomaton a = from_equations(eqs, Signature::sbjt());
    LazySBJTree lazy(a);
    for (int d = 3; d <= 6; ++d) {
      SBJTree cut = val_sbjt(a.truncate(d));
      const Poset& p = cut.base();
      for (int x = 0; x < p.size(); ++x)
        for (int y = 0; y < p.size(); ++y) {
          // names in the truncation are @positions
          std::string u = p.name(x).substr(1), v = p.name(y).substr(1);
          CHECK(lazy.leq(u, v) == p.leq(x, y));
          CHECK(lazy.leq_via_witness(u, v) == lazy.leq_via_sons(u, v));
        }
    }
  }
}

TEST_CASE("structure of a chain is a single line") {
  Poset p = Poset::parse("a < b\nb < c\n");
  SBJTree j = structure(p, {0, 1, 2});
  CHECK(j.lines().size() == 1);
  CHECK(j.axis() == 0);
}

TEST_CASE("structure of the full binary tree of height 2, left first") {
  Poset p = Poset::parse("a < x\nb < x\nc < y\nd < y\nx < r\ny < r\n");
  std::vector<int> enumeration;
  for (const char* n : {"a", "b", "c", "d", "r", "x", "y"})
    enumeration.push_back(p.index_or_throw(n));
  SBJTree j = structure(p, enumeration);
  CHECK(j.lines().size() == 4);
  CHECK(line_names(j, j.axis()) == std::vector<std::string>{"a", "x", "r"});
  std::set<std::vector<std::string>> rest;
  for (size_t li = 0; li < j.lines().size(); ++li)
    if (static_cast<int>(li) != j.axis()) rest.insert(line_names(j, static_cast<int>(li)));
  CHECK(rest == std::set<std::vector<std::string>>{{"b"}, {"c", "y"}, {"d"}});
}

TEST_CASE("structure output is valid on random binary join-trees") {
  std::mt19937 rng(13);
  for (int round = 0; round < 60; ++round) {
    Poset p = random_binary_tree(rng, 2 + static_cast<int>(rng() % 9));
    std::vector<int> enumeration;
    for (int i = 0; i < p.size(); ++i) enumeration.push_back(i);
    std::shuffle(enumeration.begin(), enumeration.end(), rng);
    SBJTree j = structure(p, enumeration);  // constructor validates
    CHECK(j.base().same_order(p));
    // every node's top chain is finite and strictly depth-decreasing
    for (int x = 0; x < p.size(); ++x) {
      int li = j.line_of(x);
      int d = j.depth(x);
      while (j.top_of_line(li) >= 0) {
        int t = j.top_of_line(li);
        CHECK(j.depth(t) == d - 1);
        d = j.depth(t);
        li = j.line_of(t);
      }
      CHECK(d == 0);
    }
    // S(J) encoding is accepted and reconstructs the same lines
    auto [n0, n1] = j.encode_S();
    auto v = validate_S({p, n0, n1});
    auto* back = std::get_if<SBJTree>(&v);
    REQUIRE(back);
    CHECK(sbjt_canonical(*back) == sbjt_canonical(j));
  }
}

TEST_CASE("chain encodes with empty N1; swapped encoding is rejected") {
  Poset p = Poset::parse("a < b\nb < c\n");
  SBJTree j = structure(p, {0, 1, 2});
  auto [n0, n1] = j.encode_S();
  CHECK(n0.size() == 3);
  CHECK(n1.empty());
  auto v = validate_S({p, n1, n0});  // swapped: axis would lie in N1
  CHECK(std::holds_alternative<SViolation>(v));
}

TEST_CASE("laminar components of N0 are the even-depth lines") {
  std::mt19937 rng(29);
  for (int round = 0; round < 20; ++round) {
    Poset p = random_binary_tree(rng, 8);
    std::vector<int> enumeration;
    for (int i = 0; i < p.size(); ++i) enumeration.push_back(i);
    SBJTree j = structure(p, enumeration);
    auto [n0, n1] = j.encode_S();
    auto r = p.laminar_components(n0);
    auto* comps = std::get_if<std::vector<std::vector<int>>>(&r);
    REQUIRE(comps);
    std::set<std::vector<int>> expect;
    for (size_t li = 0; li < j.lines().size(); ++li)
      if (j.depth(j.line_nodes(static_cast<int>(li))[0]) % 2 == 0) {
        std::vector<int> ln = j.lines()[li];
        std::sort(ln.begin(), ln.end());
        expect.insert(ln);
      }
    CHECK(std::set<std::vector<int>>(comps->begin(), comps->end()) == expect);
  }
}

TEST_CASE("synthesize: singleton and the Figure 3 axis term") {
  CHECK(synthesize(SBJTree::singleton("u")).to_text() == "ext_u(Omega)");
  SBJTree j = val_sbjt(fig4_term());
  FiniteTerm t = synthesize(j);
  CHECK(sbjt_iso(val_sbjt(t), j));
}

TEST_CASE("synthesize round trip on random SBJ-trees") {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 100) {
    FiniteTerm t = random_f_term(rng, 12);
    SBJTree j = val_sbjt(t);
    if (j.base().size() > 12) continue;
    SBJTree back = val_sbjt(synthesize(j));
    CHECK(sbjt_iso(back, j));
    ++done;
  }
  // and via structurings of random binary join-trees
  for (int round = 0; round < 50; ++round) {
    Poset p = random_binary_tree(rng, 2 + static_cast<int>(rng() % 8));
    std::vector<int> enumeration;
    for (int i = 0; i < p.size(); ++i) enumeration.push_back(i);
    std::shuffle(enumeration.begin(), enumeration.end(), rng);
    SBJTree j = structure(p, enumeration);
    CHECK(sbjt_iso(val_sbjt(synthesize(j)), j));
  }
}

TEST_CASE("SBJ-tree text round trip") {
  SBJTree j = val_sbjt(fig4_term());
  SBJTree k = SBJTree::parse(j.to_text());
  CHECK(sbjt_canonical(j) == sbjt_canonical(k));
  CHECK(k.base().same_order(j.base()));
}

TEST_CASE("fgs forgets the structuring only") {
  SBJTree j = val_sbjt(fig4_term());
  Poset p = j.fgs();
  CHECK(p.size() == j.base().size());
  CHECK(p.same_order(j.base()));
  CHECK(val_sbjt(FiniteTerm::node("ext", {FiniteTerm::leaf("Omega")})).fgs().size() == 1);
}

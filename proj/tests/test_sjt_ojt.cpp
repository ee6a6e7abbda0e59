#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "gentrees/sjt_ojt.hpp"

using namespace gentrees;
using gentrees_tests::random_rooted_tree;

namespace {

FiniteTerm fp_term(const std::string& text) {
  return finite_term_of_expr(parse_term_expr(text), Signature::sjt());
}

FiniteTerm fs_term(const std::string& text) {
  return finite_term_of_expr(parse_term_expr(text), Signature::sojt());
}

// the Example 4.10 term, with B selecting the placement of x':
//   "axis"  : B = ext_xp(Oh, Oh)                    (x' on the axis X of B)
//   "left"  : B = ext_b2(mkh(ext_xp(Oh, Oh)), Oh)   (x' to the left of X)
//   "right" : B = ext_b2(Oh, mkh(ext_xp(Oh, Oh)))   (x' to the right of X)
FiniteTerm example_410(const std::string& variant) {
  std::string B;
  if (variant == "axis")
    B = "ext_xp(Omega_h, Omega_h)";
  else if (variant == "left")
    B = "ext_b2(mkh(ext_xp(Omega_h, Omega_h)), Omega_h)";
  else
    B = "ext_b2(Omega_h, mkh(ext_xp(Omega_h, Omega_h)))";
  std::string text =
      "ext_x(Omega_h, Omega_h)"
      " . ((ext_u(mkh(ext_y(Omega_h, Omega_h)) x mkh(ext_y2(Omega_h, Omega_h)),"
      "          mkh(ext_w(Omega_h, Omega_h)))"
      "     . ext_v(mkh(ext_z(Omega_h, Omega_h)), mkh(ext_z2(Omega_h, Omega_h))))"
      "    . " + B + ")";
  return fs_term(text);
}

// random finite term over F'' of sort t
FiniteTerm random_fs_term(std::mt19937& rng, int budget, int* counter) {
  std::function<FiniteTerm(int)> gen_t = [&](int b) -> FiniteTerm {
    std::uniform_int_distribution<int> d(0, 9);
    int roll = d(rng);
    std::function<FiniteTerm(int)> gen_h = [&](int bh) -> FiniteTerm {
      std::uniform_int_distribution<int> dh(0, 9);
      int r = dh(rng);
      if (bh <= 0 || r < 3) return FiniteTerm::leaf("Omega_h");
      if (r < 7) return FiniteTerm::node("mkh", {gen_t(bh - 1)});
      int left = bh / 2;
      return FiniteTerm::node("x", {gen_h(left), gen_h(bh - left - 1)});
    };
    if (b <= 0 || roll < 2) return FiniteTerm::leaf("Omega_t");
    if (roll < 6) {
      int left = (b - 1) / 2;
      FiniteTerm t =
          FiniteTerm::node("ext", {gen_h(left), gen_h(b - 1 - left)});
      t.label = "n" + std::to_string((*counter)++);
      return t;
    }
    int left = b / 2;
    return FiniteTerm::node(".", {gen_t(left), gen_t(b - left)});
  };
  return gen_t(budget);
}

// random finite term over F' of a requested sort
FiniteTerm random_fp_term(std::mt19937& rng, int budget, Sort sort, int* counter) {
  std::function<FiniteTerm(int)> gen_t = [&](int b) -> FiniteTerm {
    std::uniform_int_distribution<int> d(0, 9);
    int roll = d(rng);
    std::function<FiniteTerm(int)> gen_f = [&](int bf) -> FiniteTerm {
      std::uniform_int_distribution<int> df(0, 9);
      int r = df(rng);
      if (bf <= 0 || r < 3) return FiniteTerm::leaf("Omega_f");
      if (r < 7) return FiniteTerm::node("mkf", {gen_t(bf - 1)});
      int left = bf / 2;
      return FiniteTerm::node("U+", {gen_f(left), gen_f(bf - left - 1)});
    };
    if (b <= 0 || roll < 2) return FiniteTerm::leaf("Omega_t");
    if (roll < 6) {
      FiniteTerm t = FiniteTerm::node("ext", {gen_f(b - 1)});
      t.label = "n" + std::to_string((*counter)++);
      return t;
    }
    int left = b / 2;
    return FiniteTerm::node(".", {gen_t(left), gen_t(b - left)});
  };
  if (sort == Sort::T) return gen_t(budget);
  // forest: union of a few trees
  FiniteTerm f = FiniteTerm::node("mkf", {gen_t(budget / 2)});
  return FiniteTerm::node("U+", {std::move(f), FiniteTerm::node("mkf", {gen_t(budget / 2)})});
}

}  // namespace

TEST_CASE("single-node SJ trees and the two-subtree root") {
  SJForest one = val_sj(fp_term("ext_r(Omega_f)"));
  CHECK(one.base().size() == 1);
  CHECK(one.sort() == Sort::T);
  SJForest two = val_sj(fp_term("ext_r(mkf(ext_a(Omega_f)) U+ mkf(ext_b(Omega_f)))"));
  CHECK(two.base().size() == 3);
  const Poset& p = two.base();
  CHECK(p.degree(p.index_or_throw("r")) == 2);
  CHECK(p.lt(p.index_or_throw("a"), p.index_or_throw("r")));
  CHECK(p.lt(p.index_or_throw("b"), p.index_or_throw("r")));
  CHECK_FALSE(p.comparable(p.index_or_throw("a"), p.index_or_throw("b")));
}

TEST_CASE("terms without concatenation give rooted trees of unbounded degree") {
  SJForest three = val_sj(fp_term(
      "ext_r(mkf(ext_a(Omega_f)) U+ (mkf(ext_b(Omega_f)) U+ mkf(ext_c(Omega_f))))"));
  const Poset& p = three.base();
  CHECK(p.degree(p.index_or_throw("r")) == 3);
}

TEST_CASE("mkf is the identity on the underlying triple") {
  FiniteTerm t = fp_term("ext_r(mkf(ext_a(Omega_f)))");
  SJForest tree = val_sj(t);
  SJForest forest = val_sj(FiniteTerm::node("mkf", {t}));
  CHECK(forest.sort() == Sort::F);
  CHECK(tree.base().same_order(forest.base()));
  CHECK(tree.lines() == forest.lines());
}

TEST_CASE("val distributes over forest union into components") {
  FiniteTerm t1 = fp_term("mkf(ext_a(Omega_f))");
  FiniteTerm t2 = fp_term("mkf(ext_b(Omega_f) . ext_c(Omega_f))");
  SJForest u = val_sj(FiniteTerm::node("U+", {t1, t2}));
  CHECK(u.components().size() == 2);
  CHECK(sj_iso(u, sj_union(val_sj(t1), val_sj(t2))));
}

TEST_CASE("val_sj is a homomorphism on random terms") {
  std::mt19937 rng(17);
  int rounds = 0;
  while (rounds < 200) {
    int ctr = 0;
    FiniteTerm a = random_fp_term(rng, 5, Sort::T, &ctr);
    FiniteTerm b = random_fp_term(rng, 5, Sort::T, &ctr);
    SJForest va = val_sj(a), vb = val_sj(b);
    CHECK(sj_iso(val_sj(FiniteTerm::node(".", {a, b})), sj_concat(va, vb)));
    FiniteTerm fa = FiniteTerm::node("mkf", {a});
    FiniteTerm fb = FiniteTerm::node("mkf", {b});
    CHECK(sj_iso(val_sj(FiniteTerm::node("U+", {fa, fb})),
                 sj_union(sj_mkf(va), sj_mkf(vb))));
    FiniteTerm ex = FiniteTerm::node("ext", {fa});
    ex.label = "root";
    CHECK(sj_iso(val_sj(ex), sj_ext(sj_mkf(va), "root")));
    ++rounds;
  }
}

TEST_CASE("sj_structure covers join-forests") {
  std::mt19937 rng(5);
  for (int round = 0; round < 30; ++round) {
    Poset p = random_rooted_tree(rng, 3 + static_cast<int>(rng() % 8));
    std::vector<int> enumeration;
    for (int i = 0; i < p.size(); ++i) enumeration.push_back(i);
    std::shuffle(enumeration.begin(), enumeration.end(), rng);
    SJForest j = sj_structure(p, enumeration, Sort::T);
    CHECK(j.base().same_order(p));
  }
}

TEST_CASE("ordered join-tree from local orders: chain and cherry") {
  Poset chain = Poset::parse("a < b\nb < c\n");
  std::map<int, std::vector<std::vector<int>>> local;
  for (int x = 0; x < chain.size(); ++x) local[x] = chain.directions(x);
  OJTree oj = oj_global_from_local(chain, local);
  // the horizontal order of a chain is the chain itself
  for (int x = 0; x < chain.size(); ++x)
    for (int y = 0; y < chain.size(); ++y)
      if (chain.leq(x, y)) CHECK(oj.sqle(x, y));

  Poset cherry = Poset::parse("a < r\nb < r\n");
  int a = cherry.index_or_throw("a"), b = cherry.index_or_throw("b"),
      r = cherry.index_or_throw("r");
  std::map<int, std::vector<std::vector<int>>> lo;
  lo[a] = {};
  lo[b] = {};
  lo[r] = {{a}, {b}};  // a-direction before b-direction
  OJTree oj2 = oj_global_from_local(cherry, lo);
  CHECK(oj2.sqle(a, b));
  CHECK(oj2.sqle(b, r));
  CHECK(oj2.sqle(a, r));
}

TEST_CASE("local orders round trip through the global order") {
  std::mt19937 rng(23);
  for (int round = 0; round < 50; ++round) {
    Poset p = random_rooted_tree(rng, 2 + static_cast<int>(rng() % 7));
    std::map<int, std::vector<std::vector<int>>> local;
    for (int x = 0; x < p.size(); ++x) {
      auto dirs = p.directions(x);
      std::shuffle(dirs.begin(), dirs.end(), rng);
      local[x] = dirs;
    }
    OJTree oj = oj_global_from_local(p, local);
    auto back = oj_local_from_global(oj);
    for (int x = 0; x < p.size(); ++x) {
      auto norm = [](std::vector<std::vector<int>> v) {
        for (auto& d : v) std::sort(d.begin(), d.end());
        return v;
      };
      CHECK(norm(back[x]) == norm(local[x]));
    }
  }
}

TEST_CASE("condition (ii) violation is rejected with a witness") {
  // two disjoint edges x<y and x2<y2; order y before y2 but x2 before x
  Poset p = Poset::parse("x < y\nx2 < y2\n");
  int x = p.index_or_throw("x"), y = p.index_or_throw("y");
  int x2 = p.index_or_throw("x2"), y2 = p.index_or_throw("y2");
  CHECK_THROWS_WITH_AS(OJTree(p, {x2, x, y, y2}), doctest::Contains("condition (ii)"),
                       Error);
}

TEST_CASE("linear order: every direction set is at most one class") {
  Poset chain = Poset::parse("a < b\nb < c\n");
  OJTree oj(chain, {0, 1, 2});
  auto local = oj_local_from_global(oj);
  for (auto& [x, dirs] : local) CHECK(dirs.size() <= 1);
}

TEST_CASE("ext2 on empty hedges is a single node") {
  SOJTree j = val_soj(fs_term("ext_u(Omega_h, Omega_h)"));
  CHECK(j.base().size() == 1);
  CHECK(j.lines().size() == 1);
  CHECK(j.tag(j.axis()) == LineTag::Axis);
}

TEST_CASE("ext2 of two singleton hedges orders them around the root") {
  SOJTree j = val_soj(fs_term("ext_u(mkh(ext_a(Omega_h, Omega_h)), mkh(ext_b(Omega_h, Omega_h)))"));
  const Poset& p = j.base();
  int a = p.index_or_throw("a"), b = p.index_or_throw("b"), u = p.index_or_throw("u");
  CHECK(p.lt(a, u));
  CHECK(p.lt(b, u));
  CHECK(j.sqle(a, b));
  CHECK(j.sqle(a, u));
  CHECK(j.sqle(b, u));
  // a hangs on the minus side, b on the plus side
  CHECK(j.tag(j.line_of(a)) == LineTag::Minus);
  CHECK(j.tag(j.line_of(b)) == LineTag::Plus);
}

TEST_CASE("mkh forgets the minus/plus split") {
  SOJTree j1 = val_soj(fs_term("ext_u(mkh(ext_a(Omega_h, Omega_h)), Omega_h)"));
  SOJTree j2 = val_soj(fs_term("ext_u(Omega_h, mkh(ext_a(Omega_h, Omega_h)))"));
  CHECK(soj_canonical(j1) != soj_canonical(j2));
  CHECK(hedge_canonical(soj_mkh(j1)) == hedge_canonical(soj_mkh(j2)));
}

TEST_CASE("Example 4.10: the horizontal chain") {
  for (const std::string variant : {"axis", "left", "right"}) {
    SOJTree j = val_soj(example_410(variant));
    const Poset& p = j.base();
    auto idx = [&](const std::string& n) { return p.index_or_throw(n); };
    auto lt = [&](const std::string& a, const std::string& b) {
      return p.lt(idx(a), idx(b));
    };
    auto before = [&](const std::string& a, const std::string& b) {
      return j.sqle(idx(a), idx(b)) && !j.sqle(idx(b), idx(a));
    };
    // vertical facts: {z, z2, u} < v, {y, y2, w} < u, x <= {u, v}
    CHECK(lt("z", "v"));
    CHECK(lt("z2", "v"));
    CHECK(lt("u", "v"));
    CHECK(lt("y", "u"));
    CHECK(lt("y2", "u"));
    CHECK(lt("w", "u"));
    CHECK(lt("x", "u"));
    CHECK(lt("x", "v"));
    // z, y, y2, x, w, z2 pairwise incomparable
    const char* mid[] = {"z", "y", "y2", "x", "w", "z2"};
    for (const char* m1 : mid)
      for (const char* m2 : mid)
        if (std::string(m1) != m2) CHECK_FALSE(p.comparable(idx(m1), idx(m2)));
    // the horizontal chain z < y < y2 < x < w < u < z2 < v
    const char* chain[] = {"z", "y", "y2", "x", "w", "u", "z2", "v"};
    for (int i = 0; i + 1 < 8; ++i) CHECK(before(chain[i], chain[i + 1]));
    // placements of x'
    if (variant == "axis") {
      CHECK(lt("v", "xp"));
      CHECK(before("v", "xp"));
    } else if (variant == "left") {
      CHECK_FALSE(p.comparable(idx("v"), idx("xp")));
      CHECK(before("xp", "z"));
    } else {
      CHECK_FALSE(p.comparable(idx("v"), idx("xp")));
      CHECK(before("v", "xp"));
    }
  }
}

TEST_CASE("val_soj is a homomorphism on random terms") {
  std::mt19937 rng(31);
  int rounds = 0;
  while (rounds < 200) {
    int ctr = 0;
    FiniteTerm a = random_fs_term(rng, 5, &ctr);
    FiniteTerm b = random_fs_term(rng, 5, &ctr);
    SOJTree va = val_soj(a), vb = val_soj(b);
    CHECK(soj_iso(val_soj(FiniteTerm::node(".", {a, b})), soj_concat(va, vb)));
    FiniteTerm ha = FiniteTerm::node("mkh", {a});
    FiniteTerm hb = FiniteTerm::node("mkh", {b});
    CHECK(hedge_iso(val_soj_hedge(FiniteTerm::node("x", {ha, hb})),
                    hedge_concat(soj_mkh(va), soj_mkh(vb))));
    FiniteTerm ex = FiniteTerm::node("ext", {ha, hb});
    ex.label = "fresh";
    CHECK(soj_iso(val_soj(ex), soj_ext2(soj_mkh(va), soj_mkh(vb), "fresh")));
    ++rounds;
  }
}

TEST_CASE("soj_structure output is always valid") {
  std::mt19937 rng(41);
  for (int round = 0; round < 40; ++round) {
    Poset p = random_rooted_tree(rng, 2 + static_cast<int>(rng() % 7));
    std::map<int, std::vector<std::vector<int>>> local;
    for (int x = 0; x < p.size(); ++x) {
      auto dirs = p.directions(x);
      std::shuffle(dirs.begin(), dirs.end(), rng);
      local[x] = dirs;
    }
    OJTree oj = oj_global_from_local(p, local);
    std::vector<int> enumeration;
    for (int i = 0; i < p.size(); ++i) enumeration.push_back(i);
    std::shuffle(enumeration.begin(), enumeration.end(), rng);
    SOJTree j = soj_structure(oj, enumeration);  // constructor validates
    CHECK(j.base().same_order(p));
    // minus lines come before the central direction, plus lines after
    for (size_t li = 0; li < j.lines().size(); ++li) {
      int t = j.top_of_line(static_cast<int>(li));
      if (t < 0) continue;
      std::vector<int> central;
      for (int z : j.lines()[j.line_of(t)])
        if (p.lt(z, t)) central.push_back(z);
      if (central.empty()) {
        CHECK(j.tag(static_cast<int>(li)) == LineTag::Plus);
      }
    }
  }
}

TEST_CASE("SOJ text round trip") {
  SOJTree j = val_soj(example_410("left"));
  SOJTree k = SOJTree::parse(j.to_text());
  CHECK(soj_canonical(j) == soj_canonical(k));
}

TEST_CASE("lazy F-prime and F-second values agree with finite materializations") {
  {
    auto eqs = EquationSystem::parse("t = ext(mkf(t) U+ mkf(ext(Omega_f))) . t\n");
    TermAutomaton a = from_equations(eqs, Signature::sjt());
    LazyTermValue lazy(a);
    SJForest m = lazy.materialize_sj(5);
    CHECK(!m.empty());
    const Poset& p = m.base();
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y) {
        std::string u = p.name(x).substr(1), v = p.name(y).substr(1);
        CHECK(lazy.leq(u, v) == p.leq(x, y));
      }
  }
  {
    auto eqs = EquationSystem::parse("t = ext2(mkh(t), mkh(ext2(Omega_h, Omega_h))) . t\n");
    TermAutomaton a = from_equations(eqs, Signature::sojt());
    LazyTermValue lazy(a);
    SOJTree m = lazy.materialize_soj(5);
    CHECK(!m.empty());
    const Poset& p = m.base();
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y) {
        std::string u = p.name(x).substr(1), v = p.name(y).substr(1);
        CHECK(lazy.sqle(u, v) == m.sqle(x, y));
      }
  }
}

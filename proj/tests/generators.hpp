#ifndef GENTREES_TESTS_GENERATORS_HPP
#define GENTREES_TESTS_GENERATORS_HPP

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gentrees/order.hpp"
#include "gentrees/term.hpp"

namespace gentrees_tests {

// random finite term over F of sort t with at most max_ext ext nodes
inline gentrees::FiniteTerm random_f_term(std::mt19937& rng, int max_ext,
                                          int* counter = nullptr) {
  using gentrees::FiniteTerm;
  int local = 0;
  int* ctr = counter ? counter : &local;
  std::function<FiniteTerm(int)> go = [&](int budget) -> FiniteTerm {
    std::uniform_int_distribution<int> d(0, 9);
    int roll = d(rng);
    if (budget <= 0 || roll < 2) return FiniteTerm::leaf("Omega");
    if (roll < 6) {
      FiniteTerm t = FiniteTerm::node("ext", {go(budget - 1)});
      t.label = "n" + std::to_string((*ctr)++);
      return t;
    }
    int left = budget / 2;
    return FiniteTerm::node(".", {go(left), go(budget - left)});
  };
  return go(max_ext);
}

// random rooted tree on n nodes as a join-tree poset
inline gentrees::Poset random_rooted_tree(std::mt19937& rng, int n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> d(0, i - 1);
    pairs.emplace_back(names[static_cast<size_t>(i)], names[static_cast<size_t>(d(rng))]);
  }
  return gentrees::Poset::from_cover(names, pairs);
}

// random rooted tree with all degrees <= 2 (binary join-tree)
inline gentrees::Poset random_binary_tree(std::mt19937& rng, int n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<int> child_count;
  for (int i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i));
    child_count.push_back(0);
  }
  for (int i = 1; i < n; ++i) {
    std::vector<int> slots;
    for (int j = 0; j < i; ++j)
      if (child_count[static_cast<size_t>(j)] < 2) slots.push_back(j);
    std::uniform_int_distribution<size_t> d(0, slots.size() - 1);
    int parent = slots[d(rng)];
    ++child_count[static_cast<size_t>(parent)];
    pairs.emplace_back(names[static_cast<size_t>(i)], names[static_cast<size_t>(parent)]);
  }
  return gentrees::Poset::from_cover(names, pairs);
}

// random total linear order over n named elements, as the name sequence
inline std::vector<std::string> random_linear(std::mt19937& rng, int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::shuffle(names.begin(), names.end(), rng);
  return names;
}

}  // namespace gentrees_tests

#endif

#pragma once

// Shared fixtures and brute-force oracles for the test suite. The oracles
// work on explicit element sets and never call the library's subgroup,
// kernel or counting code.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ssg/ssg.hpp"

namespace ssg::test {

inline MemoryTowerSource& towers() {
  static MemoryTowerSource t;
  return t;
}

inline PcPresentation free_quotient(int p, int g, int c) { return towers().level(p, g, c); }

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(0x5eed5eedULL);
  return r;
}

inline GroupElement random_element(const PcPresentation& G, std::mt19937_64& r = rng()) {
  std::uniform_int_distribution<int> d(0, G.prime() - 1);
  std::vector<int> e(static_cast<std::size_t>(G.ngens()));
  for (auto& x : e) x = d(r);
  return GroupElement(std::move(e));
}

inline std::vector<GroupElement> all_elements(const PcPresentation& G) {
  std::vector<GroupElement> out;
  std::vector<int> e(static_cast<std::size_t>(G.ngens()), 0);
  while (true) {
    out.emplace_back(e);
    std::size_t k = 0;
    while (k < e.size() && ++e[k] == G.prime()) e[k++] = 0;
    if (k == e.size()) break;
  }
  return out;
}

using ElementSet = std::set<std::vector<int>>;

// Subgroup generated by gens (optionally its normal closure), by saturation.
inline ElementSet closure_by_enumeration(const PcPresentation& G, const std::vector<GroupElement>& gens,
                                         bool normal) {
  std::vector<GroupElement> pool = gens;
  if (normal) {
    std::vector<GroupElement> conj;
    for (const auto& x : gens)
      for (const auto& y : all_elements(G)) conj.push_back(G.conjugate(x, y));
    pool = conj;
  }
  ElementSet seen{G.identity().exponents()};
  std::vector<GroupElement> frontier{G.identity()};
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier)
      for (const auto& s : pool) {
        GroupElement y = G.multiply(x, s);
        if (seen.insert(y.exponents()).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen;
}

inline ElementSet element_set(const Subgroup& H) {
  ElementSet out;
  H.for_each_element([&](const GroupElement& x) { out.insert(x.exponents()); });
  return out;
}

inline int log_p(std::uint64_t n, int p) {
  int e = 0;
  while (n > 1) {
    n /= static_cast<std::uint64_t>(p);
    ++e;
  }
  return e;
}

inline PcPresentation elementary(int p, int n) { return initial_quotient(p, n); }

}  // namespace ssg::test

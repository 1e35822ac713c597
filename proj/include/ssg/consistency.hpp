#pragma once

#include <string>
#include <vector>

#include "ssg/pc_presentation.hpp"

namespace ssg {

// One overlap test word whose two collections disagree.
struct ConsistencyViolation {
  std::string test;
  GroupElement left;
  GroupElement right;
};

namespace detail {

struct OverlapTest {
  std::string label;
  GroupElement left;
  GroupElement right;
};

// Collects both bracketings of the standard overlap words:
//   (a_k a_j) a_i  vs  a_k (a_j a_i)          k > j > i
//   (a_j^p) a_i    vs  a_j^{p-1} (a_j a_i)    j > i
//   a_j (a_i^p)    vs  (a_j a_i) a_i^{p-1}    j > i
//   (a_i^p) a_i    vs  a_i (a_i^p)
// The presentation need not be consistent; the callback receives each pair.
template <typename Visit>
void for_each_overlap(const PcPresentation& G, Visit&& visit) {
  const int n = G.ngens();
  const int p = G.prime();
  auto gen = [&](int i) { return G.generator(i); };
  auto name = [](int i) { return "a" + std::to_string(i + 1); };
  for (int i = 0; i < n; ++i) {
    visit(OverlapTest{name(i) + "^" + std::to_string(p + 1),
                      G.multiply(G.power_rhs(i), gen(i)), G.multiply(gen(i), G.power_rhs(i))});
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      GroupElement ji = G.multiply(gen(j), gen(i));
      visit(OverlapTest{name(j) + "^" + std::to_string(p) + " " + name(i),
                        G.multiply(G.power_rhs(j), gen(i)), G.multiply(G.generator(j, p - 1), ji)});
      visit(OverlapTest{name(j) + " " + name(i) + "^" + std::to_string(p),
                        G.multiply(gen(j), G.power_rhs(i)), G.multiply(ji, G.generator(i, p - 1))});
    }
  }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j) {
      GroupElement kj = G.multiply(gen(k), gen(j));
      for (int i = 0; i < j; ++i) {
        visit(OverlapTest{name(k) + " " + name(j) + " " + name(i), G.multiply(kj, gen(i)),
                          G.multiply(gen(k), G.multiply(gen(j), gen(i)))});
      }
    }
}

}  // namespace detail

// Empty iff every overlap test word collects to the same normal form both ways.
inline std::vector<ConsistencyViolation> verify_consistency(const PcPresentation& G) {
  std::vector<ConsistencyViolation> out;
  detail::for_each_overlap(G, [&](detail::OverlapTest t) {
    if (t.left != t.right) out.push_back({std::move(t.label), std::move(t.left), std::move(t.right)});
  });
  return out;
}

}  // namespace ssg

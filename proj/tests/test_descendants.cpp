#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "helpers.hpp"

namespace ssg {
namespace {

using test::free_quotient;

std::size_t class_count(const std::vector<PcPresentation>& groups) {
  const std::vector<int> cls = isomorphism_classes(groups);
  return std::set<int>(cls.begin(), cls.end()).size();
}

PcPresentation top_quotient(const PcPresentation& Q) {
  const SeriesData s = lower_p_central_series(Q);
  return quotient_by(Q, s.subgroups[static_cast<std::size_t>(s.p_class - 1)]).first;
}

const std::vector<PcPresentation>& descendants_of_c3xc3() {
  static const std::vector<PcPresentation> d = immediate_descendants(test::elementary(3, 2), test::towers());
  return d;
}

TEST(Descendants, ElementaryAbelianOfRankTwo) {
  const auto& d = descendants_of_c3xc3();
  ASSERT_EQ(d.size(), 7u);
  std::multiset<int> orders;
  int c3c9 = 0, c9c9 = 0;
  for (const auto& Q : d) {
    orders.insert(Q.ngens());
    EXPECT_EQ(p_class(Q), 2);
    EXPECT_EQ(generator_rank(Q), 2);
    EXPECT_TRUE(is_standard(Q));
    EXPECT_TRUE(verify_consistency(Q).empty());
    if (abelian_invariants(Q) == std::vector<long long>{3, 9}) ++c3c9;
    if (abelian_invariants(Q) == std::vector<long long>{9, 9}) ++c9c9;
  }
  EXPECT_EQ(orders, (std::multiset<int>{3, 3, 3, 4, 4, 4, 5}));
  EXPECT_EQ(c3c9, 1);
  EXPECT_EQ(c9c9, 1);
  EXPECT_EQ(class_count(d), 7u);
}

TEST(Descendants, CyclicGroupsHaveOneDescendant) {
  for (int c = 1; c <= 4; ++c) {
    const auto d = immediate_descendants(free_quotient(3, 1, c), test::towers());
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].ngens(), c + 1);
    EXPECT_EQ(abelian_invariants(d[0]), (std::vector<long long>{static_cast<long long>(std::pow(3, c + 1))}));
  }
}

TEST(Descendants, EveryCandidateLiesOverTheParent) {
  for (const auto& P : descendants_of_c3xc3()) {
    if (P.ngens() > 4) continue;
    for (const auto& Q : descendant_candidates(P, test::towers(), 20)) {
      EXPECT_EQ(p_class(Q), 3);
      EXPECT_EQ(generator_rank(Q), 2);
      EXPECT_TRUE(are_isomorphic(top_quotient(Q), P));
    }
  }
}

TEST(Descendants, OrbitCountEqualsIsomorphismClassCount) {
  std::vector<PcPresentation> parents{test::elementary(3, 2), free_quotient(3, 1, 2)};
  for (const auto& P : descendants_of_c3xc3())
    if (P.ngens() <= 4) parents.push_back(P);
  for (const auto& P : parents) {
    const auto candidates = descendant_candidates(P, test::towers(), 20);
    const auto reps = immediate_descendants(P, test::towers(), 20);
    EXPECT_EQ(reps.size(), class_count(candidates)) << render(P);
    EXPECT_EQ(class_count(reps), reps.size()) << render(P);
    std::vector<PcPresentation> reversed(candidates.rbegin(), candidates.rend());
    EXPECT_EQ(class_count(reversed), reps.size());
    for (const auto& Q : reps) EXPECT_TRUE(are_isomorphic(top_quotient(Q), P));
  }
}

TEST(Descendants, TrivialGroupAndCaps) {
  EXPECT_TRUE(immediate_descendants(PcPresentation(), test::towers()).empty());
  EXPECT_THROW(immediate_descendants(free_quotient(3, 2, 3), test::towers(), 12), CapExceeded);
  EXPECT_THROW(descendant_candidates(free_quotient(3, 2, 3), test::towers(), 12), CapExceeded);
}

TEST(Descendants, FilteredTreeExpandsOnlyAncestors) {
  TreeConfig cfg;
  cfg.classification.g = 2;
  const DescendantNode root = filtered_tree(3, 2, 2, cfg, test::towers());
  ASSERT_TRUE(root.verdict.has_value());
  EXPECT_EQ(root.verdict->outcome, Outcome::Ancestor);
  ASSERT_EQ(root.children.size(), 7u);
  std::map<PrunedReason, int> reasons;
  std::function<void(const DescendantNode&)> walk = [&](const DescendantNode& n) {
    ++reasons[n.pruned_reason];
    if (n.pruned_reason != PrunedReason::None) {
      EXPECT_TRUE(n.children.empty());
    }
    for (const auto& k : n.children) {
      EXPECT_EQ(k.p_class, n.p_class + 1);
      walk(k);
    }
  };
  walk(root);
  EXPECT_EQ(reasons[PrunedReason::None], 1);
  EXPECT_EQ(reasons[PrunedReason::Depth], 3);
  EXPECT_EQ(reasons[PrunedReason::Pseudo], 2);
  EXPECT_EQ(reasons[PrunedReason::FailsSigma], 2);
  EXPECT_THROW(filtered_tree(3, 2, 0, cfg, test::towers()), InputError);
}

TEST(Descendants, TreeTruncatesAtTheCap) {
  TreeConfig cfg;
  cfg.classification.g = 2;
  cfg.descendant_cap = 9;
  const DescendantNode root = filtered_tree(3, 2, 3, cfg, test::towers());
  // F_3 of rank 2 has order 3^10, so no class-2 ancestor can be expanded
  for (const auto& k : root.children) {
    if (k.pruned_reason != PrunedReason::None) continue;
    EXPECT_TRUE(k.truncated);
    EXPECT_TRUE(k.children.empty());
    EXPECT_FALSE(k.truncation_note.empty());
  }
}

}  // namespace
}  // namespace ssg

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace ssg {
namespace {

// log_p |F_c| for the free rank-g group of exponent-p class c, from the
// dimensions of the free Lie algebra: the k-th layer of the lower
// exponent-p central series has dimension sum_{i <= k} L_g(i), with L_g(i)
// counted as aperiodic necklaces by brute force.
std::uint64_t order_exponent_oracle(int g, int c) {
  auto lyndon = [g](int n) {
    // count words of length n over g letters that are strictly smaller than
    // all their proper rotations
    std::uint64_t count = 0;
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    while (true) {
      bool least = true;
      for (int r = 1; r < n && least; ++r) {
        std::vector<int> rot(w.begin() + r, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + r);
        least = w < rot;
      }
      if (least) ++count;
      int k = n - 1;
      while (k >= 0 && ++w[static_cast<std::size_t>(k)] == g) w[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
    return count;
  };
  std::uint64_t total = 0, layer = 0;
  for (int k = 1; k <= c; ++k) {
    layer += lyndon(k);
    total += layer;
  }
  return total;
}

TEST(FreeQuotient, OrdersOfTableOne) {
  EXPECT_EQ(test::free_quotient(3, 2, 2).ngens(), 5);
  EXPECT_EQ(test::free_quotient(3, 2, 3).ngens(), 10);
  EXPECT_EQ(test::free_quotient(3, 2, 4).ngens(), 18);
  EXPECT_EQ(test::free_quotient(3, 2, 5).ngens(), 32);
  EXPECT_EQ(test::free_quotient(3, 3, 2).ngens(), 9);
  EXPECT_EQ(test::free_quotient(3, 3, 3).ngens(), 23);
}

TEST(FreeQuotient, OrdersMatchNecklaceCount) {
  for (int g = 1; g <= 3; ++g)
    for (int c = 1; c <= 4; ++c) {
      EXPECT_EQ(predicted_order_exponent(g, c), order_exponent_oracle(g, c)) << g << " " << c;
      if (order_exponent_oracle(g, c) <= 24) {
        EXPECT_EQ(static_cast<std::uint64_t>(test::free_quotient(3, g, c).ngens()), order_exponent_oracle(g, c));
      }
    }
  EXPECT_EQ(static_cast<std::uint64_t>(test::free_quotient(5, 2, 3).ngens()), order_exponent_oracle(2, 3));
  EXPECT_EQ(static_cast<std::uint64_t>(test::free_quotient(7, 2, 2).ngens()), order_exponent_oracle(2, 2));
}

TEST(FreeQuotient, WittNumbers) {
  const std::vector<std::uint64_t> two{2, 1, 2, 3, 6, 9, 18};
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(witt_number(2, n), two[static_cast<std::size_t>(n - 1)]);
  EXPECT_EQ(witt_number(3, 2), 3u);
  EXPECT_EQ(witt_number(3, 3), 8u);
}

TEST(FreeQuotient, LevelsAreStandardConsistentAndOfTheRightShape) {
  for (auto [p, g, c] : {std::tuple{3, 2, 4}, {3, 3, 3}, {5, 2, 3}, {3, 1, 4}}) {
    const PcPresentation F = test::free_quotient(p, g, c);
    EXPECT_TRUE(verify_consistency(F).empty());
    EXPECT_TRUE(is_standard(F));
    EXPECT_EQ(generator_rank(F), g);
    EXPECT_EQ(p_class(F), c);
    EXPECT_EQ(static_cast<int>(F.undefined_generators().size()), g);
  }
}

TEST(FreeQuotient, TowerTelescopes) {
  const FreeQuotientTower t = test::towers().tower(3, 2, 4);
  for (int c = 1; c < 4; ++c) {
    EXPECT_EQ(truncate_to_weight(t.level(c + 1), c), t.level(c));
    const Morphism proj = t.projection(c);
    EXPECT_TRUE(proj.valid());
    EXPECT_TRUE(proj.surjective());
    EXPECT_EQ(kernel_of(proj), lower_p_central_series(t.level(c + 1)).subgroups[static_cast<std::size_t>(c)]);
  }
  EXPECT_THROW(t.level(5), InputError);
}

TEST(FreeQuotient, SmallGroupsAreQuotients) {
  // any two elements of a group of exponent-p class <= c are images of the
  // generators of F_c under a homomorphism
  const PcPresentation F = test::free_quotient(3, 2, 3);
  for (int c = 1; c <= 3; ++c) {
    const PcPresentation G = test::free_quotient(3, 2, c);
    for (int trial = 0; trial < 50; ++trial) {
      const Morphism phi = morphism_from_images(F, G, {test::random_element(G), test::random_element(G)},
                                                ImageKind::UndefinedGenerators);
      EXPECT_TRUE(phi.valid());
    }
  }
}

TEST(PCover, CoverOfElementaryAbelianIsNextFreeQuotient) {
  const PCover pc = p_cover(test::elementary(3, 2));
  EXPECT_EQ(pc.cover.ngens(), 5);
  EXPECT_EQ(pc.multiplicator.order_exponent(), 3);
  EXPECT_EQ(pc.nucleus.order_exponent(), 3);
  EXPECT_EQ(pc.cover, test::free_quotient(3, 2, 2));
}

TEST(PCover, CoverOfFreeQuotientIsTheNextLevel) {
  for (int c = 1; c <= 3; ++c) {
    const PCover pc = p_cover(test::free_quotient(3, 2, c));
    EXPECT_EQ(pc.cover, test::free_quotient(3, 2, c + 1));
    EXPECT_EQ(pc.nucleus, pc.multiplicator);
  }
}

TEST(PCover, MultiplicatorIsCentralElementaryAndQuotientRecoversInput) {
  const std::vector<PcPresentation> inputs{test::free_quotient(3, 1, 2), test::free_quotient(3, 2, 2),
                                           quotient_by(test::free_quotient(3, 2, 2),
                                                       subgroup_close(test::free_quotient(3, 2, 2),
                                                                      {test::free_quotient(3, 2, 2).generator(2)},
                                                                      Closure::Normal))
                                               .first};
  for (const PcPresentation& G : inputs) {
    const PCover pc = p_cover(G);
    const PcPresentation& C = pc.cover;
    EXPECT_TRUE(verify_consistency(C).empty());
    EXPECT_EQ(generator_rank(C), generator_rank(G));
    for (const auto& m : pc.multiplicator.igs()) {
      EXPECT_TRUE(C.power(m, C.prime()).is_identity());
      for (int k = 0; k < C.ngens(); ++k) EXPECT_TRUE(C.commutator(m, C.generator(k)).is_identity());
    }
    EXPECT_TRUE(frattini(C).contains(pc.multiplicator));
    EXPECT_TRUE(pc.multiplicator.contains(pc.nucleus));
    EXPECT_EQ(quotient_by(C, pc.multiplicator).first.ngens(), G.ngens());
    EXPECT_GE(pc.tails_added, pc.multiplicator.order_exponent());
  }
}

TEST(PCover, CyclicCoverIsCyclic) {
  const PCover pc = p_cover(test::free_quotient(3, 1, 2));  // C9
  EXPECT_EQ(pc.cover.ngens(), 3);
  EXPECT_EQ(pc.multiplicator.order_exponent(), 1);
}

TEST(PCover, RejectsInconsistentInput) {
  PcRelations r = PcRelations::trivial(3, {1, 2, 3});
  r.powers[0] = GroupElement::unit(3, 1);
  r.commutators[1][0] = GroupElement::unit(3, 2);
  EXPECT_THROW(p_cover(PcPresentation(r)), InputError);
}

TEST(FreeQuotient, InvalidParametersAndCaps) {
  EXPECT_THROW(initial_quotient(2, 2), InputError);
  EXPECT_THROW(initial_quotient(9, 2), InputError);
  EXPECT_THROW(initial_quotient(3, 0), InputError);
  EXPECT_THROW(build_tower(3, 2, 0), InputError);
  EXPECT_THROW(build_tower(3, 3, 4, 40), CapExceeded);
  EXPECT_THROW(build_tower(3, 2, 4, 17), CapExceeded);
  EXPECT_NO_THROW(build_tower(3, 2, 4, 18));
  MemoryTowerSource small;
  small.set_ceiling(10);
  EXPECT_NO_THROW(small.tower(3, 2, 3));
  EXPECT_THROW(small.tower(3, 2, 4), CapExceeded);
}

}  // namespace
}  // namespace ssg

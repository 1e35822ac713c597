#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "helpers.hpp"

namespace ssg {
namespace {

using test::free_quotient;

PcPresentation load(const std::string& name) {
  std::ifstream in(std::string(SSG_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

TEST(Isomorphism, AbelianGroupsOfOrder27AreDistinguished) {
  const PcPresentation c27 = load("c27.txt");
  const PcPresentation c3c9 = load("c3xc9.txt");
  const PcPresentation e27 = test::elementary(3, 3);
  const PcPresentation h27 = load("heisenberg27.txt");
  EXPECT_FALSE(are_isomorphic(c27, c3c9));
  EXPECT_FALSE(are_isomorphic(c3c9, e27));
  EXPECT_FALSE(are_isomorphic(c3c9, h27));
  EXPECT_TRUE(are_isomorphic(c3c9, c3c9));
  EXPECT_EQ(isomorphism_classes({c27, c3c9, e27, h27, c3c9, c27}), (std::vector<int>{0, 1, 2, 3, 1, 0}));
}

TEST(Isomorphism, AbelianInvariants) {
  EXPECT_EQ(abelian_invariants(load("c3xc9.txt")), (std::vector<long long>{3, 9}));
  EXPECT_EQ(abelian_invariants(load("c9xc9.txt")), (std::vector<long long>{9, 9}));
  EXPECT_EQ(abelian_invariants(load("c27.txt")), (std::vector<long long>{27}));
  EXPECT_EQ(abelian_invariants(test::elementary(3, 3)), (std::vector<long long>{3, 3, 3}));
  EXPECT_EQ(abelian_invariants(PcPresentation()), (std::vector<long long>{}));
  EXPECT_FALSE(abelian_invariants(load("heisenberg27.txt")).has_value());
}

TEST(Isomorphism, WitnessIsABijectiveHomomorphism) {
  // the same group given on a different generating pair
  const PcPresentation F = free_quotient(3, 2, 2);
  const Subgroup N = subgroup_close(F, {F.generator(2), F.generator(4)}, Closure::Normal);
  const Subgroup M = subgroup_close(F, {F.generator(3), F.generator(4)}, Closure::Normal);
  const PcPresentation A = quotient_by(F, N).first, B = quotient_by(F, M).first;
  const auto iso = find_isomorphism(A, B);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(iso->valid());
  EXPECT_TRUE(iso->surjective());
  EXPECT_EQ(A.ngens(), B.ngens());
  EXPECT_TRUE(morphism_from_images(A, B, iso->images()).valid());
}

TEST(Isomorphism, FingerprintsAreInvariant) {
  const PcPresentation F = free_quotient(3, 2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Subgroup N = subgroup_close(F, {test::random_element(F)}, Closure::Normal);
    const PcPresentation Q = quotient_by(F, N).first;
    const Fingerprint a = fingerprint(Q);
    EXPECT_EQ(a.order_exponent, Q.ngens());
    EXPECT_EQ(a.p_class, p_class(Q));
  }
}

// Kernels inside Phi(F_2) give isomorphic quotients exactly when some
// automorphism of F_2 maps one to the other. Phi(F_2) is central and
// elementary abelian, so every subspace is a normal subgroup and
// automorphisms act on it linearly.
TEST(Isomorphism, AgreesWithAutomorphismOrbitsOfKernels) {
  const PcPresentation F = free_quotient(3, 2, 2);
  const Subgroup phi = frattini(F);
  ASSERT_EQ(phi.order_exponent(), 3);
  const std::vector<GroupElement> basis = phi.igs();
  auto coords = [&](const GroupElement& x) {
    gfp::Vector v;
    for (const auto& b : basis) v.push_back(x[b.depth()]);
    return v;
  };

  std::set<gfp::Matrix> actions;
  const auto elems = test::all_elements(F);
  for (const auto& u : elems)
    for (const auto& v : elems) {
      if (gfp::rank(3, {{u[0], u[1]}, {v[0], v[1]}}, 2) != 2) continue;
      const Morphism a = morphism_from_images(F, F, {u, v}, ImageKind::UndefinedGenerators);
      gfp::Matrix m;
      for (const auto& b : basis) m.push_back(coords(a.apply(b)));
      actions.insert(m);
    }

  std::vector<gfp::Matrix> subspaces;
  std::vector<Subgroup> kernels;
  for (int r = 0; r <= 3; ++r)
    gfp::for_each_subspace(3, 3, r, [&](const gfp::Matrix& U) {
      subspaces.push_back(U);
      std::vector<GroupElement> gens;
      for (const auto& row : U) {
        GroupElement x = F.identity();
        for (int s = 0; s < 3; ++s) x = F.multiply(x, F.power(basis[s], row[s]));
        gens.push_back(x);
      }
      kernels.push_back(subgroup_close(F, gens));
    });
  ASSERT_EQ(kernels.size(), 28u);

  auto canonical = [](const gfp::Matrix& rows) {
    gfp::EchelonBasis e(3, 3);
    for (const auto& r : rows) e.insert(r);
    return e.rows();
  };
  std::vector<int> orbit(kernels.size());
  std::iota(orbit.begin(), orbit.end(), 0);
  // label each subspace with the least index in its orbit
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < subspaces.size(); ++i)
      for (const auto& m : actions) {
        gfp::Matrix img;
        for (const auto& row : subspaces[i]) img.push_back(gfp::multiply(3, row, m));
        const auto target = canonical(img);
        for (std::size_t j = 0; j < subspaces.size(); ++j)
          if (canonical(subspaces[j]) == target && orbit[j] != orbit[i]) {
            orbit[i] = orbit[j] = std::min(orbit[i], orbit[j]);
            changed = true;
          }
      }
  }

  std::vector<PcPresentation> quotients;
  for (const auto& N : kernels) quotients.push_back(quotient_by(F, N).first);
  const std::vector<int> cls = isomorphism_classes(quotients);
  for (std::size_t i = 0; i < kernels.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      EXPECT_EQ(cls[i] == cls[j], orbit[i] == orbit[j]) << i << " " << j;
  EXPECT_EQ(std::set<int>(orbit.begin(), orbit.end()).size(), std::set<int>(cls.begin(), cls.end()).size());
}

TEST(Isomorphism, DifferentPrimesOrOrdersAreNotIsomorphic) {
  EXPECT_FALSE(are_isomorphic(test::elementary(3, 2), test::elementary(5, 2)));
  EXPECT_FALSE(are_isomorphic(test::elementary(3, 2), test::elementary(3, 3)));
  EXPECT_TRUE(are_isomorphic(free_quotient(5, 2, 2), free_quotient(5, 2, 2)));
}

}  // namespace
}  // namespace ssg

#pragma once

// Immediate descendants as quotients of F_{c+1}, one per orbit of the
// stabilizer of the kernel, and the descendant tree pruned by the ancestor
// classification.

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <vector>

#include "ssg/ancestor.hpp"
#include "ssg/error.hpp"
#include "ssg/free_quotient.hpp"
#include "ssg/gfp.hpp"
#include "ssg/isomorphism.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

inline constexpr int kDefaultDescendantCap = 12;

namespace detail {

// Every immediate descendant of P is F_{c+1}/M with M P_c(F_{c+1}) the
// preimage of a kernel of F_c -> P; all those preimages are conjugate under
// Aut(F_{c+1}), so one preimage K suffices. Then K* <= M < K, and M ranges
// over the proper supplements U of the image W of P_c(F_{c+1}) in the
// elementary abelian V = K/K*.
struct DescendantSetup {
  PcPresentation F;
  Subgroup K;
  Subgroup K_star;
  SectionCoordinates V;
  std::vector<gfp::Matrix> supplements;  // reduced echelon form
};

inline DescendantSetup descendant_setup(const PcPresentation& P, TowerSource& towers, int cap_exponent) {
  const Target t = prepare_target(P);
  const std::uint64_t e = predicted_order_exponent(t.g, t.c + 1);
  if (e > static_cast<std::uint64_t>(cap_exponent))
    throw CapExceeded("immediate_descendants: |F_" + std::to_string(t.c + 1) + "| = p^" + std::to_string(e) +
                      " exceeds the cap p^" + std::to_string(cap_exponent));
  const int p = P.prime();
  const FreeQuotientTower tower = towers.tower(p, t.g, t.c + 1);
  const PcPresentation& Fc = tower.level(t.c);
  const PcPresentation& F = tower.level(t.c + 1);
  const Subgroup N0 = standard_kernel(Fc, t.standard);

  std::vector<GroupElement> gens;
  for (const auto& x : N0.igs()) {
    std::vector<int> v = x.exponents();
    v.resize(static_cast<std::size_t>(F.ngens()), 0);
    gens.emplace_back(std::move(v));
  }
  std::vector<GroupElement> top;
  for (int k = Fc.ngens(); k < F.ngens(); ++k) top.push_back(F.generator(k));
  gens.insert(gens.end(), top.begin(), top.end());
  Subgroup K = subgroup_close(F, gens, Closure::Normal);
  Subgroup K_star = star_subgroup(F, K);
  SectionCoordinates V(K, K_star);
  const int dim = V.dim();
  gfp::EchelonBasis W(p, dim);
  for (const auto& z : top) W.insert(V.coordinates(z));

  std::vector<gfp::Matrix> supplements;
  for (int r = dim - W.rank(); r < dim; ++r)
    gfp::for_each_subspace(p, dim, r, [&](const gfp::Matrix& U) {
      gfp::EchelonBasis sum = W;
      for (const auto& row : U) sum.insert(row);
      if (sum.rank() == dim) supplements.push_back(U);
    });
  return DescendantSetup{F, std::move(K), std::move(K_star), std::move(V), std::move(supplements)};
}

inline PcPresentation descendant_from(const DescendantSetup& s, const gfp::Matrix& U) {
  const PcPresentation& F = s.F;
  const std::vector<GroupElement> basis = s.V.basis();
  std::vector<GroupElement> mg = s.K_star.igs();
  for (const auto& row : U) {
    GroupElement x = F.identity();
    for (std::size_t b = 0; b < basis.size(); ++b)
      if (row[b] != 0) x = F.multiply(x, F.power(basis[b], row[b]));
    mg.push_back(std::move(x));
  }
  return quotient_by(F, subgroup_close(F, mg)).first;
}

inline gfp::Matrix echelon_rows(int p, int dim, const gfp::Matrix& rows) {
  gfp::EchelonBasis e(p, dim);
  for (const auto& r : rows) e.insert(r);
  return e.rows();
}

// Matrices (acting on row vectors of K/K*) of generators of the stabilizer
// of K in Aut(F), by Schreier's lemma over the orbit of K. Orbit point j
// carries the transversal t_j and the basis t_j(B) of its own section.
inline std::vector<gfp::Matrix> stabilizer_action(const DescendantSetup& s) {
  const PcPresentation& F = s.F;
  const int p = F.prime();
  const int dim = s.V.dim();
  const std::vector<GroupElement> B = s.V.basis();

  std::vector<std::vector<GroupElement>> autos;
  for (const auto& a : free_automorphism_generators(F)) autos.push_back(derive_images(F, F, a));

  struct Point {
    Subgroup K;
    std::vector<GroupElement> transversal;  // images of the pc-generators
    SectionCoordinates sec;
    gfp::Matrix to_basis;  // section coordinates -> coordinates in t_j(B)
  };
  std::vector<Point> orbit;
  std::unordered_map<Subgroup, std::size_t, SubgroupHash> index;
  auto add = [&](Subgroup K, std::vector<GroupElement> t) {
    SectionCoordinates sec(K, star_subgroup(F, K));
    gfp::Matrix T;
    for (const auto& b : B) T.push_back(sec.coordinates(evaluate(F, t, b)));
    auto inv = gfp::invert(p, T);
    if (!inv) throw PreconditionError("stabilizer_action: transversal is not invertible on K/K*");
    index.emplace(K, orbit.size());
    orbit.push_back(Point{std::move(K), std::move(t), std::move(sec), std::move(*inv)});
  };
  std::vector<GroupElement> identity;
  for (int k = 0; k < F.ngens(); ++k) identity.push_back(F.generator(k));
  add(s.K, identity);

  std::set<gfp::Matrix> out;
  gfp::Matrix unit(static_cast<std::size_t>(dim), gfp::Vector(static_cast<std::size_t>(dim), 0));
  for (int i = 0; i < dim; ++i) unit[i][i] = 1;
  for (std::size_t q = 0; q < orbit.size(); ++q) {
    for (const auto& a : autos) {
      std::vector<GroupElement> t;
      for (const auto& y : orbit[q].transversal) t.push_back(evaluate(F, a, y));
      std::vector<GroupElement> gens;
      for (const auto& x : orbit[q].K.igs()) gens.push_back(evaluate(F, a, x));
      Subgroup image = subgroup_close(F, gens);
      auto it = index.find(image);
      if (it == index.end()) {
        add(std::move(image), std::move(t));
        continue;
      }
      const Point& target = orbit[it->second];
      gfp::Matrix m;
      for (const auto& b : B)
        m.push_back(gfp::multiply(p, target.sec.coordinates(evaluate(F, t, b)), target.to_basis));
      if (m != unit) out.insert(std::move(m));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace detail

// All quotients F_{c+1}/M over the supplements, with repetitions up to
// isomorphism.
inline std::vector<PcPresentation> descendant_candidates(const PcPresentation& P, TowerSource& towers,
                                                         int cap_exponent = kDefaultDescendantCap) {
  if (detail::prepare_target(P).c == 0) return {};
  const detail::DescendantSetup s = detail::descendant_setup(P, towers, cap_exponent);
  std::vector<PcPresentation> out;
  for (const auto& U : s.supplements) out.push_back(detail::descendant_from(s, U));
  return out;
}

// Groups Q of p-class c+1 with Q/P_c(Q) isomorphic to P (P of p-class c),
// one per isomorphism class, each in standard form. Two supplements give
// isomorphic quotients exactly when the stabilizer of K maps one to the
// other, so one quotient is taken per orbit.
inline std::vector<PcPresentation> immediate_descendants(const PcPresentation& P, TowerSource& towers,
                                                         int cap_exponent = kDefaultDescendantCap) {
  if (detail::prepare_target(P).c == 0) return {};
  const detail::DescendantSetup s = detail::descendant_setup(P, towers, cap_exponent);
  const int p = P.prime();
  const int dim = s.V.dim();
  const std::vector<gfp::Matrix> action = detail::stabilizer_action(s);
  std::map<gfp::Matrix, std::size_t> index;
  for (std::size_t i = 0; i < s.supplements.size(); ++i)
    index.emplace(detail::echelon_rows(p, dim, s.supplements[i]), i);
  std::vector<char> seen(s.supplements.size(), 0);
  std::vector<PcPresentation> out;
  for (std::size_t i = 0; i < s.supplements.size(); ++i) {
    if (seen[i]) continue;
    seen[i] = 1;
    std::vector<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t u = frontier.back();
      frontier.pop_back();
      for (const auto& m : action) {
        gfp::Matrix img;
        for (const auto& row : s.supplements[u]) img.push_back(gfp::multiply(p, row, m));
        const auto it = index.find(detail::echelon_rows(p, dim, img));
        if (it == index.end()) throw PreconditionError("immediate_descendants: stabilizer moved a supplement off the list");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          frontier.push_back(it->second);
        }
      }
    }
    out.push_back(detail::descendant_from(s, s.supplements[i]));
  }
  return out;
}

inline std::vector<PcPresentation> immediate_descendants(const PcPresentation& P) {
  MemoryTowerSource towers;
  return immediate_descendants(P, towers);
}

enum class PrunedReason { None, FailsSigma, FailsH, Pseudo, Depth };

inline const char* pruned_reason_name(PrunedReason r) {
  switch (r) {
    case PrunedReason::None: return "none";
    case PrunedReason::FailsSigma: return "fails_sigma";
    case PrunedReason::FailsH: return "fails_h";
    case PrunedReason::Pseudo: return "pseudo";
    case PrunedReason::Depth: return "depth";
  }
  return "";
}

struct DescendantNode {
  PcPresentation group;
  int p_class = 0;
  std::optional<ClassificationVerdict> verdict;  // empty when classification hit a cap
  std::vector<DescendantNode> children;
  PrunedReason pruned_reason = PrunedReason::None;
  bool truncated = false;  // a cap stopped classification or expansion here
  std::string truncation_note;
};

struct TreeConfig {
  ClassificationConfig classification;
  int descendant_cap = kDefaultDescendantCap;
};

namespace detail {

inline DescendantNode grow(const PcPresentation& G, int depth, const TreeConfig& cfg, TowerSource& towers) {
  DescendantNode node;
  node.group = G;
  node.p_class = p_class(G);
  try {
    node.verdict = classify(G, cfg.classification, towers);
  } catch (const CapExceeded& e) {
    node.truncated = true;
    node.truncation_note = e.what();
    return node;
  }
  switch (node.verdict->outcome) {
    case Outcome::FailsSigma: node.pruned_reason = PrunedReason::FailsSigma; return node;
    case Outcome::FailsHBound: node.pruned_reason = PrunedReason::FailsH; return node;
    case Outcome::PseudoAncestor: node.pruned_reason = PrunedReason::Pseudo; return node;
    case Outcome::Ancestor: break;
  }
  if (node.p_class >= depth) {
    node.pruned_reason = PrunedReason::Depth;
    return node;
  }
  std::vector<PcPresentation> kids;
  try {
    kids = immediate_descendants(G, towers, cfg.descendant_cap);
  } catch (const CapExceeded& e) {
    node.truncated = true;
    node.truncation_note = e.what();
    return node;
  }
  for (const auto& Q : kids) node.children.push_back(grow(Q, depth, cfg, towers));
  return node;
}

}  // namespace detail

// Tree rooted at the elementary abelian group of rank g, expanding only
// ancestor groups, down to p-class depth.
inline DescendantNode filtered_tree(int p, int g, int depth, const TreeConfig& cfg, TowerSource& towers) {
  if (depth < 1) throw InputError("filtered_tree: depth must be at least 1");
  return detail::grow(initial_quotient(p, g), depth, cfg, towers);
}

}  // namespace ssg

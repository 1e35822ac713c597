#pragma once

// Quotients by normal subgroups, and re-presentation of a pc-group on a
// generating sequence that follows its lower p-central series.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/gfp.hpp"
#include "ssg/morphism.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/series.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

// A presentation whose weights are the lower p-central layers and whose
// weight >= 2 generators are all defined, plus the isomorphism to it.
struct StandardForm {
  PcPresentation presentation;
  std::vector<GroupElement> images;      // old pc-generator -> new normal form
  std::vector<GroupElement> generators;  // new pc-generator -> old normal form
};

namespace detail {

// Presentation of G/N on the images of the pc-generators outside the depth
// set of N. No definitions are carried over.
inline std::pair<PcPresentation, std::vector<GroupElement>> naive_quotient(const PcPresentation& G,
                                                                           const Subgroup& N) {
  const int n = G.ngens();
  std::vector<int> new_index(static_cast<std::size_t>(n), -1);
  std::vector<char> killed(static_cast<std::size_t>(n), 0);
  for (int d : N.depths()) killed[d] = 1;
  std::vector<int> weights;
  for (int k = 0; k < n; ++k)
    if (!killed[k]) {
      new_index[k] = static_cast<int>(weights.size());
      weights.push_back(G.weight(k));
    }
  const int m = static_cast<int>(weights.size());
  auto project = [&](const GroupElement& x) {
    GroupElement r = N.sift(x);
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    for (int k = 0; k < n; ++k)
      if (!killed[k]) e[new_index[k]] = r[k];
    return GroupElement(std::move(e));
  };
  PcRelations rel = PcRelations::trivial(G.prime(), weights);
  for (int k = 0; k < n; ++k) {
    if (killed[k]) continue;
    rel.powers[new_index[k]] = project(G.power_rhs(k));
    for (int i = 0; i < k; ++i)
      if (!killed[i]) rel.commutators[new_index[k]][new_index[i]] = project(G.commutator_rhs(k, i));
  }
  std::vector<GroupElement> images;
  for (int k = 0; k < n; ++k) images.push_back(project(G.generator(k)));
  return {PcPresentation(std::move(rel)), std::move(images)};
}

}  // namespace detail

inline StandardForm standardize(const PcPresentation& Q) {
  const int p = Q.prime();
  const SeriesData series = lower_p_central_series(Q);
  const int c = series.p_class;

  std::vector<SectionCoordinates> layers;
  for (int k = 1; k <= c; ++k) layers.emplace_back(series.subgroups[k - 1], series.subgroups[k]);

  std::vector<GroupElement> gens;
  std::vector<int> weights;
  std::vector<std::optional<Definition>> defs;
  std::vector<std::vector<int>> layer_members(static_cast<std::size_t>(c));
  std::vector<gfp::Matrix> layer_coords(static_cast<std::size_t>(c));

  for (int k = 1; k <= c; ++k) {
    const SectionCoordinates& sec = layers[k - 1];
    gfp::EchelonBasis basis(p, sec.dim());
    auto offer = [&](GroupElement x, std::optional<Definition> def) {
      if (basis.rank() == sec.dim()) return;
      gfp::Vector v = sec.coordinates(x);
      if (!basis.insert(v)) return;
      layer_members[k - 1].push_back(static_cast<int>(gens.size()));
      layer_coords[k - 1].push_back(std::move(v));
      gens.push_back(std::move(x));
      weights.push_back(k);
      defs.push_back(def);
    };
    if (k == 1) {
      for (auto& b : sec.basis()) offer(b, std::nullopt);
    } else {
      for (int j : layer_members[k - 2]) {
        offer(Q.power(gens[j], p), Definition::power(j));
        for (int i : layer_members[0])
          if (i < j) offer(Q.commutator(gens[j], gens[i]), Definition::commutator(j, i));
      }
    }
    if (basis.rank() != sec.dim())
      throw PreconditionError("standardize: layer " + std::to_string(k) + " not spanned by definitions");
  }

  std::vector<gfp::Matrix> layer_inverse;
  for (const auto& m : layer_coords) layer_inverse.push_back(*gfp::invert(p, m));

  const int n = static_cast<int>(gens.size());
  auto to_new = [&](GroupElement y) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int k = 1; k <= c; ++k) {
      gfp::Vector v = layers[k - 1].coordinates(y);
      gfp::Vector coeff = gfp::multiply(p, v, layer_inverse[k - 1]);
      GroupElement prefix = Q.identity();
      const auto& members = layer_members[k - 1];
      for (std::size_t t = 0; t < members.size(); ++t) {
        e[members[t]] = coeff[t];
        if (coeff[t] != 0) prefix = Q.multiply(prefix, Q.power(gens[members[t]], coeff[t]));
      }
      y = Q.multiply(Q.inverse(prefix), y);
    }
    if (!y.is_identity()) throw PreconditionError("standardize: decomposition failed");
    return GroupElement(std::move(e));
  };

  PcRelations rel = PcRelations::trivial(p, weights);
  rel.definitions = defs;
  for (int j = 0; j < n; ++j) {
    rel.powers[j] = to_new(Q.power(gens[j], p));
    for (int i = 0; i < j; ++i) rel.commutators[j][i] = to_new(Q.commutator(gens[j], gens[i]));
  }
  StandardForm out{PcPresentation(std::move(rel)), {}, gens};
  for (int k = 0; k < Q.ngens(); ++k) out.images.push_back(to_new(Q.generator(k)));
  return out;
}

// G/P_k(G) for a presentation in standard form: the generators of weight
// <= k with truncated relations. Truncating a normal word is the projection.
inline PcPresentation truncate_to_weight(const PcPresentation& G, int k) {
  int m = 0;
  while (m < G.ngens() && G.weight(m) <= k) ++m;
  auto cut = [&](const GroupElement& x) {
    return GroupElement(std::vector<int>(x.exponents().begin(), x.exponents().begin() + m));
  };
  PcRelations rel = PcRelations::trivial(G.prime(), std::vector<int>(G.weights().begin(), G.weights().begin() + m));
  for (int j = 0; j < m; ++j) {
    rel.powers[j] = cut(G.power_rhs(j));
    for (int i = 0; i < j; ++i) rel.commutators[j][i] = cut(G.commutator_rhs(j, i));
    rel.definitions[j] = G.definition(j);
  }
  return PcPresentation(std::move(rel));
}

inline GroupElement truncate_element(const GroupElement& x, int m) {
  return GroupElement(std::vector<int>(x.exponents().begin(), x.exponents().begin() + m));
}

// Standard form of G, skipping the work when G already is standard.
inline StandardForm standard_form(const PcPresentation& G) {
  if (is_standard(G)) {
    std::vector<GroupElement> gens;
    for (int k = 0; k < G.ngens(); ++k) gens.push_back(G.generator(k));
    return StandardForm{G, gens, gens};
  }
  return standardize(G);
}

// G/N with its projection. The quotient is returned in standard form.
inline std::pair<PcPresentation, Morphism> quotient_by(const PcPresentation& G, const Subgroup& N) {
  if (!(N.parent() == G)) throw PreconditionError("quotient_by: subgroup of a different group");
  if (!N.is_normal()) throw PreconditionError("quotient_by: subgroup is not normal");
  auto [naive, naive_images] = detail::naive_quotient(G, N);
  StandardForm sf = standardize(naive);
  std::vector<GroupElement> images;
  for (const auto& x : naive_images) images.push_back(evaluate(sf.presentation, sf.images, x));
  Morphism proj(G, sf.presentation, std::move(images), true, true);
  return {sf.presentation, std::move(proj)};
}

}  // namespace ssg

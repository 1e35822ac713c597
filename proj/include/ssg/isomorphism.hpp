#pragma once

// Isomorphism testing: cheap invariants first, then a layered search for
// images of the minimal generators.

#include <map>
#include <optional>
#include <vector>

#include "ssg/layered_search.hpp"
#include "ssg/morphism.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"
#include "ssg/series.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

inline constexpr int kOrderHistogramCap = 10;

struct Fingerprint {
  int prime = 0;
  int order_exponent = 0;
  int p_class = 0;
  std::vector<int> layers;            // order exponents of P_k(G)
  std::vector<int> abelian;           // order exponents of G' G^{p^k}, k = 0, 1, ...
  std::map<int, long long> orders;    // element order exponent -> count (small groups)

  bool operator==(const Fingerprint&) const = default;
};

inline Fingerprint fingerprint(const PcPresentation& G) {
  Fingerprint f;
  f.prime = G.prime();
  f.order_exponent = G.ngens();
  const SeriesData s = lower_p_central_series(G);
  f.p_class = s.p_class;
  f.layers = s.order_exponents();
  const Subgroup derived = derived_subgroup(G);
  std::vector<GroupElement> powers;
  for (int k = 0; k < G.ngens(); ++k) powers.push_back(G.generator(k));
  while (true) {
    std::vector<GroupElement> gens = derived.igs();
    gens.insert(gens.end(), powers.begin(), powers.end());
    const int e = subgroup_close(G, gens, Closure::Normal).order_exponent();
    f.abelian.push_back(e);
    if (e == derived.order_exponent()) break;
    for (auto& x : powers) x = G.power(x, G.prime());
  }
  if (G.ngens() <= kOrderHistogramCap) {
    whole_group(G).for_each_element([&](const GroupElement& x) {
      int e = 0;
      for (GroupElement y = x; !y.is_identity(); y = G.power(y, G.prime())) ++e;
      ++f.orders[e];
    });
  }
  return f;
}

// Orders of the cyclic factors of an abelian group in increasing order;
// nullopt for nonabelian groups.
inline std::optional<std::vector<long long>> abelian_invariants(const PcPresentation& G) {
  if (!derived_subgroup(G).is_trivial()) return std::nullopt;
  std::vector<int> a = fingerprint(G).abelian;  // a[k] = log_p |G^{p^k}|
  a.push_back(0);
  std::vector<long long> out;
  long long order = G.prime();
  for (std::size_t m = 1; m + 1 < a.size(); ++m, order *= G.prime()) {
    // factors of order > p^{m-1} minus factors of order > p^m
    const int exact = (a[m - 1] - a[m]) - (a[m] - a[m + 1]);
    for (int t = 0; t < exact; ++t) out.push_back(order);
  }
  return out;
}

namespace detail {

inline std::optional<Morphism> search_isomorphism(const PcPresentation& P, const PcPresentation& Q) {
  const StandardForm sp = standard_form(P);
  const StandardForm sq = standard_form(Q);
  const PcPresentation& A = sp.presentation;
  const PcPresentation& B = sq.presentation;
  detail::LayeredImageSearch search(A, B);
  const int g = search.rank();
  if (g != static_cast<int>(B.undefined_generators().size())) return std::nullopt;
  std::vector<std::vector<gfp::Vector>> first = detail::invertible_matrices(A.prime(), g);
  std::optional<Morphism> found;
  search.run(
      first, [](const auto&, const auto&) { return true; },
      [&](const std::vector<GroupElement>& tuple) {
        std::vector<GroupElement> on_std = derive_images(A, B, tuple);
        std::vector<GroupElement> images;
        for (int k = 0; k < P.ngens(); ++k)
          images.push_back(evaluate(Q, sq.generators, evaluate(B, on_std, sp.images[k])));
        found.emplace(P, Q, std::move(images), true, true);
        return false;
      },
      true);
  return found;
}

}  // namespace detail

// An isomorphism P -> Q, if one exists.
inline std::optional<Morphism> find_isomorphism(const PcPresentation& P, const PcPresentation& Q) {
  if (P.prime() != Q.prime() || P.ngens() != Q.ngens()) return std::nullopt;
  if (!(fingerprint(P) == fingerprint(Q))) return std::nullopt;
  return detail::search_isomorphism(P, Q);
}

inline bool are_isomorphic(const PcPresentation& P, const PcPresentation& Q) {
  return find_isomorphism(P, Q).has_value();
}

// Groups partitioned into isomorphism classes; returns for each input the
// index of its class, classes numbered by first occurrence.
inline std::vector<int> isomorphism_classes(const std::vector<PcPresentation>& groups) {
  std::vector<int> cls(groups.size(), -1);
  std::vector<Fingerprint> prints;
  for (const auto& G : groups) prints.push_back(fingerprint(G));
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (!(prints[reps[r]] == prints[i])) continue;
      if (detail::search_isomorphism(groups[reps[r]], groups[i])) {
        cls[i] = static_cast<int>(r);
        break;
      }
    }
    if (cls[i] < 0) {
      cls[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }
  return cls;
}

}  // namespace ssg

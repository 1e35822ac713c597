#pragma once

// The generator-inverting involution sigma, inverted sets
// X = { r : sigma(r) = r^-1 }, and the search for such involutions on
// arbitrary p-groups.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/layered_search.hpp"
#include "ssg/morphism.hpp"
#include "ssg/parallel.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"
#include "ssg/series.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

enum class SigmaProvenance { Canonical, Discovered };

struct SigmaAction {
  PcPresentation carrier;
  Morphism map;
  SigmaProvenance provenance;

  GroupElement operator()(const GroupElement& x) const { return map.apply(x); }
};

inline bool is_involution(const Morphism& m) {
  const PcPresentation& G = m.domain();
  for (int k = 0; k < G.ngens(); ++k)
    if (m.apply(m.images()[k]) != G.generator(k)) return false;
  return true;
}

// a * m(a) lies in [G, G] for every pc-generator a.
inline bool inverts_abelianization(const Morphism& m) {
  const PcPresentation& G = m.domain();
  const Subgroup derived = derived_subgroup(G);
  for (int k = 0; k < G.ngens(); ++k)
    if (!derived.contains(G.multiply(G.generator(k), m.images()[k]))) return false;
  return true;
}

// x_i -> x_i^-1 on the minimal generators, extended through the definitions.
inline SigmaAction canonical_sigma(const PcPresentation& F) {
  if (!F.has_complete_definitions()) throw PreconditionError("canonical_sigma: carrier lacks definitions");
  std::vector<GroupElement> images;
  for (int i : F.undefined_generators()) images.push_back(F.inverse(F.generator(i)));
  Morphism m = morphism_from_images(F, F, std::move(images), ImageKind::UndefinedGenerators);
  if (!m.valid()) throw PreconditionError("canonical_sigma: carrier is not relatively free");
  return SigmaAction{F, std::move(m), SigmaProvenance::Canonical};
}

inline constexpr int kDefaultInvertedSetCap = 16;

class InvertedSet {
 public:
  InvertedSet(SigmaAction sigma, bool restrict_to_frattini)
      : sigma_(std::move(sigma)), restrict_(restrict_to_frattini) {
    const PcPresentation& G = sigma_.carrier;
    const Subgroup phi = frattini(G);
    if (!restrict_) {
      for (int k = 0; k < G.ngens(); ++k) coords_.push_back(k);
    } else {
      bool coordinate = true;
      for (const auto& x : phi.igs())
        if (x != G.generator(x.depth())) coordinate = false;
      if (coordinate) {
        coords_ = phi.depths();
      } else {
        for (int k = 0; k < G.ngens(); ++k) coords_.push_back(k);
        filter_ = phi;
      }
    }
  }

  const PcPresentation& carrier() const { return sigma_.carrier; }
  const SigmaAction& sigma() const { return sigma_; }
  bool restricted_to_frattini() const { return restrict_; }
  // log_p of the number of candidates scanned by enumeration.
  int domain_exponent() const { return static_cast<int>(coords_.size()); }

  bool contains(const GroupElement& r) const {
    if (restrict_ && filter_ && !filter_->contains(r)) return false;
    if (restrict_ && !filter_)
      for (int k = 0, t = 0; k < r.size(); ++k) {
        if (t < static_cast<int>(coords_.size()) && coords_[t] == k) {
          ++t;
          continue;
        }
        if (r[k] != 0) return false;
      }
    return member(r);
  }

  // Members in lexicographic order of exponent vectors.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    scan(0, total(), [&](const GroupElement& r) {
      visit(r);
      return true;
    });
  }

  std::vector<GroupElement> members(int cap_exponent = kDefaultInvertedSetCap) const {
    guard(cap_exponent);
    std::vector<GroupElement> out;
    for_each([&](const GroupElement& r) { out.push_back(r); });
    return out;
  }

  // Exhaustive count over the candidate domain, split into jobs contiguous
  // ranges.
  std::uint64_t count(int cap_exponent = kDefaultInvertedSetCap, int jobs = 1) const {
    guard(cap_exponent);
    return parallel_sum(total(), jobs, [&](std::uint64_t begin, std::uint64_t end) {
      std::uint64_t c = 0;
      scan(begin, end, [&](const GroupElement&) {
        ++c;
        return true;
      });
      return c;
    });
  }

  // Same count, fixing the coordinates one lower p-central layer at a time
  // and discarding prefixes that already fail modulo the next layer. Needs a
  // carrier in standard form.
  std::uint64_t layered_count() const {
    const PcPresentation& G = sigma_.carrier;
    if (!is_standard(G)) throw PreconditionError("layered_count: carrier not in standard form");
    int c = 0;
    for (int w : G.weights()) c = std::max(c, w);
    std::vector<PcPresentation> level;
    std::vector<std::vector<GroupElement>> images;
    for (int k = 1; k <= c; ++k) {
      level.push_back(truncate_to_weight(G, k));
      std::vector<GroupElement> im;
      for (int j = 0; j < level.back().ngens(); ++j)
        im.push_back(truncate_element(sigma_.map.images()[j], level.back().ngens()));
      images.push_back(std::move(im));
    }
    if (c == 0) return 1;
    const int p = G.prime();
    std::uint64_t found = 0;
    GroupElement r = G.identity();
    std::function<void(int)> rec = [&](int k) {
      if (k > c) {
        ++found;
        return;
      }
      const PcPresentation& L = level[k - 1];
      int lo = 0;
      while (lo < L.ngens() && L.weight(lo) < k) ++lo;
      const int hi = L.ngens();
      const bool free_layer = !(restrict_ && k == 1);
      std::vector<int> digits(static_cast<std::size_t>(hi - lo), 0);
      while (true) {
        for (int t = lo; t < hi; ++t) r.mutable_exponents()[t] = digits[t - lo];
        GroupElement rk = truncate_element(r, hi);
        if (L.multiply(rk, evaluate(L, images[k - 1], rk)).is_identity()) rec(k + 1);
        if (!free_layer) break;
        int t = hi - lo - 1;
        while (t >= 0 && ++digits[t] == p) digits[t--] = 0;
        if (t < 0) break;
      }
      for (int t = lo; t < hi; ++t) r.mutable_exponents()[t] = 0;
    };
    rec(1);
    return found;
  }

 private:
  bool member(const GroupElement& r) const {
    const PcPresentation& G = sigma_.carrier;
    return G.multiply(r, sigma_(r)).is_identity();
  }

  std::uint64_t total() const {
    std::uint64_t t = 1;
    for (std::size_t i = 0; i < coords_.size(); ++i) t *= static_cast<std::uint64_t>(sigma_.carrier.prime());
    return t;
  }

  void guard(int cap_exponent) const {
    if (domain_exponent() > cap_exponent)
      throw CapExceeded("inverted set: " + std::to_string(domain_exponent()) +
                        " coordinates exceed the enumeration cap " + std::to_string(cap_exponent));
  }

  // Candidates with lexicographic rank in [begin, end).
  template <typename Visit>
  void scan(std::uint64_t begin, std::uint64_t end, Visit&& visit) const {
    const PcPresentation& G = sigma_.carrier;
    const int p = G.prime();
    const int m = static_cast<int>(coords_.size());
    std::vector<int> e(static_cast<std::size_t>(G.ngens()), 0);
    std::uint64_t idx = begin;
    for (int t = m - 1; t >= 0; --t) {
      e[coords_[t]] = static_cast<int>(idx % static_cast<std::uint64_t>(p));
      idx /= static_cast<std::uint64_t>(p);
    }
    for (std::uint64_t i = begin; i < end; ++i) {
      GroupElement r(e);
      if ((!filter_ || filter_->contains(r)) && member(r))
        if (!visit(r)) return;
      int t = m - 1;
      while (t >= 0 && ++e[coords_[t]] == p) e[coords_[t--]] = 0;
    }
  }

  SigmaAction sigma_;
  bool restrict_;
  std::vector<int> coords_;
  std::optional<Subgroup> filter_;
};

inline InvertedSet inverted_set(const SigmaAction& sigma, bool restrict_to_frattini) {
  return InvertedSet(sigma, restrict_to_frattini);
}

// Involutions of P inverting the abelianization, found by choosing
// y_i in x_i^-1 Phi(P) for the minimal generators. Returns at most limit
// actions (all when limit is unset), in lexicographic order of the tuples
// on the standard form of P.
inline std::vector<SigmaAction> find_gi_automorphisms(const PcPresentation& P,
                                                      std::optional<std::size_t> limit = std::nullopt) {
  const StandardForm sf = standard_form(P);
  const PcPresentation& S = sf.presentation;
  const int p = S.prime();
  detail::LayeredImageSearch search(S, S);
  const int g = search.rank();
  std::vector<std::vector<gfp::Vector>> first;
  if (g > 0) {
    std::vector<gfp::Vector> rows(static_cast<std::size_t>(g), gfp::Vector(static_cast<std::size_t>(g), 0));
    for (int i = 0; i < g; ++i) rows[i][i] = p - 1;
    first.push_back(rows);
  }
  const std::vector<int> minimal = S.undefined_generators();
  auto involutive = [&](const detail::LayeredImageSearch::Level& L, const std::vector<GroupElement>& images) {
    for (int i : minimal)
      if (evaluate(L.cod, images, images[i]) != L.cod.generator(i)) return false;
    return true;
  };
  std::vector<SigmaAction> out;
  search.run(first, involutive, [&](const std::vector<GroupElement>& tuple) {
    std::vector<GroupElement> on_s = derive_images(S, S, tuple);
    std::vector<GroupElement> images;
    for (int k = 0; k < P.ngens(); ++k)
      images.push_back(evaluate(P, sf.generators, evaluate(S, on_s, sf.images[k])));
    Morphism m(P, P, std::move(images), true, true);
    out.push_back(SigmaAction{P, std::move(m), SigmaProvenance::Discovered});
    return !limit || out.size() < *limit;
  });
  return out;
}

}  // namespace ssg

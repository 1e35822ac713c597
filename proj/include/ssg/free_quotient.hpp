#pragma once

// The maximal p-class-c quotients F_c of the free pro-p group of rank g,
// built as iterated p-covering groups.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "ssg/consistency.hpp"
#include "ssg/error.hpp"
#include "ssg/gfp.hpp"
#include "ssg/morphism.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/series.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

inline PcPresentation initial_quotient(int p, int g) {
  if (!gfp::is_prime(p) || p == 2) throw InputError("initial_quotient: p must be an odd prime");
  if (g < 1) throw InputError("initial_quotient: rank g must be at least 1");
  return elementary_abelian(p, g);
}

// Necklace (Witt) number: dimension of the degree-n part of the free Lie
// algebra on g generators.
inline std::uint64_t witt_number(int g, int n) {
  auto mobius = [](int m) {
    int result = 1;
    for (int q = 2; q * q <= m; ++q) {
      if (m % q) continue;
      m /= q;
      if (m % q == 0) return 0;
      result = -result;
    }
    if (m > 1) result = -result;
    return result;
  };
  long long sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    long long pw = 1;
    for (int t = 0; t < n / d; ++t) pw *= g;
    sum += mobius(d) * pw;
  }
  return static_cast<std::uint64_t>(sum / n);
}

// log_p |F_c| for odd p: layer k of the lower p-central series has dimension
// sum_{i<=k} witt(g, i).
inline std::uint64_t predicted_order_exponent(int g, int c) {
  std::uint64_t total = 0, layer = 0;
  for (int k = 1; k <= c; ++k) {
    layer += witt_number(g, k);
    total += layer;
  }
  return total;
}

struct PCover {
  PcPresentation cover;
  Subgroup multiplicator;  // span of the surviving tails
  Subgroup nucleus;        // P_c(cover), c = p-class of the input
  int tails_added = 0;     // before consistency elimination
};

namespace detail {

struct TailedRelation {
  Definition rel;  // which relation carries the tail
};

inline std::pair<PcPresentation, int> p_cover_presentation(const PcPresentation& G) {
  const int n = G.ngens();
  const int p = G.prime();
  if (n == 0) throw PreconditionError("p_cover: trivial group");
  if (!G.has_complete_definitions()) throw InputError("p_cover: missing definitions");
  int c = 0;
  for (int w : G.weights()) c = std::max(c, w);

  std::vector<TailedRelation> tailed;
  std::vector<int> power_tail(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> comm_tail(static_cast<std::size_t>(n));
  auto is_definition = [&](const Definition& d) {
    for (int k = 0; k < n; ++k)
      if (G.definition(k) && *G.definition(k) == d) return true;
    return false;
  };
  for (int j = 0; j < n; ++j) {
    comm_tail[j].assign(static_cast<std::size_t>(j), -1);
    if (!is_definition(Definition::power(j))) {
      power_tail[j] = static_cast<int>(tailed.size());
      tailed.push_back({Definition::power(j)});
    }
    for (int i = 0; i < j; ++i) {
      if (G.weight(i) + G.weight(j) > c + 1) continue;
      if (is_definition(Definition::commutator(j, i))) continue;
      comm_tail[j][i] = static_cast<int>(tailed.size());
      tailed.push_back({Definition::commutator(j, i)});
    }
  }
  const int t = static_cast<int>(tailed.size());

  auto extend = [&](const GroupElement& x, int tail) {
    std::vector<int> e = x.exponents();
    e.resize(static_cast<std::size_t>(n + t), 0);
    if (tail >= 0) e[n + tail] = 1;
    return GroupElement(std::move(e));
  };
  std::vector<int> hw = G.weights();
  hw.resize(static_cast<std::size_t>(n + t), c + 1);
  PcRelations hr = PcRelations::trivial(p, hw);
  for (int j = 0; j < n; ++j) {
    hr.powers[j] = extend(G.power_rhs(j), power_tail[j]);
    for (int i = 0; i < j; ++i) hr.commutators[j][i] = extend(G.commutator_rhs(j, i), comm_tail[j][i]);
    hr.definitions[j] = G.definition(j);
  }
  const PcPresentation H(std::move(hr));

  gfp::EchelonBasis eqs(p, t);
  for_each_overlap(H, [&](OverlapTest test) {
    gfp::Vector v(static_cast<std::size_t>(t));
    for (int k = 0; k < n; ++k)
      if (test.left[k] != test.right[k]) throw InputError("p_cover: inconsistent input at test " + test.label);
    for (int s = 0; s < t; ++s) v[s] = gfp::reduce(test.left[n + s] - test.right[n + s], p);
    eqs.insert(std::move(v));
  });

  // Pivot tails are eliminated in favour of the free ones.
  std::vector<int> row_of(static_cast<std::size_t>(t), -1);
  for (int r = 0; r < eqs.rank(); ++r) row_of[eqs.pivots()[r]] = r;
  std::vector<int> survivor_index(static_cast<std::size_t>(t), -1);
  int s_count = 0;
  for (int s = 0; s < t; ++s)
    if (row_of[s] < 0) survivor_index[s] = s_count++;

  const int m = n + s_count;
  auto tail_part = [&](const GroupElement& x, int tail) {
    std::vector<int> e(x.exponents().begin(), x.exponents().end());
    e.resize(static_cast<std::size_t>(m), 0);
    if (tail < 0) return GroupElement(std::move(e));
    if (survivor_index[tail] >= 0) {
      e[n + survivor_index[tail]] = 1;
    } else {
      const auto& row = eqs.rows()[row_of[tail]];
      for (int s = 0; s < t; ++s)
        if (survivor_index[s] >= 0 && row[s] != 0) e[n + survivor_index[s]] = gfp::reduce(-row[s], p);
    }
    return GroupElement(std::move(e));
  };
  std::vector<int> cw = G.weights();
  cw.resize(static_cast<std::size_t>(m), c + 1);
  PcRelations cr = PcRelations::trivial(p, cw);
  for (int j = 0; j < n; ++j) {
    cr.powers[j] = tail_part(G.power_rhs(j), power_tail[j]);
    for (int i = 0; i < j; ++i) cr.commutators[j][i] = tail_part(G.commutator_rhs(j, i), comm_tail[j][i]);
    cr.definitions[j] = G.definition(j);
  }
  for (int s = 0; s < t; ++s)
    if (survivor_index[s] >= 0) cr.definitions[n + survivor_index[s]] = tailed[s].rel;
  return {PcPresentation(std::move(cr)), t};
}

}  // namespace detail

// p-covering group of G: tails on every non-defining relation, made
// consistent by linear algebra over GF(p).
inline PCover p_cover(const PcPresentation& G) {
  if (!verify_consistency(G).empty()) throw InputError("p_cover: inconsistent input");
  if (!weights_match_series(G)) throw InputError("p_cover: weights do not follow the lower p-central series");
  auto [cover, t] = detail::p_cover_presentation(G);
  std::vector<GroupElement> tails;
  for (int k = G.ngens(); k < cover.ngens(); ++k) tails.push_back(cover.generator(k));
  Subgroup mult = make_canonical_subgroup(cover, tails);
  int c = 0;
  for (int w : G.weights()) c = std::max(c, w);
  SeriesData s = lower_p_central_series(cover);
  Subgroup nucleus = c < static_cast<int>(s.subgroups.size()) ? s.subgroups[c] : trivial_subgroup(cover);
  return PCover{cover, std::move(mult), std::move(nucleus), t};
}

inline constexpr int kDefaultOrderCeiling = 40;

class FreeQuotientTower {
 public:
  FreeQuotientTower(int p, int g, std::vector<PcPresentation> levels) : p_(p), g_(g), levels_(std::move(levels)) {}

  int prime() const { return p_; }
  int rank() const { return g_; }
  int p_class() const { return static_cast<int>(levels_.size()); }
  // F_c for 1 <= c <= p_class()
  const PcPresentation& level(int c) const {
    if (c < 1 || c > p_class()) throw InputError("tower level " + std::to_string(c) + " not built");
    return levels_[static_cast<std::size_t>(c - 1)];
  }
  const std::vector<PcPresentation>& levels() const { return levels_; }

  // F_{c+1} -> F_c; the presentation of F_c is a prefix of that of F_{c+1},
  // so the projection kills exactly the generators of weight c+1.
  Morphism projection(int c) const {
    const PcPresentation& hi = level(c + 1);
    const PcPresentation& lo = level(c);
    std::vector<GroupElement> images;
    for (int k = 0; k < hi.ngens(); ++k)
      images.push_back(k < lo.ngens() ? lo.generator(k) : lo.identity());
    return morphism_from_images(hi, lo, std::move(images));
  }

 private:
  int p_;
  int g_;
  std::vector<PcPresentation> levels_;
};

inline FreeQuotientTower extend_tower(const FreeQuotientTower& base, int c,
                                      int ceiling = kDefaultOrderCeiling) {
  if (c < 1) throw InputError("build_tower: class must be at least 1");
  if (predicted_order_exponent(base.rank(), c) > static_cast<std::uint64_t>(ceiling))
    throw CapExceeded("build_tower: |F_" + std::to_string(c) + "| = p^" +
                      std::to_string(predicted_order_exponent(base.rank(), c)) + " exceeds ceiling p^" +
                      std::to_string(ceiling));
  std::vector<PcPresentation> levels = base.levels();
  if (levels.empty()) levels.push_back(initial_quotient(base.prime(), base.rank()));
  while (static_cast<int>(levels.size()) < c) levels.push_back(detail::p_cover_presentation(levels.back()).first);
  if (static_cast<int>(levels.size()) > c) levels.resize(static_cast<std::size_t>(c));
  return FreeQuotientTower(base.prime(), base.rank(), std::move(levels));
}

inline FreeQuotientTower build_tower(int p, int g, int c, int ceiling = kDefaultOrderCeiling) {
  initial_quotient(p, g);
  return extend_tower(FreeQuotientTower(p, g, {}), c, ceiling);
}

// Supplies F_c on demand. The default implementation memoizes towers in
// memory; callers can plug in a persistent cache.
class TowerSource {
 public:
  virtual ~TowerSource() = default;
  virtual FreeQuotientTower tower(int p, int g, int c) = 0;
  PcPresentation level(int p, int g, int c) { return tower(p, g, c).level(c); }
  int ceiling() const { return ceiling_; }
  void set_ceiling(int e) { ceiling_ = e; }

 protected:
  int ceiling_ = kDefaultOrderCeiling;
};

class MemoryTowerSource : public TowerSource {
 public:
  FreeQuotientTower tower(int p, int g, int c) override {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(p, g);
    auto it = towers_.find(key);
    if (it == towers_.end()) {
      it = towers_.emplace(key, build_tower(p, g, c, ceiling_)).first;
    } else if (it->second.p_class() < c) {
      it->second = extend_tower(it->second, c, ceiling_);
    }
    const FreeQuotientTower& t = it->second;
    if (t.p_class() == c) return t;
    return FreeQuotientTower(p, g, {t.levels().begin(), t.levels().begin() + c});
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, FreeQuotientTower> towers_;
};

}  // namespace ssg

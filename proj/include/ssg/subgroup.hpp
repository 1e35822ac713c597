#pragma once

// Subgroups of pc-groups as canonical induced generating sequences.
//
// A canonical igs has one element per depth in its depth set, each with
// leading exponent 1 and exponent 0 at every other depth of the set. Two
// subgroups of the same group are equal iff their canonical igs coincide.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/gfp.hpp"
#include "ssg/pc_presentation.hpp"

namespace ssg {

enum class Closure { Plain, Normal };

class Subgroup {
 public:
  Subgroup() = default;

  const PcPresentation& parent() const { return parent_; }
  const std::vector<GroupElement>& igs() const { return igs_; }
  int order_exponent() const { return static_cast<int>(igs_.size()); }
  bool is_trivial() const { return igs_.empty(); }
  bool is_whole() const { return order_exponent() == parent_.ngens(); }

  std::vector<int> depths() const {
    std::vector<int> out;
    for (const auto& g : igs_) out.push_back(g.depth());
    return out;
  }

  // Remainder after sifting through the igs; identity iff x is a member.
  GroupElement sift(GroupElement x) const {
    const int p = parent_.prime();
    for (const auto& y : igs_) {
      int d = y.depth();
      if (x[d] != 0) x = parent_.multiply(x, parent_.power(y, p - x[d]));
    }
    return x;
  }

  bool contains(const GroupElement& x) const { return sift(x).is_identity(); }

  bool contains(const Subgroup& other) const {
    if (other.order_exponent() > order_exponent()) return false;
    return std::all_of(other.igs_.begin(), other.igs_.end(),
                       [&](const GroupElement& g) { return contains(g); });
  }

  bool is_normal() const {
    for (const auto& x : igs_)
      for (int k = 0; k < parent_.ngens(); ++k)
        if (!contains(parent_.conjugate(x, parent_.generator(k)))) return false;
    return true;
  }

  // Normal-word elements of the subgroup, in the order of the base-p odometer
  // over igs exponents (last igs element fastest).
  template <typename Visit>
  void for_each_element(Visit&& visit) const {
    const int p = parent_.prime();
    const int m = order_exponent();
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    while (true) {
      GroupElement x = parent_.identity();
      for (int t = 0; t < m; ++t)
        if (e[t] != 0) x = parent_.multiply(x, parent_.power(igs_[t], e[t]));
      visit(x);
      int k = m - 1;
      while (k >= 0 && ++e[k] == p) e[k--] = 0;
      if (k < 0) break;
    }
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.igs_ == b.igs_ && a.parent_ == b.parent_;
  }

  friend Subgroup make_canonical_subgroup(PcPresentation parent, std::vector<GroupElement> igs);

 private:
  PcPresentation parent_;
  std::vector<GroupElement> igs_;
};

struct SubgroupHash {
  std::size_t operator()(const Subgroup& s) const noexcept {
    std::size_t h = static_cast<std::size_t>(s.order_exponent());
    GroupElementHash eh;
    for (const auto& g : s.igs()) h = h * 1000003u ^ eh(g);
    return h;
  }
};

// Trusts the caller that igs is canonical.
inline Subgroup make_canonical_subgroup(PcPresentation parent, std::vector<GroupElement> igs) {
  Subgroup s;
  s.parent_ = std::move(parent);
  s.igs_ = std::move(igs);
  return s;
}

namespace detail {

class IgsBuilder {
 public:
  IgsBuilder(const PcPresentation& G, Closure mode)
      : G_(G), mode_(mode), slot_(static_cast<std::size_t>(G.ngens())) {}

  void add(GroupElement x) {
    pending_.push_back(std::move(x));
    while (!pending_.empty()) {
      GroupElement y = std::move(pending_.back());
      pending_.pop_back();
      insert(std::move(y));
    }
  }

  Subgroup finish() const {
    const int p = G_.prime();
    const int n = G_.ngens();
    std::vector<GroupElement> out;
    for (int d = 0; d < n; ++d) {
      if (!slot_[d]) continue;
      GroupElement x = *slot_[d];
      for (int e = d + 1; e < n; ++e)
        if (slot_[e] && x[e] != 0) x = G_.multiply(x, G_.power(*slot_[e], p - x[e]));
      out.push_back(std::move(x));
    }
    return make_canonical_subgroup(G_, std::move(out));
  }

 private:
  void insert(GroupElement x) {
    const int p = G_.prime();
    int d = x.depth();
    while (d < G_.ngens() && slot_[d]) {
      x = G_.multiply(x, G_.power(*slot_[d], p - x[d]));
      d = x.depth();
    }
    if (d == G_.ngens()) return;
    if (x[d] != 1) x = G_.power(x, gfp::inverse(x[d], p));
    for (int e = 0; e < G_.ngens(); ++e)
      if (slot_[e]) pending_.push_back(G_.commutator(x, *slot_[e]));
    pending_.push_back(G_.power(x, p));
    if (mode_ == Closure::Normal)
      for (int k = 0; k < G_.ngens(); ++k) pending_.push_back(G_.commutator(x, G_.generator(k)));
    slot_[d] = std::move(x);
  }

  const PcPresentation& G_;
  Closure mode_;
  std::vector<std::optional<GroupElement>> slot_;
  std::vector<GroupElement> pending_;
};

}  // namespace detail

// Subgroup generated by gens (Plain) or its normal closure (Normal).
inline Subgroup subgroup_close(const PcPresentation& G, const std::vector<GroupElement>& gens,
                               Closure mode = Closure::Plain) {
  detail::IgsBuilder b(G, mode);
  for (const auto& g : gens) {
    G.check(g);
    b.add(g);
  }
  return b.finish();
}

inline Subgroup trivial_subgroup(const PcPresentation& G) { return make_canonical_subgroup(G, {}); }

inline Subgroup whole_group(const PcPresentation& G) {
  std::vector<GroupElement> igs;
  for (int k = 0; k < G.ngens(); ++k) igs.push_back(G.generator(k));
  return make_canonical_subgroup(G, std::move(igs));
}

// Subgroup generated by a and b.
inline Subgroup join(const Subgroup& a, const Subgroup& b, Closure mode = Closure::Plain) {
  std::vector<GroupElement> gens = a.igs();
  gens.insert(gens.end(), b.igs().begin(), b.igs().end());
  return subgroup_close(a.parent(), gens, mode);
}

// Elements of distinct depths, each with leading exponent 1, not necessarily
// reduced against each other. Decomposes members as ordered products.
class DepthSequence {
 public:
  DepthSequence(const PcPresentation& G, std::vector<GroupElement> elements) : G_(G) {
    slot_.assign(static_cast<std::size_t>(G.ngens()), -1);
    for (auto& e : elements) {
      int d = e.depth();
      if (d == G.ngens() || e[d] != 1 || slot_[d] != -1)
        throw PreconditionError("DepthSequence: elements need distinct depths and leading exponent 1");
      slot_[d] = static_cast<int>(elems_.size());
      elems_.push_back(std::move(e));
    }
    const int p = G.prime();
    for (const auto& e : elems_) {
      std::vector<GroupElement> inv_pows(static_cast<std::size_t>(p));
      GroupElement inv = G.inverse(e);
      inv_pows[0] = G.identity();
      for (int m = 1; m < p; ++m) inv_pows[m] = G.multiply(inv_pows[m - 1], inv);
      inverse_powers_.push_back(std::move(inv_pows));
    }
  }

  int size() const { return static_cast<int>(elems_.size()); }
  const std::vector<GroupElement>& elements() const { return elems_; }

  // x = prod_t elements[t]^{e_t} in increasing depth order; nullopt if x is
  // not a normal word in this sequence. Exponents indexed like elements().
  std::optional<std::vector<int>> decompose(GroupElement x) const {
    std::vector<int> out(elems_.size(), 0);
    int d = x.depth();
    while (d < G_.ngens()) {
      int t = slot_[d];
      if (t < 0) return std::nullopt;
      out[t] = x[d];
      x = G_.multiply(inverse_powers_[t][x[d]], x);
      d = x.depth();
    }
    return out;
  }

 private:
  PcPresentation G_;
  std::vector<int> slot_;
  std::vector<GroupElement> elems_;
  std::vector<std::vector<GroupElement>> inverse_powers_;
};

// Coordinates on an elementary abelian section upper/lower (lower normal in
// upper). coordinates(x) is a group homomorphism upper -> GF(p)^dim with
// kernel lower.
class SectionCoordinates {
 public:
  SectionCoordinates(const Subgroup& upper, const Subgroup& lower)
      : seq_(upper.parent(), build(upper, lower, layer_)) {}

  int dim() const { return static_cast<int>(layer_.size()); }
  // Elements of upper whose images form the coordinate basis.
  std::vector<GroupElement> basis() const {
    std::vector<GroupElement> out;
    for (int t : layer_) out.push_back(seq_.elements()[t]);
    return out;
  }

  gfp::Vector coordinates(const GroupElement& x) const {
    auto e = seq_.decompose(x);
    if (!e) throw PreconditionError("SectionCoordinates: element not in the upper subgroup");
    gfp::Vector v;
    for (int t : layer_) v.push_back((*e)[t]);
    return v;
  }

 private:
  static std::vector<GroupElement> build(const Subgroup& upper, const Subgroup& lower,
                                         std::vector<int>& layer) {
    std::vector<int> lower_depths = lower.depths();
    std::vector<GroupElement> elems;
    std::vector<std::pair<int, GroupElement>> tagged;
    for (const auto& g : upper.igs()) {
      if (std::find(lower_depths.begin(), lower_depths.end(), g.depth()) == lower_depths.end())
        tagged.emplace_back(1, g);
    }
    for (const auto& g : lower.igs()) tagged.emplace_back(0, g);
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& a, const auto& b) { return a.second.depth() < b.second.depth(); });
    for (std::size_t t = 0; t < tagged.size(); ++t) {
      if (tagged[t].first == 1) layer.push_back(static_cast<int>(t));
      elems.push_back(tagged[t].second);
    }
    return elems;
  }

  std::vector<int> layer_;
  DepthSequence seq_;
};

}  // namespace ssg

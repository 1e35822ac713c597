#pragma once

// Depth-first search for homomorphisms between presentations in standard
// form, fixing the images of the minimal generators one lower p-central layer
// at a time and pruning on the truncated quotients.

#include <functional>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/gfp.hpp"
#include "ssg/morphism.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"

namespace ssg::detail {

class LayeredImageSearch {
 public:
  // Level data: the domain and codomain truncated to weight <= k.
  struct Level {
    int k;
    PcPresentation dom;
    PcPresentation cod;
  };

  // Called once all layers up to k are fixed. images are the derived images
  // of every pc-generator of level.dom in level.cod.
  using Check = std::function<bool(const Level& level, const std::vector<GroupElement>& images)>;
  // Called on complete tuples (images of the minimal generators of dom in
  // cod); returns false to stop the search.
  using Visit = std::function<bool(const std::vector<GroupElement>& tuple)>;

  // dom and cod in standard form with equal generator rank; the search runs
  // up to the p-class of cod.
  LayeredImageSearch(const PcPresentation& dom, const PcPresentation& cod) : dom_(dom), cod_(cod) {
    g_ = static_cast<int>(dom.undefined_generators().size());
    int c = 0;
    for (int w : cod.weights()) c = std::max(c, w);
    for (int k = 1; k <= c; ++k) {
      int lo = 0;
      while (lo < cod.ngens() && cod.weight(lo) < k) ++lo;
      int hi = lo;
      while (hi < cod.ngens() && cod.weight(hi) == k) ++hi;
      bounds_.emplace_back(lo, hi);
      levels_.push_back(Level{k, truncate_to_weight(dom, k), truncate_to_weight(cod, k)});
    }
  }

  int rank() const { return g_; }
  int layer_dim(int k) const { return bounds_[k - 1].second - bounds_[k - 1].first; }

  // first_layer: admissible layer-1 coordinate tuples, each holding g vectors
  // of length layer_dim(1).
  // With fix_last_layer the top layer of every image is left zero; changing
  // it never affects whether the images define a homomorphism, since that
  // layer is central of exponent p and the relators lie in the Frattini
  // subgroup of the free group.
  void run(const std::vector<std::vector<gfp::Vector>>& first_layer, const Check& check, const Visit& visit,
           bool fix_last_layer = false) {
    stopped_ = false;
    fix_last_ = fix_last_layer;
    if (levels_.empty()) {
      std::vector<GroupElement> tuple(static_cast<std::size_t>(g_), cod_.identity());
      visit(tuple);
      return;
    }
    std::vector<GroupElement> tuple(static_cast<std::size_t>(g_), cod_.identity());
    for (const auto& choice : first_layer) {
      for (int i = 0; i < g_; ++i) {
        auto& e = tuple[i].mutable_exponents();
        std::fill(e.begin(), e.end(), 0);
        for (int t = 0; t < layer_dim(1); ++t) e[bounds_[0].first + t] = choice[i][t];
      }
      if (!accept(1, tuple, check)) continue;
      descend(2, 0, tuple, check, visit);
      if (stopped_) return;
    }
  }

 private:
  std::vector<GroupElement> images_at(int k, const std::vector<GroupElement>& tuple) const {
    const Level& L = levels_[k - 1];
    const int m = L.cod.ngens();
    std::vector<GroupElement> cut;
    for (const auto& y : tuple) cut.push_back(truncate_element(y, m));
    return derive_images(L.dom, L.cod, cut);
  }

  bool relations_hold(int k, const std::vector<GroupElement>& tuple) const {
    const Level& L = levels_[k - 1];
    return respects_relations(L.dom, L.cod, images_at(k, tuple));
  }

  bool accept(int k, const std::vector<GroupElement>& tuple, const Check& check) const {
    const std::vector<GroupElement> images = images_at(k, tuple);
    const Level& L = levels_[k - 1];
    if (!respects_relations(L.dom, L.cod, images)) return false;
    return check(L, images);
  }

  void descend(int k, int i, std::vector<GroupElement>& tuple, const Check& check, const Visit& visit) {
    if (stopped_) return;
    if (k > static_cast<int>(levels_.size())) {
      if (!visit(tuple)) stopped_ = true;
      return;
    }
    if (i == 0) {
      // layer k is still zero here, and does not affect the relations at level k
      if (!relations_hold(k, tuple)) return;
      if (fix_last_ && k == static_cast<int>(levels_.size())) {
        if (check(levels_[k - 1], images_at(k, tuple))) descend(k + 1, 0, tuple, check, visit);
        return;
      }
    }
    if (i == g_) {
      if (check(levels_[k - 1], images_at(k, tuple))) descend(k + 1, 0, tuple, check, visit);
      return;
    }
    const int lo = bounds_[k - 1].first;
    const int d = layer_dim(k);
    const int p = cod_.prime();
    auto& e = tuple[i].mutable_exponents();
    std::vector<int> digits(static_cast<std::size_t>(d), 0);
    while (true) {
      for (int t = 0; t < d; ++t) e[lo + t] = digits[t];
      descend(k, i + 1, tuple, check, visit);
      if (stopped_) break;
      int t = d - 1;
      while (t >= 0 && ++digits[t] == p) digits[t--] = 0;
      if (t < 0) break;
    }
    for (int t = 0; t < d; ++t) e[lo + t] = 0;
  }

  PcPresentation dom_;
  PcPresentation cod_;
  int g_ = 0;
  std::vector<std::pair<int, int>> bounds_;
  std::vector<Level> levels_;
  bool stopped_ = false;
  bool fix_last_ = false;
};

// Every invertible g x g matrix over GF(p), as lists of row vectors, in
// lexicographic order of the entries.
inline std::vector<std::vector<gfp::Vector>> invertible_matrices(int p, int g) {
  std::vector<std::vector<gfp::Vector>> out;
  std::vector<gfp::Vector> rows(static_cast<std::size_t>(g), gfp::Vector(static_cast<std::size_t>(g), 0));
  std::function<void(int, gfp::EchelonBasis)> rec = [&](int r, gfp::EchelonBasis basis) {
    if (r == g) {
      out.push_back(rows);
      return;
    }
    gfp::Vector v(static_cast<std::size_t>(g), 0);
    while (true) {
      gfp::EchelonBasis next = basis;
      if (next.insert(v)) {
        rows[r] = v;
        rec(r + 1, next);
      }
      int t = g - 1;
      while (t >= 0 && ++v[t] == p) v[t--] = 0;
      if (t < 0) break;
    }
  };
  rec(0, gfp::EchelonBasis(p, g));
  return out;
}

}  // namespace ssg::detail

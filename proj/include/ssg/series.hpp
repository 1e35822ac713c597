#pragma once

// Lower p-central series, Frattini subgroup, p-class and generator rank.

#include <span>
#include <vector>

#include "ssg/gfp.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

// N^p [G, N] for a normal subgroup N of G.
inline Subgroup p_central_step(const PcPresentation& G, const Subgroup& N) {
  std::vector<GroupElement> gens;
  for (const auto& x : N.igs()) {
    gens.push_back(G.power(x, G.prime()));
    for (int k = 0; k < G.ngens(); ++k) gens.push_back(G.commutator(G.generator(k), x));
  }
  return subgroup_close(G, gens, Closure::Normal);
}

// P_0(G) = G, P_k(G) = P_{k-1}(G)^p [G, P_{k-1}(G)], down to the trivial group.
struct SeriesData {
  std::vector<Subgroup> subgroups;
  int p_class = 0;  // least c with P_c(G) trivial

  std::vector<int> order_exponents() const {
    std::vector<int> out;
    for (const auto& s : subgroups) out.push_back(s.order_exponent());
    return out;
  }
};

inline SeriesData lower_p_central_series(const PcPresentation& G) {
  SeriesData out;
  out.subgroups.push_back(whole_group(G));
  while (!out.subgroups.back().is_trivial()) {
    Subgroup next = p_central_step(G, out.subgroups.back());
    if (next.order_exponent() >= out.subgroups.back().order_exponent())
      throw PreconditionError("lower p-central series does not descend; presentation is not a p-group presentation");
    out.subgroups.push_back(std::move(next));
  }
  out.p_class = static_cast<int>(out.subgroups.size()) - 1;
  return out;
}

inline Subgroup frattini(const PcPresentation& G) { return p_central_step(G, whole_group(G)); }

inline int p_class(const PcPresentation& G) { return lower_p_central_series(G).p_class; }

// [G, G], the kernel of the abelianization.
inline Subgroup derived_subgroup(const PcPresentation& G) {
  std::vector<GroupElement> gens;
  for (int j = 0; j < G.ngens(); ++j)
    for (int i = 0; i < j; ++i) gens.push_back(G.commutator(G.generator(j), G.generator(i)));
  return subgroup_close(G, gens, Closure::Normal);
}

inline int generator_rank(const PcPresentation& G) { return G.ngens() - frattini(G).order_exponent(); }

// Decides whether elements generate G by looking at their images in the
// Frattini quotient.
class GeneratingTest {
 public:
  explicit GeneratingTest(const PcPresentation& G)
      : G_(G), coords_(whole_group(G), frattini(G)) {}

  int rank() const { return coords_.dim(); }

  gfp::Vector frattini_coordinates(const GroupElement& x) const { return coords_.coordinates(x); }

  bool generates(std::span<const GroupElement> elems) const {
    gfp::EchelonBasis b(G_.prime(), coords_.dim());
    for (const auto& e : elems) {
      b.insert(coords_.coordinates(e));
      if (b.rank() == coords_.dim()) return true;
    }
    return b.rank() == coords_.dim();
  }

 private:
  PcPresentation G_;
  SectionCoordinates coords_;
};

// True when each P_k(G) is spanned by the generators of weight > k, i.e. the
// weights are exactly the lower p-central layers.
inline bool weights_match_series(const PcPresentation& G) {
  const SeriesData s = lower_p_central_series(G);
  for (std::size_t k = 0; k < s.subgroups.size(); ++k) {
    std::vector<GroupElement> gens;
    for (int i = 0; i < G.ngens(); ++i)
      if (G.weight(i) > static_cast<int>(k)) gens.push_back(G.generator(i));
    if (!(subgroup_close(G, gens) == s.subgroups[k])) return false;
  }
  return true;
}

// Weights follow the lower p-central series and every weight >= 2 generator
// carries a definition: the form every presentation the library emits has.
inline bool is_standard(const PcPresentation& G) {
  return G.has_complete_definitions() && weights_match_series(G);
}

}  // namespace ssg

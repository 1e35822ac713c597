#pragma once

// Deciding whether a p-group is a quotient G/P_c(G) of a Schur sigma-group
// (or Schur+1 sigma-group): the invariant h, N* = N^p [F_c, N], epimorphism
// kernels, relator censuses and the exhaustive audit of the kernel criterion.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/free_quotient.hpp"
#include "ssg/isomorphism.hpp"
#include "ssg/layered_search.hpp"
#include "ssg/morphism.hpp"
#include "ssg/parallel.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"
#include "ssg/series.hpp"
#include "ssg/sigma.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

enum class KernelRoute {
  Auto,       // Tuples when within max_tuples, otherwise AutOrbit
  Tuples,     // every generating g-tuple of P
  AutOrbit,   // orbit of one kernel under generators of Aut(F_c)
};

struct ClassificationConfig {
  int p = 3;
  int g = 2;
  int slack = 0;  // 0: relation rank g, 1: relation rank g + 1
  int cap_exponent = kDefaultOrderCeiling;  // largest log_p |F_c| accepted
  std::uint64_t max_tuples = 5'000'000;
  KernelRoute route = KernelRoute::Auto;
  int jobs = 1;
};

enum class Outcome { Ancestor, PseudoAncestor, FailsSigma, FailsHBound };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Ancestor: return "ancestor";
    case Outcome::PseudoAncestor: return "pseudo";
    case Outcome::FailsSigma: return "fails_sigma";
    case Outcome::FailsHBound: return "fails_h";
  }
  return "";
}

struct ClassificationVerdict {
  Outcome outcome = Outcome::FailsSigma;
  int h = 0;
  int g = 0;
  int p_class = 0;
  int slack = 0;
  std::optional<Subgroup> witness_kernel;                  // subgroup of F_c
  std::optional<std::vector<GroupElement>> witness_relators;  // elements of X_c
  std::size_t kernels_examined = 0;
};

inline Subgroup star_subgroup(const PcPresentation& F, const Subgroup& N) {
  if (!N.is_normal()) throw PreconditionError("star_subgroup: subgroup is not normal");
  return p_central_step(F, N);
}

inline bool sigma_invariant(const SigmaAction& sigma, const Subgroup& N) {
  for (const auto& x : N.igs())
    if (!N.contains(sigma(x))) return false;
  return true;
}

// sigma acts as inversion on N/N*.
inline bool sigma_inverts_quotient(const PcPresentation& F, const SigmaAction& sigma, const Subgroup& N) {
  if (!sigma_invariant(sigma, N)) throw PreconditionError("sigma_inverts_quotient: sigma(N) != N");
  const Subgroup star = star_subgroup(F, N);
  for (const auto& n : N.igs())
    if (!star.contains(F.multiply(n, sigma(n)))) return false;
  return true;
}

// dim N/N*.
inline int star_dimension(const PcPresentation& F, const Subgroup& N) {
  return N.order_exponent() - star_subgroup(F, N).order_exponent();
}

namespace detail {

struct Target {
  PcPresentation standard;  // standard form of P
  int g = 0;
  int c = 0;
};

inline Target prepare_target(const PcPresentation& P) {
  Target t{standard_form(P).presentation, 0, 0};
  t.g = static_cast<int>(t.standard.undefined_generators().size());
  for (int w : t.standard.weights()) t.c = std::max(t.c, w);
  return t;
}

// Kernel of the epimorphism F_c -> S matching minimal generators in order.
inline Subgroup standard_kernel(const PcPresentation& F, const PcPresentation& S) {
  std::vector<GroupElement> tuple;
  for (int i : S.undefined_generators()) tuple.push_back(S.generator(i));
  return kernel_from_images(F, S, derive_images(F, S, tuple));
}

inline std::uint64_t tuple_count(const PcPresentation& S, int g) {
  std::uint64_t gl = detail::invertible_matrices(S.prime(), g).size();
  std::uint64_t t = gl;
  for (int k = 0; k < g * (S.ngens() - g); ++k) {
    if (t > (std::uint64_t{1} << 60) / static_cast<std::uint64_t>(S.prime())) return UINT64_MAX;
    t *= static_cast<std::uint64_t>(S.prime());
  }
  return t;
}

inline std::vector<Subgroup> kernels_by_tuples(const PcPresentation& F, const PcPresentation& S, int g,
                                               int jobs) {
  const int p = S.prime();
  const int n = S.ngens();
  const auto matrices = invertible_matrices(p, g);
  std::uint64_t deep = 1;
  for (int k = 0; k < g * (n - g); ++k) deep *= static_cast<std::uint64_t>(p);
  const std::uint64_t total = matrices.size() * deep;
  auto slices = parallel_ranges(total, jobs, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Subgroup> found;
    std::unordered_set<Subgroup, SubgroupHash> seen;
    std::vector<GroupElement> tuple(static_cast<std::size_t>(g), S.identity());
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto& m = matrices[idx / deep];
      std::uint64_t rest = idx % deep;
      for (int i = g - 1; i >= 0; --i) {
        auto& e = tuple[i].mutable_exponents();
        for (int k = n - 1; k >= g; --k) {
          e[k] = static_cast<int>(rest % static_cast<std::uint64_t>(p));
          rest /= static_cast<std::uint64_t>(p);
        }
        for (int k = 0; k < g; ++k) e[k] = m[i][k];
      }
      Subgroup N = kernel_from_images(F, S, derive_images(F, S, tuple));
      if (seen.insert(N).second) found.push_back(std::move(N));
    }
    return found;
  });
  std::vector<Subgroup> out;
  std::unordered_set<Subgroup, SubgroupHash> seen;
  for (auto& slice : slices)
    for (auto& N : slice)
      if (seen.insert(N).second) out.push_back(std::move(N));
  return out;
}

// Automorphisms of F_c generating Aut(F_c), as images of the minimal
// generators: elementary transvections and one scaling generate GL_g(p) on
// the Frattini quotient, and x_i -> x_i a_k for pc-generators a_k in Phi
// generate the kernel of the action on F_c / Phi(F_c).
inline std::vector<std::vector<GroupElement>> free_automorphism_generators(const PcPresentation& F) {
  const std::vector<int> minimal = F.undefined_generators();
  const int g = static_cast<int>(minimal.size());
  const int p = F.prime();
  int root = 1;
  for (int a = 2; a < p; ++a) {
    int order = 1;
    for (long long x = a; x != 1; x = x * a % p) ++order;
    if (order == p - 1) {
      root = a;
      break;
    }
  }
  std::vector<GroupElement> base;
  for (int i : minimal) base.push_back(F.generator(i));
  std::vector<std::vector<GroupElement>> out;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      if (i == j) continue;
      auto t = base;
      t[i] = F.multiply(base[i], base[j]);
      out.push_back(std::move(t));
    }
  }
  if (g > 0 && root != 1) {
    auto t = base;
    t[0] = F.generator(minimal[0], root);
    out.push_back(std::move(t));
  }
  for (int i = 0; i < g; ++i)
    for (int k = 0; k < F.ngens(); ++k) {
      if (F.weight(k) < 2) continue;
      auto t = base;
      t[i] = F.multiply(base[i], F.generator(k));
      out.push_back(std::move(t));
    }
  return out;
}

inline std::vector<Subgroup> kernels_by_orbit(const PcPresentation& F, const Subgroup& N0) {
  std::vector<std::vector<GroupElement>> autos;
  for (const auto& t : free_automorphism_generators(F)) autos.push_back(derive_images(F, F, t));
  std::vector<Subgroup> out{N0};
  std::unordered_set<Subgroup, SubgroupHash> seen{N0};
  for (std::size_t q = 0; q < out.size(); ++q) {
    for (const auto& a : autos) {
      std::vector<GroupElement> gens;
      for (const auto& x : out[q].igs()) gens.push_back(evaluate(F, a, x));
      Subgroup M = subgroup_close(F, gens);
      if (seen.insert(M).second) out.push_back(std::move(M));
    }
  }
  return out;
}

}  // namespace detail

// Distinct kernels of epimorphisms F_c -> P, where c is the p-class of P and
// F is the free quotient F_c of the same rank.
inline std::vector<Subgroup> epimorphism_kernels(const PcPresentation& F, const PcPresentation& P,
                                                 KernelRoute route = KernelRoute::Auto,
                                                 std::uint64_t max_tuples = 5'000'000, int jobs = 1) {
  const detail::Target t = detail::prepare_target(P);
  if (t.g != static_cast<int>(F.undefined_generators().size()))
    throw PreconditionError("epimorphism_kernels: generator ranks differ");
  const std::uint64_t count = detail::tuple_count(t.standard, t.g);
  if (route == KernelRoute::Auto) route = count <= max_tuples ? KernelRoute::Tuples : KernelRoute::AutOrbit;
  if (route == KernelRoute::Tuples) {
    if (count > max_tuples)
      throw CapExceeded("epimorphism_kernels: " + std::to_string(count) + " generating tuples exceed the cap");
    return detail::kernels_by_tuples(F, t.standard, t.g, jobs);
  }
  return detail::kernels_by_orbit(F, detail::standard_kernel(F, t.standard));
}

// h(P) = dim N/N* for the kernel N of an epimorphism F_c -> P.
inline int compute_h(const PcPresentation& F, const PcPresentation& P) {
  const detail::Target t = detail::prepare_target(P);
  if (t.g != static_cast<int>(F.undefined_generators().size()))
    throw PreconditionError("compute_h: generator ranks differ");
  return star_dimension(F, detail::standard_kernel(F, t.standard));
}

inline int compute_h(const PcPresentation& P, TowerSource& towers) {
  const detail::Target t = detail::prepare_target(P);
  if (t.c == 0) return 0;
  return compute_h(towers.level(P.prime(), t.g, t.c), P);
}

// r_i = s_i^-1 sigma(s_i) for lifts s_i of a basis of N/N*, checked to
// generate N as a normal subgroup.
inline std::vector<GroupElement> witness_relators(const PcPresentation& F, const SigmaAction& sigma,
                                                  const Subgroup& N, int length) {
  SectionCoordinates sec(N, star_subgroup(F, N));
  std::vector<GroupElement> r;
  for (const auto& s : sec.basis()) r.push_back(F.multiply(F.inverse(s), sigma(s)));
  if (!(subgroup_close(F, r, Closure::Normal) == N))
    throw PreconditionError("witness_relators: relators do not generate the kernel");
  while (static_cast<int>(r.size()) < length) r.push_back(F.identity());
  return r;
}

inline ClassificationVerdict classify(const PcPresentation& P, const ClassificationConfig& cfg,
                                      TowerSource& towers) {
  if (cfg.slack != 0 && cfg.slack != 1) throw InputError("classify: slack must be 0 or 1");
  if (P.prime() != cfg.p) throw InputError("classify: prime differs from configuration");
  const detail::Target t = detail::prepare_target(P);
  if (t.g != cfg.g)
    throw InputError("classify: generator rank " + std::to_string(t.g) + " differs from g = " +
                     std::to_string(cfg.g));
  ClassificationVerdict v;
  v.g = cfg.g;
  v.slack = cfg.slack;
  v.p_class = t.c;
  const int bound = cfg.g + cfg.slack;
  if (t.c == 0) {
    v.outcome = Outcome::Ancestor;
    return v;
  }
  if (predicted_order_exponent(cfg.g, t.c) > static_cast<std::uint64_t>(cfg.cap_exponent))
    throw CapExceeded("classify: |F_" + std::to_string(t.c) + "| exceeds the cap");
  const PcPresentation F = towers.level(cfg.p, cfg.g, t.c);
  v.h = compute_h(F, t.standard);
  if (find_gi_automorphisms(t.standard, 1).empty()) {
    v.outcome = Outcome::FailsSigma;
    return v;
  }
  if (v.h > bound) {
    v.outcome = Outcome::FailsHBound;
    return v;
  }
  const SigmaAction sigma = canonical_sigma(F);
  const auto kernels = epimorphism_kernels(F, t.standard, cfg.route, cfg.max_tuples, cfg.jobs);
  v.kernels_examined = kernels.size();
  v.outcome = Outcome::PseudoAncestor;
  for (const auto& N : kernels) {
    if (!sigma_invariant(sigma, N)) continue;
    if (star_dimension(F, N) > bound) continue;
    if (!sigma_inverts_quotient(F, sigma, N)) continue;
    v.outcome = Outcome::Ancestor;
    v.witness_kernel = N;
    v.witness_relators = witness_relators(F, sigma, N, bound);
    break;
  }
  return v;
}

inline ClassificationVerdict classify(const PcPresentation& P, const ClassificationConfig& cfg) {
  MemoryTowerSource towers;
  towers.set_ceiling(cfg.cap_exponent);
  return classify(P, cfg, towers);
}

// dim N/N* for every kernel of an epimorphism F_c -> P.
inline std::vector<int> kernel_h_values(const PcPresentation& F, const PcPresentation& P,
                                        KernelRoute route = KernelRoute::Auto) {
  std::vector<int> out;
  for (const auto& N : epimorphism_kernels(F, P, route)) out.push_back(star_dimension(F, N));
  return out;
}

struct CensusClass {
  PcPresentation representative;
  std::vector<GroupElement> relators;  // least relator tuple giving this class
  std::uint64_t tuple_multiplicity = 0;
  int order_exponent = 0;
};

struct AncestorCensus {
  int p = 0, g = 0, c = 0, slack = 0;
  std::uint64_t inverted_set_size = 0;
  std::uint64_t total_tuples = 0;
  std::uint64_t lower_class_tuples = 0;  // quotients of p-class below c
  std::size_t distinct_kernels = 0;
  std::vector<CensusClass> classes;
};

inline constexpr std::uint64_t kDefaultCensusBudget = 10'000'000;

// Quotients F_c / <r_1, ..., r_{g+slack}>^{F_c} over all tuples from X_c,
// bucketed by isomorphism. Tuples are visited as sorted multisets weighted
// by their number of orderings.
inline AncestorCensus relator_census(int p, int g, int c, int slack, TowerSource& towers,
                                     std::uint64_t budget = kDefaultCensusBudget) {
  if (slack != 0 && slack != 1) throw InputError("relator_census: slack must be 0 or 1");
  const PcPresentation F = towers.level(p, g, c);
  const SigmaAction sigma = canonical_sigma(F);
  const std::vector<GroupElement> X = inverted_set(sigma, true).members();
  const int L = g + slack;
  AncestorCensus out;
  out.p = p;
  out.g = g;
  out.c = c;
  out.slack = slack;
  out.inverted_set_size = X.size();
  out.total_tuples = 1;
  for (int i = 0; i < L; ++i) {
    if (out.total_tuples > budget / std::max<std::uint64_t>(1, X.size()))
      throw CapExceeded("relator_census: |X_c|^" + std::to_string(L) + " exceeds the tuple budget");
    out.total_tuples *= X.size();
  }

  std::vector<std::uint64_t> factorial(static_cast<std::size_t>(L + 1), 1);
  for (int i = 1; i <= L; ++i) factorial[i] = factorial[i - 1] * static_cast<std::uint64_t>(i);

  struct Bucket {
    Subgroup N;
    std::vector<int> first;
    std::uint64_t multiplicity = 0;
  };
  std::vector<Bucket> buckets;
  std::unordered_map<Subgroup, std::size_t, SubgroupHash> index;
  std::vector<int> idx(static_cast<std::size_t>(L), 0);
  const int m = static_cast<int>(X.size());
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == L) {
      std::vector<GroupElement> rel;
      for (int i : idx) rel.push_back(X[i]);
      std::uint64_t mult = factorial[L];
      for (int a = 0; a < L;) {
        int b = a;
        while (b < L && idx[b] == idx[a]) ++b;
        mult /= factorial[b - a];
        a = b;
      }
      Subgroup N = subgroup_close(F, rel, Closure::Normal);
      auto [it, fresh] = index.emplace(N, buckets.size());
      if (fresh) buckets.push_back(Bucket{std::move(N), idx, 0});
      buckets[it->second].multiplicity += mult;
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[pos] = i;
      rec(pos + 1, i);
    }
  };
  rec(0, 0);
  out.distinct_kernels = buckets.size();

  const Subgroup top = lower_p_central_series(F).subgroups[static_cast<std::size_t>(c - 1)];
  std::vector<PcPresentation> quotients;
  std::vector<const Bucket*> kept;
  for (const auto& b : buckets) {
    if (b.N.contains(top)) {
      out.lower_class_tuples += b.multiplicity;
      continue;
    }
    quotients.push_back(quotient_by(F, b.N).first);
    kept.push_back(&b);
  }
  const std::vector<int> cls = isomorphism_classes(quotients);
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    if (cls[i] == static_cast<int>(out.classes.size())) {
      std::vector<GroupElement> rel;
      for (int j : kept[i]->first) rel.push_back(X[j]);
      out.classes.push_back(CensusClass{quotients[i], std::move(rel), 0, quotients[i].ngens()});
    }
    out.classes[cls[i]].tuple_multiplicity += kept[i]->multiplicity;
  }
  return out;
}

inline AncestorCensus relator_census(int p, int g, int c, int slack) {
  MemoryTowerSource towers;
  return relator_census(p, g, c, slack, towers);
}

// Normal subgroups of G contained in the normal subgroup U, in order of
// discovery from the trivial subgroup.
inline std::vector<Subgroup> normal_subgroups_within(const PcPresentation& G, const Subgroup& U) {
  std::vector<GroupElement> elems;
  U.for_each_element([&](const GroupElement& x) { elems.push_back(x); });
  std::vector<Subgroup> out{trivial_subgroup(G)};
  std::unordered_set<Subgroup, SubgroupHash> seen{out[0]};
  for (std::size_t q = 0; q < out.size(); ++q) {
    for (const auto& x : elems) {
      if (out[q].contains(x)) continue;
      std::vector<GroupElement> gens = out[q].igs();
      gens.push_back(x);
      Subgroup M = subgroup_close(G, gens, Closure::Normal);
      if (seen.insert(M).second) out.push_back(std::move(M));
    }
  }
  return out;
}

struct AuditEntry {
  Subgroup N;
  bool condition_i = false;   // normal closure of <= h elements of X_c
  bool condition_ii = false;  // sigma(N) = N, dim N/N* <= h, inversion on N/N*
  int dimension = 0;          // dim N/N*
};

struct AuditReport {
  int p = 0, g = 0, c = 0, h = 0;
  std::size_t normal_subgroups = 0;  // inside Phi(F_c)
  std::size_t sigma_invariant = 0;
  std::vector<AuditEntry> discrepancies;
  std::vector<AuditEntry> outside_frattini;  // (ii) holds but N is not inside Phi(F_c)
  bool outside_scanned = false;
};

inline constexpr int kDefaultAuditCap = 6;
inline constexpr int kDefaultAuditOutsideCap = 8;

// Compares, for every sigma-invariant normal N inside Phi(F_c), the relator
// description (i) with the kernel conditions (ii).
inline AuditReport relator_kernel_audit(int p, int g, int c, int h, TowerSource& towers,
                                           int cap_exponent = kDefaultAuditCap) {
  const PcPresentation F = towers.level(p, g, c);
  const Subgroup phi = frattini(F);
  if (phi.order_exponent() > cap_exponent)
    throw CapExceeded("audit: |Phi(F_c)| = p^" + std::to_string(phi.order_exponent()) + " exceeds the cap");
  const SigmaAction sigma = canonical_sigma(F);
  const std::vector<GroupElement> X = inverted_set(sigma, true).members();
  AuditReport report;
  report.p = p;
  report.g = g;
  report.c = c;
  report.h = h;

  auto condition_ii = [&](const Subgroup& N, int& dim) {
    dim = star_dimension(F, N);
    return dim <= h && sigma_inverts_quotient(F, sigma, N);
  };
  auto condition_i = [&](const Subgroup& N) {
    std::vector<GroupElement> inside;
    for (const auto& x : X)
      if (N.contains(x)) inside.push_back(x);
    if (h <= 0) return N.is_trivial();
    std::vector<int> idx(static_cast<std::size_t>(h), 0);
    std::function<bool(int, int)> rec = [&](int pos, int start) {
      if (pos == h) {
        std::vector<GroupElement> rel;
        for (int i : idx) rel.push_back(inside[i]);
        return subgroup_close(F, rel, Closure::Normal) == N;
      }
      for (int i = start; i < static_cast<int>(inside.size()); ++i) {
        idx[pos] = i;
        if (rec(pos + 1, i)) return true;
      }
      return false;
    };
    return rec(0, 0);
  };

  const auto inside = normal_subgroups_within(F, phi);
  report.normal_subgroups = inside.size();
  for (const auto& N : inside) {
    if (!sigma_invariant(sigma, N)) continue;
    ++report.sigma_invariant;
    AuditEntry e{N};
    e.condition_ii = condition_ii(N, e.dimension);
    e.condition_i = condition_i(N);
    if (e.condition_i != e.condition_ii) report.discrepancies.push_back(e);
  }

  if (F.ngens() <= kDefaultAuditOutsideCap) {
    report.outside_scanned = true;
    for (const auto& N : normal_subgroups_within(F, whole_group(F))) {
      if (phi.contains(N) || !sigma_invariant(sigma, N)) continue;
      AuditEntry e{N};
      e.condition_ii = condition_ii(N, e.dimension);
      if (e.condition_ii) report.outside_frattini.push_back(e);
    }
  }
  return report;
}

inline AuditReport relator_kernel_audit(int p, int g, int c, int h) {
  MemoryTowerSource towers;
  return relator_kernel_audit(p, g, c, h, towers);
}

}  // namespace ssg

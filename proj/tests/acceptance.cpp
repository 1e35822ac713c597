// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit status
// if any criterion fails.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssg/ssg.hpp"

namespace {

using namespace ssg;

MemoryTowerSource towers;

GroupElement random_element(const PcPresentation& G, std::mt19937_64& r) {
  std::uniform_int_distribution<int> d(0, G.prime() - 1);
  std::vector<int> e(static_cast<std::size_t>(G.ngens()));
  for (auto& x : e) x = d(r);
  return GroupElement(std::move(e));
}

// Each check appends to detail and returns true on success.
using Check = std::function<bool(std::ostringstream& detail)>;

bool table_one(std::ostringstream& d) {
  struct Row {
    int g, c, expected;
  };
  bool ok = true;
  for (const Row& r : {Row{2, 2, 5}, {2, 3, 10}, {2, 4, 18}, {2, 5, 32}, {3, 2, 9}, {3, 3, 23}}) {
    const int got = towers.level(3, r.g, r.c).ngens();
    d << " (" << r.g << "," << r.c << ")=" << got;
    ok = ok && got == r.expected;
  }
  return ok;
}

bool inverted_sets(std::ostringstream& d) {
  struct Row {
    int g, c;
    std::uint64_t expected;
  };
  bool ok = true;
  for (const Row& r : {Row{2, 2, 9}, {2, 3, 729}, {3, 2, 27}}) {
    const std::uint64_t got = inverted_set(canonical_sigma(towers.level(3, r.g, r.c)), true).count();
    d << " |X_" << r.c << "(g=" << r.g << ")|=" << got;
    ok = ok && got == r.expected;
  }
  const std::uint64_t x4 = inverted_set(canonical_sigma(towers.level(3, 2, 4)), true).layered_count();
  d << " |X_4(g=2)|=" << x4;
  return ok && x4 == 59049;
}

bool census_base(std::ostringstream& d) {
  const AncestorCensus c = relator_census(3, 2, 2, 0, towers);
  d << " " << c.classes.size() << " classes from " << c.total_tuples << " tuples";
  return c.classes.size() == 3 && c.total_tuples == 81;
}

const std::vector<PcPresentation>& descendants() {
  static const std::vector<PcPresentation> d = immediate_descendants(elementary_abelian(3, 2), towers);
  return d;
}

ClassificationVerdict verdict(const PcPresentation& P) {
  ClassificationConfig cfg;
  cfg.p = 3;
  cfg.g = 2;
  return classify(P, cfg, towers);
}

bool descendant_filters(std::ostringstream& d) {
  int ancestors = 0, pseudo = 0, pseudo_named = 0;
  for (const auto& P : descendants()) {
    const Outcome o = verdict(P).outcome;
    ancestors += o == Outcome::Ancestor;
    if (o == Outcome::PseudoAncestor) {
      ++pseudo;
      const auto inv = abelian_invariants(P);
      pseudo_named += inv == std::vector<long long>{3, 9} || inv == std::vector<long long>{9, 9};
    }
  }
  d << " " << descendants().size() << " classes, " << ancestors + pseudo << " pass (" << ancestors << " ancestor, "
    << pseudo << " pseudo)";
  return descendants().size() == 7 && ancestors == 3 && pseudo == 2 && pseudo_named == 2;
}

bool audit(std::ostringstream& d) {
  const AuditReport r = relator_kernel_audit(3, 2, 2, 2, towers);
  d << " " << r.discrepancies.size() << " discrepancies over " << r.normal_subgroups << " normal subgroups";
  return r.discrepancies.empty();
}

bool census_agrees(std::ostringstream& d) {
  const AncestorCensus c = relator_census(3, 2, 2, 0, towers);
  int agree = 0;
  for (const auto& P : descendants()) {
    const bool ancestor = verdict(P).outcome == Outcome::Ancestor;
    const bool in_census = std::any_of(c.classes.begin(), c.classes.end(),
                                       [&](const CensusClass& k) { return are_isomorphic(k.representative, P); });
    agree += ancestor == in_census;
  }
  d << " agree on " << agree << " of " << descendants().size();
  return agree == 7 && descendants().size() == 7;
}

bool h_invariant(std::ostringstream& d) {
  const PcPresentation F = towers.level(3, 2, 2);
  std::size_t kernels = 0;
  bool ok = descendants().size() == 7;
  for (const auto& P : descendants()) {
    const int h = compute_h(F, P);
    for (const auto& N : epimorphism_kernels(F, P)) {
      ++kernels;
      ok = ok && star_dimension(F, N) == h;
    }
  }
  d << " " << kernels << " kernels checked";
  return ok;
}

bool engine(std::ostringstream& d) {
  bool ok = true;
  for (auto [g, c] : {std::pair{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2}, {3, 3}}) {
    const PcPresentation F = towers.level(3, g, c);
    ok = ok && verify_consistency(F).empty();
    const SigmaAction s = canonical_sigma(F);
    ok = ok && is_involution(s.map) && inverts_abelianization(s.map);
  }
  d << " consistency and sigma " << (ok ? "ok" : "failed") << ";";

  std::mt19937_64 r(0x5eed5eedULL);
  const PcPresentation F2 = towers.level(3, 2, 2);
  std::size_t bad = 0;
  for (int t = 0; t < 1'000'000; ++t) {
    const GroupElement x = random_element(F2, r), y = random_element(F2, r), z = random_element(F2, r);
    bad += F2.multiply(F2.multiply(x, y), z) != F2.multiply(x, F2.multiply(y, z));
  }
  d << " associativity failures " << bad << "/1000000;";
  ok = ok && bad == 0;

  const PcPresentation F = towers.level(3, 2, 3);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<GroupElement> gens{random_element(F, r), random_element(F, r)};
    const Subgroup S = subgroup_close(F, gens);
    const Subgroup N = subgroup_close(F, gens, Closure::Normal);
    std::vector<GroupElement> shuffled = gens;
    shuffled.push_back(F.multiply(gens[0], gens[1]));
    std::shuffle(shuffled.begin(), shuffled.end(), r);
    const GroupElement y = random_element(F, r);
    std::vector<GroupElement> conj;
    for (const auto& x : shuffled) conj.push_back(F.conjugate(x, y));
    mismatches += !(subgroup_close(F, shuffled).igs() == S.igs());
    mismatches += !(subgroup_close(F, conj, Closure::Normal).igs() == N.igs());
  }
  d << " canonicity mismatches " << mismatches << "/2000";
  return ok && mismatches == 0;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Check>> criteria{
      {"free quotient orders", table_one},
      {"inverted set sizes", inverted_sets},
      {"relator census p=3 g=2 c=2", census_base},
      {"descendants of C3xC3", descendant_filters},
      {"audit p=3 g=2 c=2 h=2", audit},
      {"classify and census agree", census_agrees},
      {"h invariant across kernels", h_invariant},
      {"engine properties", engine},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = criteria[i].second(detail);
    } catch (const std::exception& e) {
      detail << " exception: " << e.what();
    }
    failures += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ":" << detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

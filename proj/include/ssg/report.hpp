#pragma once

// JSON and text renderings of verdicts, censuses, audits and descendant
// trees, plus the run manifest written by the command-line tool.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ssg/ancestor.hpp"
#include "ssg/descendants.hpp"
#include "ssg/isomorphism.hpp"
#include "ssg/text_format.hpp"

namespace ssg {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

inline Json element_json(const GroupElement& x) { return Json(x.exponents()); }

inline std::string describe(const PcPresentation& G) {
  std::string s = std::to_string(G.prime()) + "^" + std::to_string(G.ngens()) + ", class " +
                  std::to_string(p_class(G));
  if (auto inv = abelian_invariants(G); inv && !inv->empty()) {
    s += ", ";
    for (std::size_t i = 0; i < inv->size(); ++i) s += (i ? "xC" : "C") + std::to_string((*inv)[i]);
  }
  return s;
}

inline Json verdict_json(const PcPresentation& P, const ClassificationVerdict& v) {
  Json j;
  j["group"] = render(P);
  j["outcome"] = outcome_name(v.outcome);
  j["h"] = v.h;
  j["g"] = v.g;
  j["p_class"] = v.p_class;
  j["slack"] = v.slack;
  if (v.witness_relators) {
    Json rel = Json::array();
    for (const auto& r : *v.witness_relators) rel.push_back(element_json(r));
    j["witness_relators"] = rel;
  } else {
    j["witness_relators"] = nullptr;
  }
  j["kernels_examined"] = v.kernels_examined;
  return j;
}

inline Json census_json(const AncestorCensus& c) {
  Json j;
  j["parameters"] = {{"p", c.p}, {"g", c.g}, {"c", c.c}, {"slack", c.slack}};
  j["inverted_set_size"] = c.inverted_set_size;
  j["total_tuples"] = c.total_tuples;
  j["lower_class_tuples"] = c.lower_class_tuples;
  j["distinct_kernels"] = c.distinct_kernels;
  Json classes = Json::array();
  for (const auto& k : c.classes) {
    Json e;
    e["representative"] = render(k.representative);
    e["tuple_multiplicity"] = k.tuple_multiplicity;
    e["order_exponent"] = k.order_exponent;
    classes.push_back(e);
  }
  j["classes"] = classes;
  return j;
}

inline Json audit_json(const AuditReport& r) {
  Json j;
  j["parameters"] = {{"p", r.p}, {"g", r.g}, {"c", r.c}, {"h", r.h}};
  j["normal_subgroups_in_frattini"] = r.normal_subgroups;
  j["sigma_invariant"] = r.sigma_invariant;
  auto entries = [](const std::vector<AuditEntry>& v) {
    Json a = Json::array();
    for (const auto& e : v) {
      Json x;
      Json igs = Json::array();
      for (const auto& g : e.N.igs()) igs.push_back(element_json(g));
      x["igs"] = igs;
      x["condition_i"] = e.condition_i;
      x["condition_ii"] = e.condition_ii;
      x["dimension"] = e.dimension;
      a.push_back(x);
    }
    return a;
  };
  j["discrepancies"] = entries(r.discrepancies);
  j["outside_frattini_scanned"] = r.outside_scanned;
  j["outside_frattini_log"] = entries(r.outside_frattini);
  return j;
}

inline Json tree_json(const DescendantNode& n) {
  Json j;
  j["group"] = render(n.group);
  j["description"] = describe(n.group);
  j["p_class"] = n.p_class;
  j["verdict"] = n.verdict ? Json(outcome_name(n.verdict->outcome)) : Json(nullptr);
  j["h"] = n.verdict ? Json(n.verdict->h) : Json(nullptr);
  j["pruned_reason"] = pruned_reason_name(n.pruned_reason);
  j["truncated"] = n.truncated;
  if (n.truncated) j["truncation_note"] = n.truncation_note;
  Json kids = Json::array();
  for (const auto& c : n.children) kids.push_back(tree_json(c));
  j["children"] = kids;
  return j;
}

inline void tree_text(std::ostream& os, const DescendantNode& n, int indent = 0) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << describe(n.group) << ": "
     << (n.verdict ? outcome_name(n.verdict->outcome) : "unclassified");
  if (n.verdict) os << " (h=" << n.verdict->h << ")";
  if (n.pruned_reason != PrunedReason::None) os << " [pruned: " << pruned_reason_name(n.pruned_reason) << "]";
  if (n.truncated) os << " [truncated: " << n.truncation_note << "]";
  os << '\n';
  for (const auto& c : n.children) tree_text(os, c, indent + 1);
}

// Graphviz description with one edge per line; nodes are numbered in
// preorder.
inline void tree_dot(std::ostream& os, const DescendantNode& root) {
  os << "digraph descendants {\n";
  int next = 0;
  std::vector<std::string> edges;
  std::function<int(const DescendantNode&)> visit = [&](const DescendantNode& n) {
    const int id = next++;
    os << "  n" << id << " [label=\"" << describe(n.group) << "\\n"
       << (n.verdict ? outcome_name(n.verdict->outcome) : "unclassified") << "\"];\n";
    for (const auto& c : n.children) {
      const int cid = visit(c);
      edges.push_back("  n" + std::to_string(id) + " -> n" + std::to_string(cid) + ";");
    }
    return id;
  };
  visit(root);
  for (const auto& e : edges) os << e << '\n';
  os << "}\n";
}

// FNV-1a, 64-bit, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::string version = kVersion;
  std::map<std::string, std::string> input_hashes;
  double wall_time_seconds = 0;
  std::string output_hash;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["version"] = version;
    j["input_hashes"] = input_hashes;
    j["wall_time_seconds"] = wall_time_seconds;
    j["output_hash"] = output_hash;
    return j;
  }
};

}  // namespace ssg

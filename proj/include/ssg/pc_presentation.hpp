#pragma once

// Consistent power-commutator presentations of finite p-groups and
// arithmetic in normal form.
//
// Generators are a_0 .. a_{n-1} (0-based here; the text format is 1-based).
// Every element has the unique normal form a_0^{e_0} ... a_{n-1}^{e_{n-1}}
// with 0 <= e_i < p. Relations:
//   a_i^p      = normal word over a_{i+1} .. a_{n-1}
//   [a_j, a_i] = normal word over a_{j+1} .. a_{n-1}   (j > i)
// with [x, y] = x^-1 y^-1 x y.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/gfp.hpp"

namespace ssg {

// (generator index, integer exponent); exponents may be negative or >= p.
using Word = std::vector<std::pair<int, int>>;

class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<int> exponents) : e_(std::move(exponents)) {}

  static GroupElement identity(int n) { return GroupElement(std::vector<int>(n, 0)); }
  static GroupElement unit(int n, int i, int exponent = 1) {
    std::vector<int> e(n, 0);
    e[i] = exponent;
    return GroupElement(std::move(e));
  }

  const std::vector<int>& exponents() const { return e_; }
  std::vector<int>& mutable_exponents() { return e_; }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(e_.size()); }

  bool is_identity() const {
    return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; });
  }
  // Index of the first nonzero exponent; size() for the identity.
  int depth() const {
    int d = 0;
    while (d < size() && e_[d] == 0) ++d;
    return d;
  }

  auto operator<=>(const GroupElement&) const = default;
  bool operator==(const GroupElement&) const = default;

 private:
  std::vector<int> e_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : g.exponents()) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// How a generator of weight >= 2 arose. The defining relation has right-hand
// side u * a_k with u a normal word over generators below k.
struct Definition {
  enum class Kind { Power, Commutator };
  Kind kind = Kind::Power;
  int j = 0;   // a_j^p, or [a_j, a_i]
  int i = -1;  // unused for Power

  static Definition power(int j) { return {Kind::Power, j, -1}; }
  static Definition commutator(int j, int i) { return {Kind::Commutator, j, i}; }
  bool operator==(const Definition&) const = default;
};

// Raw relation data. commutators[j][i] holds [a_j, a_i] for i < j.
struct PcRelations {
  int prime = 3;
  std::vector<int> weights;
  std::vector<GroupElement> powers;
  std::vector<std::vector<GroupElement>> commutators;
  std::vector<std::optional<Definition>> definitions;

  int ngens() const { return static_cast<int>(weights.size()); }

  // All relations trivial (elementary abelian), no definitions.
  static PcRelations trivial(int prime, std::vector<int> weights) {
    PcRelations r;
    r.prime = prime;
    const int n = static_cast<int>(weights.size());
    r.weights = std::move(weights);
    r.powers.assign(n, GroupElement::identity(n));
    r.commutators.resize(n);
    for (int j = 0; j < n; ++j) r.commutators[j].assign(j, GroupElement::identity(n));
    r.definitions.assign(n, std::nullopt);
    return r;
  }

  bool operator==(const PcRelations&) const = default;
};

namespace detail {

inline Word sparse(const GroupElement& g) {
  Word w;
  for (int k = 0; k < g.size(); ++k)
    if (g[k] != 0) w.emplace_back(k, g[k]);
  return w;
}

struct PcData {
  PcRelations rel;
  std::vector<Word> power_words;
  // conj_words[k][g] = a_k^{a_g} = a_k [a_k, a_g] for g < k
  std::vector<std::vector<Word>> conj_words;
  // noncommuting[g] = generators k > g with [a_k, a_g] != 1
  std::vector<std::vector<int>> noncommuting;
  std::vector<std::vector<int>> noncommuting_rev;  // descending order
  std::vector<GroupElement> generator_inverses;
};

}  // namespace detail

class PcPresentation {
 public:
  // Trivial group over p = 3.
  PcPresentation() : PcPresentation(PcRelations::trivial(3, {})) {}

  explicit PcPresentation(PcRelations rel) {
    validate(rel);
    auto d = std::make_shared<detail::PcData>();
    d->rel = std::move(rel);
    build_tables(*d);
    d_ = d;
    d->generator_inverses = compute_generator_inverses();
  }

  int prime() const { return d_->rel.prime; }
  int ngens() const { return d_->rel.ngens(); }
  const std::vector<int>& weights() const { return d_->rel.weights; }
  int weight(int i) const { return d_->rel.weights[static_cast<std::size_t>(i)]; }
  const PcRelations& relations() const { return d_->rel; }

  const GroupElement& power_rhs(int i) const { return d_->rel.powers[static_cast<std::size_t>(i)]; }
  const GroupElement& commutator_rhs(int j, int i) const {
    return d_->rel.commutators[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  const std::optional<Definition>& definition(int k) const {
    return d_->rel.definitions[static_cast<std::size_t>(k)];
  }

  // Generators without a definition tag, in index order.
  std::vector<int> undefined_generators() const {
    std::vector<int> out;
    for (int k = 0; k < ngens(); ++k)
      if (!definition(k)) out.push_back(k);
    return out;
  }

  // Every generator of weight >= 2 carries a definition and weight-1
  // generators carry none.
  bool has_complete_definitions() const {
    for (int k = 0; k < ngens(); ++k)
      if ((weight(k) >= 2) != definition(k).has_value()) return false;
    return true;
  }

  std::uint64_t order_exponent() const { return static_cast<std::uint64_t>(ngens()); }

  GroupElement identity() const { return GroupElement::identity(ngens()); }
  GroupElement generator(int i, int exponent = 1) const {
    check_index(i);
    return GroupElement::unit(ngens(), i, gfp::reduce(exponent, prime()));
  }

  void check(const GroupElement& g) const {
    if (g.size() != ngens())
      throw InputError("element has " + std::to_string(g.size()) + " exponents, presentation has " +
                       std::to_string(ngens()) + " generators");
    for (int x : g.exponents())
      if (x < 0 || x >= prime()) throw InputError("exponent out of range [0, p)");
  }

  // Normal form of an arbitrary word.
  GroupElement collect(const Word& w) const {
    for (auto [g, e] : w) check_index(g);
    std::vector<int> r(static_cast<std::size_t>(ngens()), 0);
    std::vector<std::pair<int, int>> stack;
    for (auto [g, e] : w) {
      if (e >= 0) {
        int rem = e;
        while (rem > 0) {
          int chunk = std::min(rem, prime() - 1);
          stack.assign(1, {g, chunk});
          run(r, stack);
          rem -= chunk;
        }
      } else {
        const Word inv = detail::sparse(d_->generator_inverses[static_cast<std::size_t>(g)]);
        for (int c = 0; c < -e; ++c) {
          stack.assign(inv.rbegin(), inv.rend());
          run(r, stack);
        }
      }
    }
    return GroupElement(std::move(r));
  }

  GroupElement multiply(const GroupElement& x, const GroupElement& y) const {
    if (x.size() != ngens() || y.size() != ngens()) throw InputError("multiply: element of the wrong length");
    std::vector<int> r = x.exponents();
    std::vector<std::pair<int, int>> stack;
    stack.reserve(64);
    for (int k = ngens() - 1; k >= 0; --k)
      if (y[k] != 0) stack.emplace_back(k, y[k]);
    run(r, stack);
    return GroupElement(std::move(r));
  }

  GroupElement inverse(const GroupElement& x) const {
    // Build y = a_0^{f_0} a_1^{f_1} ... so that x*y is the identity.
    GroupElement z = x;
    std::vector<int> y(static_cast<std::size_t>(ngens()), 0);
    std::vector<std::pair<int, int>> stack;
    for (int k = 0; k < ngens(); ++k) {
      if (z[k] == 0) continue;
      int f = prime() - z[k];
      y[static_cast<std::size_t>(k)] = f;
      stack.assign(1, {k, f});
      run(z.mutable_exponents(), stack);
    }
    return GroupElement(std::move(y));
  }

  GroupElement power(const GroupElement& x, long long m) const {
    GroupElement base = m < 0 ? inverse(x) : x;
    unsigned long long e = m < 0 ? static_cast<unsigned long long>(-m) : static_cast<unsigned long long>(m);
    GroupElement result = identity();
    while (e > 0) {
      if (e & 1ull) result = multiply(result, base);
      e >>= 1;
      if (e > 0) base = multiply(base, base);
    }
    return result;
  }

  // [x, y] = x^-1 y^-1 x y
  GroupElement commutator(const GroupElement& x, const GroupElement& y) const {
    return multiply(inverse(multiply(y, x)), multiply(x, y));
  }

  // x^y = y^-1 x y
  GroupElement conjugate(const GroupElement& x, const GroupElement& y) const {
    return multiply(inverse(y), multiply(x, y));
  }

  Word to_word(const GroupElement& g) const { return detail::sparse(g); }

  // Structural equality of relations.
  friend bool operator==(const PcPresentation& a, const PcPresentation& b) {
    return a.d_ == b.d_ || a.d_->rel == b.d_->rel;
  }

  bool shares_data_with(const PcPresentation& other) const { return d_ == other.d_; }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= ngens())
      throw InputError("generator index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(ngens()) + ")");
  }

  static void validate(const PcRelations& rel) {
    const int n = rel.ngens();
    if (!gfp::is_prime(rel.prime) || rel.prime == 2 || rel.prime > 32767)
      throw InputError("prime must be an odd prime below 2^15, got " + std::to_string(rel.prime));
    if (static_cast<int>(rel.powers.size()) != n || static_cast<int>(rel.commutators.size()) != n ||
        static_cast<int>(rel.definitions.size()) != n)
      throw InputError("relation tables do not match generator count");
    for (int i = 0; i < n; ++i) {
      if (rel.weights[i] < 1) throw InputError("weights must be >= 1");
      if (i > 0 && rel.weights[i] < rel.weights[i - 1]) throw InputError("weights must be non-decreasing");
    }
    auto check_rhs = [&](const GroupElement& g, int above, const std::string& what) {
      if (g.size() != n) throw InputError(what + ": wrong length");
      for (int k = 0; k < n; ++k) {
        if (g[k] < 0 || g[k] >= rel.prime) throw InputError(what + ": exponent out of range");
        if (g[k] != 0 && k <= above)
          throw InputError(what + ": references generator " + std::to_string(k + 1) +
                           " not above " + std::to_string(above + 1));
      }
    };
    for (int i = 0; i < n; ++i) {
      check_rhs(rel.powers[i], i, "power relation " + std::to_string(i + 1));
      if (static_cast<int>(rel.commutators[i].size()) != i)
        throw InputError("commutator table row has wrong length");
      for (int k = 0; k < i; ++k)
        check_rhs(rel.commutators[i][k], i,
                  "commutator relation " + std::to_string(i + 1) + " " + std::to_string(k + 1));
    }
    for (int k = 0; k < n; ++k) {
      const auto& def = rel.definitions[k];
      if (!def) continue;
      const GroupElement* rhs = nullptr;
      if (def->kind == Definition::Kind::Power) {
        if (def->j < 0 || def->j >= k) throw InputError("definition of " + std::to_string(k + 1) + " is malformed");
        rhs = &rel.powers[def->j];
      } else {
        if (def->i < 0 || def->j <= def->i || def->j >= k)
          throw InputError("definition of " + std::to_string(k + 1) + " is malformed");
        rhs = &rel.commutators[def->j][def->i];
      }
      bool ok = (*rhs)[k] == 1;
      for (int t = k + 1; t < n && ok; ++t) ok = (*rhs)[t] == 0;
      if (!ok)
        throw InputError("definition of generator " + std::to_string(k + 1) +
                         ": defining relation must end in exactly one copy of it");
    }
  }

  static void build_tables(detail::PcData& d) {
    const int n = d.rel.ngens();
    d.power_words.resize(n);
    d.conj_words.resize(n);
    d.noncommuting.assign(n, {});
    d.noncommuting_rev.assign(n, {});
    for (int i = 0; i < n; ++i) d.power_words[i] = detail::sparse(d.rel.powers[i]);
    for (int k = 0; k < n; ++k) {
      d.conj_words[k].resize(k);
      for (int g = 0; g < k; ++g) {
        Word w{{k, 1}};
        const auto& c = d.rel.commutators[k][g];
        for (int t = k + 1; t < n; ++t)
          if (c[t] != 0) w.emplace_back(t, c[t]);
        if (w.size() > 1) d.noncommuting[g].push_back(k);
        d.conj_words[k][g] = std::move(w);
      }
    }
    for (int g = 0; g < n; ++g)
      d.noncommuting_rev[g].assign(d.noncommuting[g].rbegin(), d.noncommuting[g].rend());
  }

  std::vector<GroupElement> compute_generator_inverses() const {
    std::vector<GroupElement> out;
    for (int i = 0; i < ngens(); ++i) out.push_back(inverse(GroupElement::unit(ngens(), i)));
    return out;
  }

  // Multiplies r on the right by the pending (generator, exponent) pairs on
  // the stack (top = back), collecting from the left.
  void run(std::vector<int>& r, std::vector<std::pair<int, int>>& stack) const {
    const detail::PcData& d = *d_;
    const int n = d.rel.ngens();
    const int p = d.rel.prime;
    auto push_reversed = [&stack](const Word& w) {
      for (auto it = w.rbegin(); it != w.rend(); ++it) stack.push_back(*it);
    };
    while (!stack.empty()) {
      auto [g, e] = stack.back();
      stack.pop_back();
      if (e == 0) continue;
      bool clean = true;
      for (int k : d.noncommuting[g])
        if (r[k] != 0) {
          clean = false;
          break;
        }
      if (clean) {
        int s = r[g] + e;
        if (s < p) {
          r[g] = s;
          continue;
        }
        r[g] = s - p;
        if (d.power_words[g].empty()) continue;
        // a_g^p = w commutes with a_g but not necessarily with the suffix
        for (int k = n - 1; k > g; --k) {
          if (r[k] != 0) {
            stack.emplace_back(k, r[k]);
            r[k] = 0;
          }
        }
        push_reversed(d.power_words[g]);
        continue;
      }
      if (e > 1) stack.emplace_back(g, e - 1);
      // x a_g = prefix a_g^{r_g + 1} suffix^{a_g}
      for (int k = n - 1; k > g; --k) {
        int s = r[k];
        if (s == 0) continue;
        r[k] = 0;
        const Word& cw = d.conj_words[k][g];
        if (cw.size() == 1) {
          stack.emplace_back(k, s);
        } else {
          for (int c = 0; c < s; ++c) push_reversed(cw);
        }
      }
      if (++r[g] == p) {
        r[g] = 0;
        push_reversed(d.power_words[g]);
      }
    }
  }

  std::shared_ptr<const detail::PcData> d_;
};

// Elementary abelian group of rank n (all weights 1, all relations trivial).
inline PcPresentation elementary_abelian(int prime, int n) {
  return PcPresentation(PcRelations::trivial(prime, std::vector<int>(static_cast<std::size_t>(n), 1)));
}

}  // namespace ssg

#pragma once

// Homomorphisms between pc-groups given by images of the pc-generators.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/series.hpp"
#include "ssg/subgroup.hpp"

namespace ssg {

enum class ImageKind {
  PcGenerators,         // one image per pc-generator of the domain
  UndefinedGenerators,  // one image per generator without a definition tag
};

// Image of a normal word given the images of the pc-generators it uses.
inline GroupElement evaluate(const PcPresentation& cod, std::span<const GroupElement> images,
                             const GroupElement& x) {
  GroupElement r = cod.identity();
  for (int k = 0; k < x.size(); ++k)
    if (x[k] != 0) r = cod.multiply(r, cod.power(images[static_cast<std::size_t>(k)], x[k]));
  return r;
}

// Extends images of the undefined generators of dom to all pc-generators via
// the definition tags: a_k is defined by a relation with right-hand side
// u * a_k, so img(a_k) = img(u)^-1 img(lhs).
inline std::vector<GroupElement> derive_images(const PcPresentation& dom, const PcPresentation& cod,
                                               std::span<const GroupElement> undefined_images) {
  std::vector<GroupElement> img;
  img.reserve(static_cast<std::size_t>(dom.ngens()));
  std::size_t next = 0;
  for (int k = 0; k < dom.ngens(); ++k) {
    const auto& def = dom.definition(k);
    if (!def) {
      if (next >= undefined_images.size()) throw InputError("too few generator images");
      img.push_back(undefined_images[next++]);
      continue;
    }
    GroupElement lhs;
    GroupElement rhs;
    if (def->kind == Definition::Kind::Power) {
      lhs = cod.power(img[static_cast<std::size_t>(def->j)], dom.prime());
      rhs = dom.power_rhs(def->j);
    } else {
      lhs = cod.commutator(img[static_cast<std::size_t>(def->j)], img[static_cast<std::size_t>(def->i)]);
      rhs = dom.commutator_rhs(def->j, def->i);
    }
    rhs.mutable_exponents()[static_cast<std::size_t>(k)] = 0;
    GroupElement u = evaluate(cod, img, rhs);
    img.push_back(cod.multiply(cod.inverse(u), lhs));
  }
  if (next != undefined_images.size()) throw InputError("too many generator images");
  return img;
}

// True iff the images satisfy every power and commutator relation of dom.
inline bool respects_relations(const PcPresentation& dom, const PcPresentation& cod,
                               std::span<const GroupElement> images) {
  const int p = dom.prime();
  for (int i = 0; i < dom.ngens(); ++i)
    if (cod.power(images[static_cast<std::size_t>(i)], p) != evaluate(cod, images, dom.power_rhs(i)))
      return false;
  for (int j = 0; j < dom.ngens(); ++j)
    for (int i = 0; i < j; ++i)
      if (cod.commutator(images[static_cast<std::size_t>(j)], images[static_cast<std::size_t>(i)]) !=
          evaluate(cod, images, dom.commutator_rhs(j, i)))
        return false;
  return true;
}

class Morphism {
 public:
  Morphism(PcPresentation domain, PcPresentation codomain, std::vector<GroupElement> images, bool valid,
           bool surjective)
      : dom_(std::move(domain)),
        cod_(std::move(codomain)),
        images_(std::move(images)),
        valid_(valid),
        surjective_(surjective) {}

  const PcPresentation& domain() const { return dom_; }
  const PcPresentation& codomain() const { return cod_; }
  // Image of each pc-generator of the domain.
  const std::vector<GroupElement>& images() const { return images_; }
  bool valid() const { return valid_; }
  bool surjective() const { return surjective_; }

  GroupElement apply(const GroupElement& x) const {
    dom_.check(x);
    return evaluate(cod_, images_, x);
  }

 private:
  PcPresentation dom_;
  PcPresentation cod_;
  std::vector<GroupElement> images_;
  bool valid_;
  bool surjective_;
};

inline Morphism morphism_from_images(const PcPresentation& dom, const PcPresentation& cod,
                                     std::vector<GroupElement> images,
                                     ImageKind kind = ImageKind::PcGenerators) {
  if (dom.prime() != cod.prime()) throw InputError("morphism between groups of different primes");
  for (const auto& g : images) cod.check(g);
  if (kind == ImageKind::UndefinedGenerators) {
    if (static_cast<int>(images.size()) != static_cast<int>(dom.undefined_generators().size()))
      throw InputError("expected " + std::to_string(dom.undefined_generators().size()) +
                       " images, got " + std::to_string(images.size()));
    images = derive_images(dom, cod, images);
  } else if (static_cast<int>(images.size()) != dom.ngens()) {
    throw InputError("expected " + std::to_string(dom.ngens()) + " images, got " +
                     std::to_string(images.size()));
  }
  bool valid = respects_relations(dom, cod, images);
  bool surjective = GeneratingTest(cod).generates(images);
  return Morphism(dom, cod, std::move(images), valid, surjective);
}

inline Morphism identity_morphism(const PcPresentation& G) {
  std::vector<GroupElement> images;
  for (int k = 0; k < G.ngens(); ++k) images.push_back(G.generator(k));
  return Morphism(G, G, std::move(images), true, true);
}

// second after first
inline Morphism compose(const Morphism& second, const Morphism& first) {
  if (!(first.codomain() == second.domain())) throw InputError("compose: codomain/domain mismatch");
  std::vector<GroupElement> images;
  for (const auto& g : first.images()) images.push_back(second.apply(g));
  return Morphism(first.domain(), second.codomain(), std::move(images), first.valid() && second.valid(),
                  first.surjective() && second.surjective());
}

namespace detail {

// Image subgroup igs with tracked preimages. Kernel elements surface as
// preimages of elements that sift to the identity.
class TrackedImageBuilder {
 public:
  TrackedImageBuilder(const PcPresentation& dom, const PcPresentation& cod)
      : dom_(dom), cod_(cod), slot_(static_cast<std::size_t>(cod.ngens())) {}

  void add(GroupElement img, GroupElement pre) {
    pending_.emplace_back(std::move(img), std::move(pre));
    while (!pending_.empty()) {
      auto item = std::move(pending_.back());
      pending_.pop_back();
      insert(std::move(item.first), std::move(item.second));
    }
  }

  const std::vector<GroupElement>& kernel_elements() const { return kernel_; }
  int image_order_exponent() const {
    int c = 0;
    for (const auto& s : slot_) c += s.has_value();
    return c;
  }

 private:
  struct Pair {
    GroupElement img;
    GroupElement pre;
  };

  void insert(GroupElement img, GroupElement pre) {
    const int p = cod_.prime();
    int d = img.depth();
    while (d < cod_.ngens() && slot_[d]) {
      int m = p - img[d];
      img = cod_.multiply(img, cod_.power(slot_[d]->img, m));
      pre = dom_.multiply(pre, dom_.power(slot_[d]->pre, m));
      d = img.depth();
    }
    if (d == cod_.ngens()) {
      if (!pre.is_identity()) kernel_.push_back(std::move(pre));
      return;
    }
    if (img[d] != 1) {
      int e = gfp::inverse(img[d], p);
      img = cod_.power(img, e);
      pre = dom_.power(pre, e);
    }
    for (const auto& s : slot_) {
      if (!s) continue;
      pending_.emplace_back(cod_.commutator(img, s->img), dom_.commutator(pre, s->pre));
    }
    pending_.emplace_back(cod_.power(img, p), dom_.power(pre, p));
    slot_[d] = Pair{std::move(img), std::move(pre)};
  }

  const PcPresentation& dom_;
  const PcPresentation& cod_;
  std::vector<std::optional<Pair>> slot_;
  std::vector<std::pair<GroupElement, GroupElement>> pending_;
  std::vector<GroupElement> kernel_;
};

}  // namespace detail

// Kernel of the homomorphism dom -> cod with the given pc-generator images.
// The images must respect the relations of dom.
inline Subgroup kernel_from_images(const PcPresentation& dom, const PcPresentation& cod,
                                   std::span<const GroupElement> images) {
  detail::TrackedImageBuilder b(dom, cod);
  for (int k = dom.ngens() - 1; k >= 0; --k) b.add(images[static_cast<std::size_t>(k)], dom.generator(k));
  return subgroup_close(dom, b.kernel_elements(), Closure::Normal);
}

inline Subgroup kernel_of(const Morphism& phi) {
  if (!phi.valid()) throw PreconditionError("kernel_of: morphism does not respect the domain relations");
  return kernel_from_images(phi.domain(), phi.codomain(), phi.images());
}

// Order exponent of the image subgroup.
inline int image_order_exponent(const Morphism& phi) {
  detail::TrackedImageBuilder b(phi.domain(), phi.codomain());
  for (int k = phi.domain().ngens() - 1; k >= 0; --k) b.add(phi.images()[static_cast<std::size_t>(k)], phi.domain().generator(k));
  return b.image_order_exponent();
}

// Kernel by running through every element of the domain.
inline Subgroup kernel_by_enumeration(const Morphism& phi, int cap_exponent = 12) {
  if (!phi.valid()) throw PreconditionError("kernel_by_enumeration: invalid morphism");
  if (phi.domain().ngens() > cap_exponent) throw CapExceeded("kernel_by_enumeration: domain too large");
  std::vector<GroupElement> kernel;
  whole_group(phi.domain()).for_each_element([&](const GroupElement& x) {
    if (phi.apply(x).is_identity()) kernel.push_back(x);
  });
  return subgroup_close(phi.domain(), kernel);
}

}  // namespace ssg

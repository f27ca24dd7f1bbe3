#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "dimgroup/element.hpp"
#include "dimgroup/poset.hpp"

namespace dimgroup {

/// Membership in the positive cone: the coefficient at every maximal element
/// of the support is strictly positive. Zero is in the cone.
inline bool in_cone(const GroupElement& x) {
  const Poset& p = x.host();
  const auto terms = x.terms();
  for (const auto& t : terms) {
    const bool maximal = std::none_of(terms.begin(), terms.end(),
                                      [&](const Term& s) { return p.less(t.element, s.element); });
    if (maximal && t.coeff <= 0) return false;
  }
  return true;
}

namespace detail {

/// in_cone on a dense coefficient row: no negative coefficient is maximal in the support.
inline bool in_cone_dense(const Poset& p, std::span<const Coeff> c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i] >= 0) continue;
    bool maximal = true;
    for (std::size_t j = 0; j < n && maximal; ++j)
      maximal = c[j] == 0 || !p.less(ElementId{static_cast<std::uint32_t>(i)}, ElementId{static_cast<std::uint32_t>(j)});
    if (maximal) return false;
  }
  return true;
}

}  // namespace detail

/// x <= y in the order whose positive cone is the one above.
inline bool leq(const GroupElement& x, const GroupElement& y) { return in_cone(y - x); }

/// Sum of the maximal elements.
inline GroupElement canonical_order_unit(const Poset& p) {
  if (p.empty()) throw Error(ErrorCode::EmptyPoset, "the empty poset has no order unit");
  GroupElement u(p);
  for (auto i : p.canonical_cofinal()) u += GroupElement::basis(p, i);
  return u;
}

/// Common upper bound a*u of x and y, with u the canonical order unit and
/// a = max(1, 2 * (|x|_1 + |y|_1)).
inline GroupElement upper_bound(const GroupElement& x, const GroupElement& y) {
  if (!x.host().same_host(y.host())) throw Error(ErrorCode::HostMismatch, "group elements live over different posets");
  const Coeff a = std::max<Coeff>(1, detail::checked_mul(2, detail::checked_add(x.l1_norm(), y.l1_norm())));
  return scale(a, canonical_order_unit(x.host()));
}

struct UnitWitness {
  ElementId element;
  Coeff multiple = 0;  // multiple * unit - element lies in the cone
};

struct OrderUnitCertificate {
  GroupElement unit;
  std::vector<UnitWitness> witnesses;  // one per poset element, declaration order
};

/// Decides whether u is an order unit, returning re-checkable witnesses.
///
/// u is an order unit iff u is in the cone and 2u - i is in the cone for
/// every element i. For a >= 2 the support and sign pattern of a*u - i do
/// not depend on a, and membership is monotone in a, so a = 2 is decisive.
inline std::optional<OrderUnitCertificate> is_order_unit(const GroupElement& u) {
  const Poset& p = u.host();
  if (p.empty()) throw Error(ErrorCode::EmptyPoset, "order units are undefined over the empty poset");
  if (!in_cone(u)) return std::nullopt;
  OrderUnitCertificate cert{u, {}};
  cert.witnesses.reserve(p.size());
  for (auto i : p.elements()) {
    const GroupElement e = GroupElement::basis(p, i);
    if (in_cone(u - e)) {
      cert.witnesses.push_back({i, 1});
    } else if (in_cone(scale(2, u) - e)) {
      cert.witnesses.push_back({i, 2});
    } else {
      return std::nullopt;
    }
  }
  return cert;
}

/// A positive integer a with x <= a*u; max(1, 2 * |x|_1), not minimal.
inline Coeff order_unit_bound(const GroupElement& x, const GroupElement& u) {
  if (!x.host().same_host(u.host())) throw Error(ErrorCode::HostMismatch, "group elements live over different posets");
  if (!is_order_unit(u)) throw Error(ErrorCode::NotOrderUnit, format_expr(u) + " is not an order unit");
  return std::max<Coeff>(1, detail::checked_mul(2, x.l1_norm()));
}

}  // namespace dimgroup

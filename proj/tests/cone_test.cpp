#include <gtest/gtest.h>

#include "dimgroup/cone.hpp"
#include "test_support.hpp"

namespace dimgroup::testing {
namespace {

TEST(InCone, Examples) {
  EXPECT_TRUE(in_cone(GroupElement::zero(chain_ab())));
  EXPECT_TRUE(in_cone(GroupElement::zero(Poset{})));
  const Poset anti = antichain_ab();
  EXPECT_FALSE(in_cone(parse_expr(anti, "b - a")));
  const Poset chain = chain_ab();
  EXPECT_TRUE(in_cone(parse_expr(chain, "b - 3*a")));
  EXPECT_FALSE(in_cone(parse_expr(chain, "a - b")));
  EXPECT_FALSE(in_cone(parse_expr(chain, "-b")));
}

TEST(Leq, Examples) {
  const Poset chain = chain_ab();
  Expr c{chain};
  EXPECT_TRUE(leq(c("a"), c("b")));
  EXPECT_TRUE(leq(c("2*a - b"), c("2*a - b")));
  const Poset anti = antichain_ab();
  EXPECT_FALSE(leq(parse_expr(anti, "a"), parse_expr(anti, "b")));
  EXPECT_THROW(leq(c("a"), parse_expr(anti, "a")), Error);
}

TEST(UpperBound, Examples) {
  const Poset chain = chain_ab();
  Expr c{chain};
  EXPECT_EQ(upper_bound(c("0"), c("0")), c("b"));
  const GroupElement z = upper_bound(c("a"), c("-a"));
  EXPECT_EQ(z, c("4*b"));
  // Membership of 4b - a and 4b + a.
  EXPECT_TRUE(in_cone(c("4*b - a")));
  EXPECT_TRUE(in_cone(c("4*b + a")));
  EXPECT_TRUE(leq(c("a"), z) && leq(c("-a"), z));

  const Poset anti = antichain_ab();
  Expr n{anti};
  const GroupElement w = upper_bound(n("a"), n("b"));
  EXPECT_EQ(w, n("4*a + 4*b"));
  EXPECT_TRUE(in_cone(n("3*a + 4*b")) && in_cone(n("4*a + 3*b")));
  EXPECT_THROW(upper_bound(GroupElement::zero(Poset{}), GroupElement::zero(Poset{})), Error);
}

TEST(OrderUnit, Canonical) {
  EXPECT_EQ(format_expr(canonical_order_unit(chain_ab())), "b");
  EXPECT_EQ(format_expr(canonical_order_unit(antichain_ab())), "a + b");
  EXPECT_EQ(format_expr(canonical_order_unit(make_poset({"a"}))), "a");
  try {
    canonical_order_unit(Poset{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPoset);
  }
}

TEST(OrderUnit, Decision) {
  const Poset vee = make_poset({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}});
  const auto cert = is_order_unit(parse_expr(vee, "c"));
  ASSERT_TRUE(cert.has_value());
  ASSERT_EQ(cert->witnesses.size(), 3u);
  for (const auto& w : cert->witnesses)
    EXPECT_TRUE(in_cone(scale(w.multiple, cert->unit) - GroupElement::basis(vee, w.element)));
  // c is above a and b but c - c = 0 is in the cone too: every witness is 1 here.
  for (const auto& w : cert->witnesses) EXPECT_EQ(w.multiple, 1);

  const Poset anti = antichain_ab();
  EXPECT_FALSE(is_order_unit(parse_expr(anti, "a")).has_value());
  EXPECT_TRUE(is_order_unit(parse_expr(anti, "a + b")).has_value());
  EXPECT_FALSE(is_order_unit(parse_expr(anti, "a - b")).has_value());

  // u = b - a on a < b: u - a = b - 2a is in the cone; u - b = -a is not, but 2u - b = b - 2a is.
  const Poset chain = chain_ab();
  const auto c2 = is_order_unit(parse_expr(chain, "b - a"));
  ASSERT_TRUE(c2.has_value());
  EXPECT_EQ(c2->witnesses[0].multiple, 1);
  EXPECT_EQ(c2->witnesses[1].multiple, 2);
  EXPECT_THROW(is_order_unit(GroupElement::zero(Poset{})), Error);
}

TEST(OrderUnit, Bound) {
  const Poset chain = chain_ab();
  Expr c{chain};
  EXPECT_EQ(order_unit_bound(c("0"), c("b")), 1);
  EXPECT_EQ(order_unit_bound(c("5*a"), c("b")), 10);
  EXPECT_TRUE(in_cone(c("10*b - 5*a")));
  const Poset anti = antichain_ab();
  Expr n{anti};
  EXPECT_EQ(order_unit_bound(n("a + b"), n("a + b")), 4);
  EXPECT_TRUE(in_cone(n("3*a + 3*b")));
  try {
    order_unit_bound(n("a"), n("a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOrderUnit);
  }
}

std::vector<Poset> probe_posets() {
  return {
      make_poset({"a"}),
      antichain_ab(),
      chain_ab(),
      make_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}),
      make_poset({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}),
      make_poset({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}),
      make_poset({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}),
      make_poset({"a", "b", "c", "d"}, {{"a", "c"}, {"b", "d"}, {"a", "d"}}),
  };
}

std::vector<GroupElement> box(const Poset& p, Coeff bound) {
  std::vector<GroupElement> out;
  std::vector<Coeff> c(p.size(), -bound);
  for (;;) {
    out.push_back(GroupElement::from_dense(p, c));
    std::size_t k = c.size();
    while (k > 0 && c[k - 1] == bound) c[--k] = -bound;
    if (k == 0) return out;
    ++c[k - 1];
  }
}

TEST(ConeProperties, MonoidConicalUnperforated) {
  for (const auto& p : probe_posets()) {
    const auto elems = box(p, p.size() <= 3 ? 2 : 1);
    for (const auto& x : elems) {
      if (in_cone(x) && in_cone(-x)) {
        ASSERT_TRUE(x.is_zero()) << format_expr(x);
      }
      for (Coeff n : {1, 2, 3, 7}) ASSERT_EQ(in_cone(scale(n, x)), in_cone(x));
      for (const auto& y : elems) {
        if (in_cone(x) && in_cone(y)) {
          ASSERT_TRUE(in_cone(x + y)) << p.to_string();
        }
        const GroupElement z = upper_bound(x, y);
        ASSERT_TRUE(leq(x, z) && leq(y, z));
      }
    }
  }
}

TEST(ConeProperties, PairwiseChainFacts) {
  for (const auto& p : probe_posets())
    for (auto i : p.elements())
      for (auto j : p.elements()) {
        if (!p.leq(i, j)) continue;
        for (Coeff a = 0; a <= 3; ++a)
          for (Coeff b = a; b <= 3; ++b) {
            const GroupElement ai = scale(a, GroupElement::basis(p, i));
            const GroupElement bj = scale(b, GroupElement::basis(p, j));
            ASSERT_TRUE(leq(ai, bj));
            ASSERT_TRUE(leq(-ai, bj));
          }
      }
}

// The order-unit rule rests on: membership of a*u - i is independent of
// a >= 2, and monotone in a once u is in the cone.
TEST(ConeProperties, OrderUnitRuleDerivation) {
  for (const auto& p : probe_posets()) {
    for (const auto& u : box(p, p.size() <= 3 ? 2 : 1)) {
      for (auto i : p.elements()) {
        const GroupElement e = GroupElement::basis(p, i);
        const bool at_two = in_cone(scale(2, u) - e);
        for (Coeff a = 3; a <= 9; ++a) ASSERT_EQ(in_cone(scale(a, u) - e), at_two);
        if (in_cone(u) && in_cone(u - e)) {
          ASSERT_TRUE(at_two);
        }
      }
      const auto cert = is_order_unit(u);
      if (cert) {
        ASSERT_TRUE(p.is_cofinal(u.support()));
        for (const auto& w : cert->witnesses)
          ASSERT_TRUE(in_cone(scale(w.multiple, u) - GroupElement::basis(p, w.element)));
        for (const auto& x : box(p, 1)) ASSERT_TRUE(leq(x, scale(order_unit_bound(x, u), u)));
      }
    }
    ASSERT_TRUE(is_order_unit(canonical_order_unit(p)).has_value());
  }
}

}  // namespace
}  // namespace dimgroup::testing

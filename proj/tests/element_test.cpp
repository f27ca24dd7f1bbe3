#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "dimgroup/element.hpp"
#include "test_support.hpp"

namespace dimgroup::testing {
namespace {

TEST(GroupElement, Constructors) {
  const Poset p = antichain_ab();
  EXPECT_TRUE(GroupElement::zero(p).support().empty());
  const GroupElement a = GroupElement::basis(p, "a");
  EXPECT_EQ(a.coefficient("a"), 1);
  EXPECT_EQ(a.coefficient("b"), 0);
  EXPECT_THROW(GroupElement::basis(p, "q"), Error);
  EXPECT_THROW(GroupElement::basis(p, ElementId{5}), Error);
}

TEST(GroupElement, Arithmetic) {
  const Poset p = antichain_ab();
  Expr e{p};
  const GroupElement sum = e("2*a + b") + e("-2*a");
  EXPECT_EQ(sum, e("b"));
  EXPECT_EQ(sum.terms().size(), 1u);
  EXPECT_TRUE(scale(0, e("2*a - b")).is_zero());
  EXPECT_EQ(-e("b - 3*a"), e("3*a - b"));
  EXPECT_EQ(e("b - 3*a").support(), ids(p, {"a", "b"}));
  EXPECT_EQ(e("b - 3*a").coefficient("a"), -3);
  EXPECT_EQ(GroupElement::zero(p).coefficient("a"), 0);
}

TEST(GroupElement, HostMismatch) {
  const Poset p = antichain_ab();
  const Poset q = antichain_ab();  // equal structure, different host
  EXPECT_EQ(p, q);
  try {
    (void)(GroupElement::basis(p, "a") + GroupElement::basis(q, "a"));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::HostMismatch);
  }
  EXPECT_FALSE(GroupElement::basis(p, "a") == GroupElement::basis(q, "a"));
}

TEST(GroupElement, OverflowIsReported) {
  const Poset p = antichain_ab();
  const Coeff big = std::numeric_limits<Coeff>::max();
  const GroupElement x = GroupElement::from_terms(p, std::vector<Term>{{p.id("a"), big}});
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Usage;
  };
  EXPECT_EQ(code([&] { (void)(x + GroupElement::basis(p, "a")); }), ErrorCode::Overflow);
  EXPECT_EQ(code([&] { (void)scale(2, x); }), ErrorCode::Overflow);
  const GroupElement low = GroupElement::from_terms(p, std::vector<Term>{{p.id("a"), std::numeric_limits<Coeff>::min()}});
  EXPECT_EQ(code([&] { (void)-low; }), ErrorCode::Overflow);
  EXPECT_EQ(code([&] { parse_expr(p, "9223372036854775808*a"); }), ErrorCode::Overflow);
  EXPECT_EQ(parse_expr(p, format_expr(low)), low);
  EXPECT_EQ(parse_expr(p, "-9223372036854775808*a"), low);
}

TEST(Expressions, Parse) {
  const Poset p = antichain_ab();
  const GroupElement x = parse_expr(p, "2*a - b");
  EXPECT_EQ(x.coefficient("a"), 2);
  EXPECT_EQ(x.coefficient("b"), -1);
  EXPECT_TRUE(parse_expr(p, "0").is_zero());
  EXPECT_TRUE(parse_expr(p, "  0 ").is_zero());
  EXPECT_EQ(parse_expr(p, "a+a"), parse_expr(p, "2 * a"));
  EXPECT_TRUE(parse_expr(p, "b - b").is_zero());
  EXPECT_EQ(parse_expr(p, "-a"), -GroupElement::basis(p, "a"));
}

TEST(Expressions, ParseErrors) {
  const Poset p = antichain_ab();
  for (const char* bad : {"", "+a", "2a", "2*", "a +", "a b", "0 + a", "a * 2", "--a", "a - -b", "3", "a!"}) {
    try {
      parse_expr(p, bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Syntax) << bad;
    }
  }
  try {
    parse_expr(p, "a + c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownElement);
  }
}

TEST(Expressions, Format) {
  const Poset p = antichain_ab();
  EXPECT_EQ(format_expr(parse_expr(p, "b + a")), "a + b");
  EXPECT_EQ(format_expr(parse_expr(p, "b - 3*a")), "b - 3*a");
  EXPECT_EQ(format_expr(parse_expr(p, "-3*a + b")), "b - 3*a");
  EXPECT_EQ(format_expr(parse_expr(p, "-b - a")), "-a - b");
  EXPECT_EQ(format_expr(-parse_expr(p, "b - 3*a")), "3*a - b");
  EXPECT_EQ(format_expr(parse_expr(p, "-b")), "-b");
  EXPECT_EQ(format_expr(GroupElement::zero(p)), "0");
}

// Every element of a 3-element group box, coefficients in [-2, 2].
std::vector<GroupElement> small_box(const Poset& p) {
  std::vector<GroupElement> out;
  for (Coeff a = -2; a <= 2; ++a)
    for (Coeff b = -2; b <= 2; ++b)
      for (Coeff c = -2; c <= 2; ++c) out.push_back(GroupElement::from_dense(p, std::vector<Coeff>{a, b, c}));
  return out;
}

TEST(GroupLaws, ExhaustiveSmallBox) {
  const Poset p = make_poset({"a", "b", "c"}, {{"a", "b"}});
  const auto box = small_box(p);
  const GroupElement zero = GroupElement::zero(p);
  for (const auto& x : box) {
    ASSERT_EQ(x + -x, zero);
    ASSERT_EQ(x + zero, x);
    ASSERT_EQ(scale(1, x), x);
    for (Coeff m : {-3, 0, 2})
      for (Coeff n : {-1, 1, 4}) ASSERT_EQ(scale(m, scale(n, x)), scale(m * n, x));
    ASSERT_EQ(parse_expr(p, format_expr(x)), x);
    for (const auto& y : box) {
      const GroupElement s = x + y;
      ASSERT_EQ(s, y + x);
      ASSERT_EQ(s - y, x);
      for (const auto& t : s.terms())
        ASSERT_TRUE(x.coefficient(t.element) != 0 || y.coefficient(t.element) != 0);
      for (const auto& t : s.terms()) ASSERT_NE(t.coeff, 0);
    }
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto& x = box[rng() % box.size()];
    const auto& y = box[rng() % box.size()];
    const auto& z = box[rng() % box.size()];
    ASSERT_EQ((x + y) + z, x + (y + z));
  }
}

}  // namespace
}  // namespace dimgroup::testing

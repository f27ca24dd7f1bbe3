#include <gtest/gtest.h>

#include <set>

#include "dimgroup/oracle.hpp"
#include "test_support.hpp"

namespace dimgroup::testing {
namespace {

using namespace dimgroup::oracle;

// Independent count: every subset of off-diagonal pairs, kept if it is a
// strict partial order (irreflexive by construction, antisymmetric, transitive).
std::uint64_t count_by_relations(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<char> lt(n * n, 0);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1) lt[pairs[k].first * n + pairs[k].second] = 1;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (!lt[i * n + j]) continue;
        if (lt[j * n + i]) ok = false;
        for (std::size_t k = 0; k < n && ok; ++k)
          if (lt[j * n + k] && !lt[i * n + k]) ok = false;
      }
    if (ok) ++count;
  }
  return count;
}

TEST(PosetEnumeration, Counts) {
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(enumerate_posets(n).size(), kLabeledPosetCounts[n]) << n;
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(count_by_relations(n), kLabeledPosetCounts[n]) << n;
  std::uint64_t six = 0;
  for_each_order_matrix(6, [&](const std::vector<char>&) { ++six; });
  EXPECT_EQ(six, kLabeledPosetCounts[6]);
  EXPECT_THROW(for_each_order_matrix(7, [](const std::vector<char>&) {}), Error);
}

TEST(PosetEnumeration, DistinctAndValid) {
  std::set<std::vector<char>> seen;
  for (const auto& p : enumerate_posets(4)) {
    EXPECT_TRUE(p.satisfies_order_axioms());
    EXPECT_TRUE(seen.insert(p.order_matrix()).second);
    EXPECT_EQ(p.names(), generated_names(4));
  }
  EXPECT_TRUE(verify_poset_enumeration(5).passed());
}

TEST(Boxes, EnumerationOrder) {
  const Poset p = chain_ab();
  const auto box = enumerate_box(p, CoeffRange::symmetric(1));
  ASSERT_EQ(box.size(), 9u);
  EXPECT_EQ(format_expr(box.front()), "-a - b");
  EXPECT_EQ(format_expr(box[1]), "-a");
  EXPECT_EQ(format_expr(box.back()), "a + b");
  EXPECT_TRUE(enumerate_box(p, CoeffRange{1, 0}).empty());
  EXPECT_EQ(enumerate_box(Poset{}, CoeffRange::symmetric(3)).size(), 1u);
}

TEST(Boxes, ConeElementsOnChain) {
  const Poset p = chain_ab();
  std::vector<std::string> listed;
  for (const auto& x : enumerate_cone_elements(p, 1)) listed.push_back(format_expr(x));
  EXPECT_EQ(listed, (std::vector<std::string>{"b - a", "0", "b", "a", "a + b"}));
  for (const auto& q : enumerate_posets(3)) {
    const auto cone = enumerate_cone_elements(q, 2);
    std::size_t k = 0;
    for (const auto& x : enumerate_box(q, CoeffRange::symmetric(2))) {
      const bool listed_here = k < cone.size() && cone[k] == x;
      if (listed_here) ++k;
      ASSERT_EQ(listed_here, in_cone(x)) << q.to_string() << " " << format_expr(x);
    }
    ASSERT_EQ(k, cone.size());
  }
}

TEST(BruteRefine, FindsAndRespectsBox) {
  const Poset p = chain_ab();
  Expr e{p};
  const RefinementProblem prob(e("b - a"), e("a"), e("b"), e("0"));
  const auto box = default_search_box(prob);
  EXPECT_EQ(box, (std::vector<Coeff>{3, 3}));
  const auto found = brute_refine(prob);
  ASSERT_TRUE(found.has_value());
  EXPECT_TRUE(check_refinement(prob, *found));
  EXPECT_TRUE(within_box(*found, box));
  EXPECT_TRUE(within_box(refine(prob), box));

  const RefinementProblem zero(e("0"), e("0"), e("0"), e("0"));
  const auto z = brute_refine(zero, Coeff{0});
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(*z, (RefinementMatrix{e("0"), e("0"), e("0"), e("0")}));

  // The box bounds z11 only; here z11 = a is forced.
  const Poset anti = antichain_ab();
  Expr n{anti};
  EXPECT_FALSE(brute_refine(RefinementProblem(n("a"), n("0"), n("a"), n("0")), Coeff{0}).has_value());
  EXPECT_TRUE(brute_refine(RefinementProblem(n("a"), n("0"), n("a"), n("0")), Coeff{1}).has_value());
  const auto swapped = brute_refine(RefinementProblem(n("a"), n("b"), n("b"), n("a")), Coeff{0});
  ASSERT_TRUE(swapped.has_value());
  EXPECT_EQ(*swapped, (RefinementMatrix{n("0"), n("a"), n("b"), n("0")}));
}

TEST(OrderUnitSearch, AgreesOnExamples) {
  const Poset p = chain_ab();
  EXPECT_TRUE(order_unit_by_search(parse_expr(p, "b - a")));
  EXPECT_FALSE(order_unit_by_search(parse_expr(p, "a")));
  EXPECT_FALSE(order_unit_by_search(parse_expr(p, "0")));
}

TEST(Rng, BelowAndMix) {
  Rng r(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[r.below(7)];
  for (int h : hits) EXPECT_GT(h, 800);
  Rng a(11), b(11);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.below(1000), b.below(1000));
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

TEST(Reports, FailureCapAndOrder) {
  ReportBuilder b("demo");
  const Poset p = chain_ab();
  for (int i = 40; i > 0; --i) b.fail(p, "i=" + std::to_string(100 + i), "x", "y");
  b.pass();
  const auto r = b.finish();
  EXPECT_EQ(r.instances_checked, 41u);
  EXPECT_EQ(r.failure_count, 40u);
  ASSERT_EQ(r.failures.size(), kMaxRecordedFailures);
  EXPECT_EQ(r.failures.front().input, "i=101");
  EXPECT_TRUE(std::is_sorted(r.failures.begin(), r.failures.end()));
  EXPECT_FALSE(r.passed());
  const auto j = r.to_json();
  EXPECT_EQ(j.begin().key(), "suite");
  EXPECT_EQ(j["failure_count"], 40);
  EXPECT_EQ(j["failures"][0]["poset"], "elem a b; lt a b");
}

TEST(Verify, EmptyPosetOnly) {
  VerifyOptions opt;
  opt.max_n = 0;
  const auto reports = verify_theorems(opt);
  ASSERT_EQ(reports.size(), 13u);
  for (const auto& r : reports) EXPECT_TRUE(r.passed()) << r.to_json_line();
  EXPECT_EQ(reports.front().suite, "poset_enumeration");
}

TEST(Verify, SmallRunPassesAndIsReproducible) {
  VerifyOptions opt;
  opt.max_n = 2;
  opt.coeff_bound = 1;
  opt.samples = 500;
  opt.seed = 3;
  const auto first = verify_theorems(opt);
  const auto second = verify_theorems(opt);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_TRUE(first[i].passed()) << first[i].to_json_line();
    EXPECT_GT(first[i].instances_checked, 0u) << first[i].suite;
    EXPECT_EQ(first[i].to_json_line(), second[i].to_json_line());
  }
}

// With sampling forced, each of the three size levels contributes at most `samples` checks.
TEST(Verify, SampledRun) {
  VerifyOptions opt;
  opt.max_n = 2;
  opt.coeff_bound = 2;
  opt.samples = 50;
  opt.exhaustive_limit = 0;
  for (std::uint64_t seed : {1, 2}) {
    opt.seed = seed;
    const auto reports = verify_theorems(opt);
    for (std::size_t i = 1; i < reports.size(); ++i) {
      EXPECT_TRUE(reports[i].passed()) << reports[i].to_json_line();
      EXPECT_LE(reports[i].instances_checked, 3 * 50u) << reports[i].suite;
    }
  }
}

TEST(Verify, Errors) {
  VerifyOptions opt;
  opt.max_n = 6;
  try {
    verify_theorems(opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeTooLarge);
  }
}

// A cone predicate that accepts everything must trip conicity with readable witnesses.
TEST(Verify, MutantConeIsCaught) {
  const Instance in = make_instance(chain_ab(), CoeffRange::symmetric(1));
  const std::vector<Instance> instances{in};
  const auto report = run_suite(suites::conicity([](const GroupElement&) { return true; }), instances, std::nullopt, 0);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.failure_count, 8u);
  std::set<std::string> inputs;
  for (const auto& f : report.failures) inputs.insert(f.input);
  EXPECT_TRUE(inputs.count("x=b - a"));
  EXPECT_TRUE(inputs.count("x=a - b"));

  const auto closure = run_suite(suites::cone_closure([](const GroupElement& x) { return !x.is_zero(); }), instances,
                                 std::nullopt, 0);
  EXPECT_FALSE(closure.passed());
}

}  // namespace
}  // namespace dimgroup::testing

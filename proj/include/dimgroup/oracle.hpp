#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimgroup/cone.hpp"
#include "dimgroup/element.hpp"
#include "dimgroup/poset.hpp"
#include "dimgroup/riesz.hpp"

namespace dimgroup::oracle {

/// Number of partial orders on n labeled elements, n = 0..6.
inline constexpr std::array<std::uint64_t, 7> kLabeledPosetCounts{1, 1, 3, 19, 219, 4231, 130023};

inline constexpr std::size_t kMaxEnumerationSize = 6;
inline constexpr std::size_t kMaxVerifySize = 5;

/// Default element names for generated posets.
inline std::vector<std::string> generated_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return names;
}

/// Calls `visit(order_matrix)` for every partial order on n labeled elements.
///
/// A poset on {0..k} is a poset P on {0..k-1} together with the down-set D
/// and up-set U of the new element: D a lower set, U an upper set, D and U
/// disjoint, and d < u for all d in D, u in U. The restriction to {0..k-1}
/// and the pair (D, U) are recovered from the result, so every order is
/// produced exactly once. Orders are visited depth first, masks ascending.
template <class Visit>
void for_each_order_matrix(std::size_t n, Visit&& visit) {
  if (n > kMaxEnumerationSize)
    throw Error(ErrorCode::SizeTooLarge, "poset enumeration supports at most " + std::to_string(kMaxEnumerationSize) + " elements");
  // below[k] / above[k]: bitmask of elements strictly below / above k.
  std::array<std::uint32_t, kMaxEnumerationSize> below{};
  std::array<std::uint32_t, kMaxEnumerationSize> above{};

  auto emit = [&]() {
    std::vector<char> leq(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      leq[i * n + i] = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (above[i] & (1u << j)) leq[i * n + j] = 1;
    }
    visit(leq);
  };

  auto grow = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      emit();
      return;
    }
    const std::uint32_t all = (1u << k) - 1;
    for (std::uint32_t down = 0; down <= all; ++down) {
      bool lower = true;
      for (std::size_t d = 0; d < k && lower; ++d)
        if ((down & (1u << d)) && (below[d] & ~down)) lower = false;
      if (!lower) continue;
      for (std::uint32_t up = 0; up <= all; ++up) {
        if (down & up) continue;
        bool ok = true;
        for (std::size_t u = 0; u < k && ok; ++u) {
          if (!(up & (1u << u))) continue;
          if (above[u] & ~up) ok = false;          // upper set
          else if ((below[u] & down) != down) ok = false;  // every d < u
        }
        if (!ok) continue;
        below[k] = down;
        above[k] = up;
        for (std::size_t i = 0; i < k; ++i) {
          if (down & (1u << i)) above[i] |= 1u << k;
          if (up & (1u << i)) below[i] |= 1u << k;
        }
        self(self, k + 1);
        for (std::size_t i = 0; i < k; ++i) {
          above[i] &= ~(1u << k);
          below[i] &= ~(1u << k);
        }
      }
    }
  };
  grow(grow, 0);
}

/// Every partial order on n labeled elements named a, b, c, ...; n <= 6.
inline std::vector<Poset> enumerate_posets(std::size_t n) {
  std::vector<Poset> out;
  const auto names = generated_names(n <= kMaxEnumerationSize ? n : 0);
  for_each_order_matrix(n, [&](const std::vector<char>& leq) { out.push_back(Poset::from_matrix(names, leq)); });
  return out;
}

struct CoeffRange {
  Coeff lo = 0;
  Coeff hi = 0;

  static CoeffRange symmetric(Coeff bound) { return {-bound, bound}; }
  std::size_t width() const { return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1); }
};

/// Every element with all coefficients in `range`, lexicographic with the
/// first declared element most significant.
inline std::vector<GroupElement> enumerate_box(const Poset& p, CoeffRange range) {
  std::vector<GroupElement> out;
  const std::size_t n = p.size();
  if (range.width() == 0) return out;
  std::vector<Coeff> coeffs(n, range.lo);
  for (;;) {
    out.push_back(GroupElement::from_dense(p, coeffs));
    std::size_t pos = n;
    while (pos > 0 && coeffs[pos - 1] == range.hi) coeffs[--pos] = range.lo;
    if (pos == 0) break;
    ++coeffs[pos - 1];
  }
  return out;
}

namespace detail {

/// Cone membership by "every negative coefficient sits strictly below some
/// positive coefficient". Shares no code with in_cone.
inline bool covered_negatives(const Poset& p, std::span<const Coeff> c) {
  const std::size_t n = c.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (c[i] >= 0) continue;
    bool covered = false;
    for (std::uint32_t j = 0; j < n && !covered; ++j) covered = c[j] > 0 && p.less(ElementId{i}, ElementId{j});
    if (!covered) return false;
  }
  return true;
}

}  // namespace detail

/// Cone elements with coefficients in [-bound, bound], box order, selected
/// with detail::covered_negatives.
inline std::vector<GroupElement> enumerate_cone_elements(const Poset& p, Coeff bound) {
  std::vector<GroupElement> out;
  if (bound < 0) return out;
  const std::size_t n = p.size();
  std::vector<Coeff> c(n, -bound);
  for (;;) {
    if (detail::covered_negatives(p, c)) out.push_back(GroupElement::from_dense(p, c));
    std::size_t pos = n;
    while (pos > 0 && c[pos - 1] == bound) c[--pos] = -bound;
    if (pos == 0) break;
    ++c[pos - 1];
  }
  return out;
}

/// Per-coordinate search bound: the largest absolute input coefficient plus
/// the sum of absolute input coefficients at that coordinate.
inline std::vector<Coeff> default_search_box(const RefinementProblem& prob) {
  const std::size_t n = prob.host().size();
  const std::array<std::vector<Coeff>, 4> rows{prob.x1().dense(), prob.x2().dense(), prob.y1().dense(), prob.y2().dense()};
  Coeff largest = 0;
  for (const auto& r : rows)
    for (Coeff c : r) largest = std::max(largest, dimgroup::detail::checked_abs(c));
  std::vector<Coeff> box(n, largest);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& r : rows) box[i] = dimgroup::detail::checked_add(box[i], dimgroup::detail::checked_abs(r[i]));
  return box;
}

namespace detail {

// 0, 1, -1, 2, -2, ... up to the bound.
inline std::vector<Coeff> search_order(Coeff bound) {
  std::vector<Coeff> out{0};
  for (Coeff v = 1; v <= bound; ++v) {
    out.push_back(v);
    out.push_back(-v);
  }
  return out;
}

}  // namespace detail

/// Searches z11 over the per-coordinate box (z12, z21, z22 follow from the
/// sums) and returns the first matrix accepted by check_refinement. Candidates
/// are ordered coordinatewise as 0, 1, -1, 2, -2, ..., first element most
/// significant. An empty result only means nothing was found inside the box.
inline std::optional<RefinementMatrix> brute_refine(const RefinementProblem& prob, std::span<const Coeff> box) {
  const Poset& p = prob.host();
  const std::size_t n = p.size();
  if (box.size() != n) throw Error(ErrorCode::Usage, "search box dimension differs from the poset size");
  std::vector<std::vector<Coeff>> axes;
  for (Coeff b : box) {
    if (b < 0) throw Error(ErrorCode::Usage, "search bound must be nonnegative");
    axes.push_back(detail::search_order(b));
  }
  std::vector<std::size_t> pos(n, 0);
  std::vector<Coeff> coeffs(n, 0);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) coeffs[i] = axes[i][pos[i]];
    RefinementMatrix z{GroupElement::from_dense(p, coeffs), GroupElement(p), GroupElement(p), GroupElement(p)};
    z.z12 = prob.x1() - z.z11;
    z.z21 = prob.y1() - z.z11;
    z.z22 = prob.x2() - z.z21;
    if (check_refinement(prob, z)) return z;
    std::size_t k = n;
    while (k > 0 && pos[k - 1] + 1 == axes[k - 1].size()) pos[--k] = 0;
    if (k == 0) return std::nullopt;
    ++pos[k - 1];
  }
}

inline std::optional<RefinementMatrix> brute_refine(const RefinementProblem& prob, Coeff bound) {
  return brute_refine(prob, std::vector<Coeff>(prob.host().size(), bound));
}

inline std::optional<RefinementMatrix> brute_refine(const RefinementProblem& prob) {
  return brute_refine(prob, default_search_box(prob));
}

/// Whether every coefficient of every entry lies inside the per-coordinate box.
inline bool within_box(const RefinementMatrix& z, std::span<const Coeff> box) {
  for (const GroupElement* e : {&z.z11, &z.z12, &z.z21, &z.z22})
    for (const auto& t : e->terms())
      if (dimgroup::detail::checked_abs(t.coeff) > box[t.element.index]) return false;
  return true;
}

/// Order-unit test by search: for every element i and sign s there is
/// some a in 1..max_multiple with a*u - s*i in the cone.
inline bool order_unit_by_search(const GroupElement& u, Coeff max_multiple = 8) {
  const Poset& p = u.host();
  if (p.empty()) throw Error(ErrorCode::EmptyPoset, "order units are undefined over the empty poset");
  for (auto i : p.elements()) {
    const GroupElement e = GroupElement::basis(p, i);
    for (const GroupElement& target : {e, -e}) {
      bool dominated = false;
      for (Coeff a = 1; a <= max_multiple && !dominated; ++a) dominated = in_cone(scale(a, u) - target);
      if (!dominated) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Verification suites

struct Failure {
  std::string poset;
  std::string input;
  std::string expected;
  std::string got;

  auto tie() const { return std::tie(poset, input, expected, got); }
  friend bool operator<(const Failure& a, const Failure& b) { return a.tie() < b.tie(); }
  friend bool operator==(const Failure& a, const Failure& b) { return a.tie() == b.tie(); }
};

struct VerificationReport {
  std::string suite;
  std::uint64_t instances_checked = 0;
  std::uint64_t failure_count = 0;
  std::vector<Failure> failures;  // canonical order, at most kMaxRecordedFailures

  bool passed() const { return failure_count == 0; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["instances_checked"] = instances_checked;
    j["failure_count"] = failure_count;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : failures)
      j["failures"].push_back({{"poset", f.poset}, {"input", f.input}, {"expected", f.expected}, {"got", f.got}});
    return j;
  }

  std::string to_json_line() const { return to_json().dump(); }
};

inline constexpr std::size_t kMaxRecordedFailures = 32;

class ReportBuilder {
 public:
  explicit ReportBuilder(std::string suite) { report_.suite = std::move(suite); }

  void pass() { ++report_.instances_checked; }

  std::uint64_t instances() const { return report_.instances_checked; }

  void fail(const Poset& p, std::string input, std::string expected, std::string got) {
    ++report_.instances_checked;
    ++report_.failure_count;
    recorded_.insert(Failure{p.to_string(), std::move(input), std::move(expected), std::move(got)});
    if (recorded_.size() > kMaxRecordedFailures) recorded_.erase(std::prev(recorded_.end()));
  }

  void check(bool ok, const Poset& p, const std::function<std::string()>& input, std::string expected,
             std::string got) {
    if (ok) pass();
    else fail(p, input(), std::move(expected), std::move(got));
  }

  void merge(const VerificationReport& other) {
    report_.instances_checked += other.instances_checked;
    report_.failure_count += other.failure_count;
    for (const auto& f : other.failures) recorded_.insert(f);
    while (recorded_.size() > kMaxRecordedFailures) recorded_.erase(std::prev(recorded_.end()));
  }

  VerificationReport finish() {
    report_.failures.assign(recorded_.begin(), recorded_.end());
    return report_;
  }

 private:
  VerificationReport report_;
  std::set<Failure> recorded_;
};

/// std::mt19937_64 with rejection-sampled bounded draws; reproducible on
/// every conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent per-suite seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using ConePredicate = std::function<bool(const GroupElement&)>;

inline ConePredicate library_cone() {
  return [](const GroupElement& x) { return in_cone(x); };
}

/// One poset with its coefficient box and the cone elements inside it.
struct Instance {
  Poset poset;
  std::vector<GroupElement> box;
  std::vector<GroupElement> cone;
};

inline Instance make_instance(const Poset& p, CoeffRange range) {
  Instance inst{p, enumerate_box(p, range), {}};
  for (const auto& x : inst.box)
    if (in_cone(x)) inst.cone.push_back(x);
  return inst;
}

inline std::string show(const GroupElement& x) { return format_expr(x); }
inline std::string show(bool b) { return b ? "true" : "false"; }

/// A suite checks one property over instances, either exhaustively or by
/// seeded sampling. `cost` estimates the exhaustive instance count.
struct Suite {
  std::string name;
  std::function<std::uint64_t(const Instance&)> cost;
  std::function<void(const Instance&, ReportBuilder&)> exhaustive;
  std::function<bool(const Instance&, Rng&, ReportBuilder&)> draw;  // false: draw rejected
};

namespace suites {

inline Suite cone_enumeration(Coeff bound) {
  Suite s{"cone_enumeration", {}, {}, {}};
  s.cost = [](const Instance& in) { return in.box.size(); };
  s.exhaustive = [bound](const Instance& in, ReportBuilder& b) {
    const auto generated = enumerate_cone_elements(in.poset, bound);
    std::size_t g = 0;
    for (const auto& x : in.box) {
      const bool listed = g < generated.size() && generated[g] == x;
      if (listed) ++g;
      b.check(listed == in_cone(x), in.poset, [&] { return show(x); }, show(in_cone(x)), show(listed));
    }
  };
  s.draw = [bound](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto& x = rng.pick(in.box);
    const auto generated = enumerate_cone_elements(in.poset, bound);
    const bool listed = std::find(generated.begin(), generated.end(), x) != generated.end();
    b.check(listed == in_cone(x), in.poset, [&] { return show(x); }, show(in_cone(x)), show(listed));
    return true;
  };
  return s;
}

inline Suite cone_closure(ConePredicate cone) {
  Suite s{"cone_closure", {}, {}, {}};
  auto one = [cone](const Instance& in, const GroupElement& x, const GroupElement& y, ReportBuilder& b) {
    if (!cone(x) || !cone(y)) return false;
    const bool sum = cone(x + y);
    b.check(sum, in.poset, [&] { return "x=" + show(x) + ", y=" + show(y); }, "in_cone(x+y)=true", show(sum));
    return true;
  };
  s.cost = [](const Instance& in) { return std::uint64_t{in.box.size()} * in.box.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box)
      for (const auto& y : in.box) one(in, x, y, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) {
    if (in.cone.empty()) return false;
    return one(in, rng.pick(in.cone), rng.pick(in.cone), b);
  };
  return s;
}

inline Suite conicity(ConePredicate cone) {
  Suite s{"conicity", {}, {}, {}};
  auto one = [cone](const Instance& in, const GroupElement& x, ReportBuilder& b) {
    const bool both = cone(x) && cone(-x);
    b.check(!both || x.is_zero(), in.poset, [&] { return "x=" + show(x); }, "x=0 or not both x, -x in cone",
            "x and -x in cone");
    return true;
  };
  s.cost = [](const Instance& in) { return in.box.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box) one(in, x, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) { return one(in, rng.pick(in.box), b); };
  return s;
}

inline constexpr std::array<Coeff, 3> kUnperforationScales{2, 3, 5};

inline Suite unperforation(ConePredicate cone) {
  Suite s{"unperforation", {}, {}, {}};
  auto one = [cone](const Instance& in, const GroupElement& x, Coeff k, ReportBuilder& b) {
    const bool plain = cone(x);
    const bool scaled = cone(scale(k, x));
    b.check(plain == scaled, in.poset, [&] { return "x=" + show(x) + ", n=" + std::to_string(k); },
            "in_cone(n*x)=" + show(plain), show(scaled));
    return true;
  };
  s.cost = [](const Instance& in) { return in.box.size() * kUnperforationScales.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box)
      for (Coeff k : kUnperforationScales) one(in, x, k, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto& x = rng.pick(in.box);
    return one(in, x, kUnperforationScales[rng.below(kUnperforationScales.size())], b);
  };
  return s;
}

inline Suite leq_partial_order(ConePredicate cone) {
  Suite s{"leq_partial_order", {}, {}, {}};
  auto le = [cone](const GroupElement& x, const GroupElement& y) { return cone(y - x); };
  auto one = [le](const Instance& in, const GroupElement& x, const GroupElement& y, const GroupElement& z,
                  ReportBuilder& b) {
    auto input = [&] { return "x=" + show(x) + ", y=" + show(y) + ", z=" + show(z); };
    const bool xy = le(x, y);
    const bool yx = le(y, x);
    const bool yz = le(y, z);
    if (!le(x, x)) b.fail(in.poset, input(), "x<=x", "false");
    else if (xy && yx && !(x == y)) b.fail(in.poset, input(), "x<=y and y<=x imply x=y", "x!=y");
    else if (xy && yz && !le(x, z)) b.fail(in.poset, input(), "x<=y and y<=z imply x<=z", "x<=z false");
    else b.pass();
    return true;
  };
  s.cost = [](const Instance& in) {
    const std::uint64_t k = in.box.size();
    return k * k * k;
  };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box)
      for (const auto& y : in.box)
        for (const auto& z : in.box) one(in, x, y, z, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto& x = rng.pick(in.box);
    const auto& y = rng.pick(in.box);
    return one(in, x, y, rng.pick(in.box), b);
  };
  return s;
}

inline Suite directedness() {
  Suite s{"directedness", {}, {}, {}};
  auto one = [](const Instance& in, const GroupElement& x, const GroupElement& y, ReportBuilder& b) {
    if (in.poset.empty()) {
      bool threw = false;
      try {
        upper_bound(x, y);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::EmptyPoset;
      }
      b.check(threw, in.poset, [] { return "x=0, y=0"; }, "EmptyPoset", "no error");
      return true;
    }
    const GroupElement z = upper_bound(x, y);
    b.check(leq(x, z) && leq(y, z), in.poset, [&] { return "x=" + show(x) + ", y=" + show(y); },
            "x<=z and y<=z", "z=" + show(z));
    return true;
  };
  s.cost = [](const Instance& in) { return std::uint64_t{in.box.size()} * in.box.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box)
      for (const auto& y : in.box) one(in, x, y, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto& x = rng.pick(in.box);
    return one(in, x, rng.pick(in.box), b);
  };
  return s;
}

/// Refinement problems over an instance: x1, x2, y1 from the cone, y2 derived.
inline void refine_one(const Instance& in, const GroupElement& x1, const GroupElement& x2, const GroupElement& y1,
                       ReportBuilder& b, bool compare_brute) {
  GroupElement y2 = x1 + x2 - y1;
  if (!in_cone(y2)) return;
  const RefinementProblem prob(x1, x2, y1, std::move(y2));
  auto input = [&] {
    return "x1=" + show(prob.x1()) + ", x2=" + show(prob.x2()) + ", y1=" + show(prob.y1()) + ", y2=" + show(prob.y2());
  };
  RefinementMatrix z = refine(prob);
  auto got = [&] { return "(" + show(z.z11) + ", " + show(z.z12) + "; " + show(z.z21) + ", " + show(z.z22) + ")"; };
  if (!check_refinement(prob, z)) {
    b.fail(in.poset, input(), "valid refinement", got());
    return;
  }
  if (!compare_brute) {
    b.pass();
    return;
  }
  const auto box = default_search_box(prob);
  if (!within_box(z, box)) {
    b.fail(in.poset, input(), "refine output inside the default search box", got());
    return;
  }
  const auto found = brute_refine(prob, box);
  b.check(found.has_value(), in.poset, input, "brute_refine found a matrix", "not found within bound");
}

inline Suite refine_validity() {
  Suite s{"refine_validity", {}, {}, {}};
  s.cost = [](const Instance& in) {
    const std::uint64_t k = in.cone.size();
    return k * k * k;
  };
  s.exhaustive = [](const Instance& in, ReportBuilder& b) {
    for (const auto& x1 : in.cone)
      for (const auto& x2 : in.cone)
        for (const auto& y1 : in.cone) refine_one(in, x1, x2, y1, b, false);
  };
  s.draw = [](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto before = b.instances();
    const auto& x1 = rng.pick(in.cone);
    const auto& x2 = rng.pick(in.cone);
    refine_one(in, x1, x2, rng.pick(in.cone), b, false);
    return b.instances() != before;
  };
  return s;
}

inline constexpr std::size_t kBruteAgreementMaxSize = 2;

inline Suite refine_brute_agreement() {
  Suite s{"refine_brute_agreement", {}, {}, {}};
  s.cost = [](const Instance& in) {
    if (in.poset.size() > kBruteAgreementMaxSize) return std::uint64_t{0};
    const std::uint64_t k = in.cone.size();
    return k * k * k;
  };
  s.exhaustive = [](const Instance& in, ReportBuilder& b) {
    if (in.poset.size() > kBruteAgreementMaxSize) return;
    for (const auto& x1 : in.cone)
      for (const auto& x2 : in.cone)
        for (const auto& y1 : in.cone) refine_one(in, x1, x2, y1, b, true);
  };
  s.draw = [](const Instance& in, Rng& rng, ReportBuilder& b) {
    if (in.poset.size() > kBruteAgreementMaxSize) return false;
    const auto before = b.instances();
    const auto& x1 = rng.pick(in.cone);
    const auto& x2 = rng.pick(in.cone);
    refine_one(in, x1, x2, rng.pick(in.cone), b, true);
    return b.instances() != before;
  };
  return s;
}

inline void interpolate_one(const Instance& in, const GroupElement& x1, const GroupElement& x2,
                            const GroupElement& y1, const GroupElement& y2, ReportBuilder& b) {
  const GroupElement z = interpolate(x1, x2, y1, y2);
  const bool ok = leq(x1, z) && leq(x2, z) && leq(z, y1) && leq(z, y2);
  if (ok) {
    b.pass();
    return;
  }
  b.fail(in.poset, "x1=" + show(x1) + ", x2=" + show(x2) + ", y1=" + show(y1) + ", y2=" + show(y2),
         "x1,x2 <= z <= y1,y2", "z=" + show(z));
}

/// Dense interpolation check for the exhaustive sweep. The four order checks
/// use detail::covered_negatives rather than in_cone.
class DenseInterpolationCheck {
 public:
  explicit DenseInterpolationCheck(const Instance& in)
      : in_(in), n_(in.poset.size()), rows_(in.box.size() * n_), z_(n_), diff_(n_),
        work_(dimgroup::detail::interpolation_work_size(n_)) {
    for (std::size_t k = 0; k < in.box.size(); ++k) dimgroup::detail::write_row(in.box[k], row(k));
  }

  void operator()(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2, ReportBuilder& b) {
    std::string error;
    bool ok = false;
    try {
      dimgroup::detail::interpolate_dense(in_.poset, row(x1), row(x2), row(y1), row(y2), z_, work_);
      ok = le(row(x1), z_) && le(row(x2), z_) && le(z_, row(y1)) && le(z_, row(y2));
    } catch (const Error& e) {
      error = std::string(error_tag(e.code())) + ": " + e.what();
    }
    if (ok) {
      b.pass();
      return;
    }
    const auto& box = in_.box;
    b.fail(in_.poset,
           "x1=" + show(box[x1]) + ", x2=" + show(box[x2]) + ", y1=" + show(box[y1]) + ", y2=" + show(box[y2]),
           "x1,x2 <= z <= y1,y2", error.empty() ? "z=" + show(GroupElement::from_dense(in_.poset, z_)) : error);
  }

 private:
  std::span<Coeff> row(std::size_t k) { return std::span<Coeff>(rows_).subspan(k * n_, n_); }

  bool le(std::span<const Coeff> x, std::span<const Coeff> y) {
    for (std::size_t i = 0; i < n_; ++i) diff_[i] = dimgroup::detail::checked_sub(y[i], x[i]);
    return detail::covered_negatives(in_.poset, diff_);
  }

  const Instance& in_;
  std::size_t n_;
  std::vector<Coeff> rows_;
  std::vector<Coeff> z_;
  std::vector<Coeff> diff_;
  std::vector<Coeff> work_;
};

/// leq over all box pairs, row-major: table[i * k + j] <=> box[i] <= box[j].
inline std::vector<char> leq_table(const Instance& in) {
  const std::size_t k = in.box.size();
  std::vector<char> table(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) table[i * k + j] = leq(in.box[i], in.box[j]) ? 1 : 0;
  return table;
}

inline Suite interpolation() {
  Suite s{"interpolation", {}, {}, {}};
  s.cost = [](const Instance& in) {
    const std::uint64_t k = in.box.size();
    return k * k * k * k;
  };
  s.exhaustive = [](const Instance& in, ReportBuilder& b) {
    const std::size_t k = in.box.size();
    const auto table = leq_table(in);
    DenseInterpolationCheck check(in);
    std::vector<std::size_t> common;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t c = 0; c < k; ++c) {
        common.clear();
        for (std::size_t y = 0; y < k; ++y)
          if (table[a * k + y] && table[c * k + y]) common.push_back(y);
        for (std::size_t y1 : common)
          for (std::size_t y2 : common) check(a, c, y1, y2, b);
      }
  };
  s.draw = [](const Instance& in, Rng& rng, ReportBuilder& b) {
    const auto& x1 = rng.pick(in.box);
    const auto& x2 = rng.pick(in.box);
    std::vector<const GroupElement*> common;
    for (const auto& y : in.box)
      if (leq(x1, y) && leq(x2, y)) common.push_back(&y);
    if (common.empty()) return false;
    const GroupElement& y1 = *rng.pick(common);
    interpolate_one(in, x1, x2, y1, *rng.pick(common), b);
    return true;
  };
  return s;
}

inline void expect_empty_poset_error(const Instance& in, ReportBuilder& b, const std::function<void()>& call) {
  bool threw = false;
  try {
    call();
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::EmptyPoset;
  }
  b.check(threw, in.poset, [] { return "empty poset"; }, "EmptyPoset", "no error");
}

inline Suite canonical_order_unit_acceptance() {
  Suite s{"canonical_order_unit", {}, {}, {}};
  auto one = [](const Instance& in, ReportBuilder& b) {
    if (in.poset.empty()) {
      expect_empty_poset_error(in, b, [&] { canonical_order_unit(in.poset); });
      return true;
    }
    const GroupElement u = canonical_order_unit(in.poset);
    const auto cert = is_order_unit(u);
    bool ok = cert.has_value() && in.poset.is_cofinal(u.support());
    if (ok)
      for (const auto& w : cert->witnesses)
        ok = ok && w.multiple > 0 && in_cone(scale(w.multiple, u) - GroupElement::basis(in.poset, w.element));
    b.check(ok, in.poset, [&] { return "u=" + show(u); }, "certified order unit", cert ? "bad certificate" : "rejected");
    return true;
  };
  s.cost = [](const Instance&) { return std::uint64_t{1}; };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) { one(in, b); };
  s.draw = [one](const Instance& in, Rng&, ReportBuilder& b) { return one(in, b); };
  return s;
}

inline constexpr Coeff kOrderUnitSearchLimit = 8;

inline Suite order_unit_decision() {
  Suite s{"order_unit_decision", {}, {}, {}};
  auto one = [](const Instance& in, const GroupElement& u, ReportBuilder& b) {
    if (in.poset.empty()) {
      expect_empty_poset_error(in, b, [&] { is_order_unit(u); });
      return true;
    }
    const auto cert = is_order_unit(u);
    const bool searched = order_unit_by_search(u, kOrderUnitSearchLimit);
    auto input = [&] { return "u=" + show(u); };
    if (cert.has_value() != searched) {
      b.fail(in.poset, input(), "search says " + show(searched), "decision rule says " + show(cert.has_value()));
    } else if (cert && !in.poset.is_cofinal(u.support())) {
      b.fail(in.poset, input(), "cofinal support", "support not cofinal");
    } else if (cert) {
      bool ok = true;
      for (const auto& w : cert->witnesses)
        ok = ok && in_cone(scale(w.multiple, u) - GroupElement::basis(in.poset, w.element));
      b.check(ok, in.poset, input, "witnesses re-check", "witness fails");
    } else {
      b.pass();
    }
    return true;
  };
  s.cost = [](const Instance& in) { return in.box.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& u : in.box) one(in, u, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) { return one(in, rng.pick(in.box), b); };
  return s;
}

inline Suite order_unit_bound_validity() {
  Suite s{"order_unit_bound", {}, {}, {}};
  auto one = [](const Instance& in, const GroupElement& x, ReportBuilder& b) {
    if (in.poset.empty()) {
      expect_empty_poset_error(in, b, [&] { order_unit_bound(x, x); });
      return true;
    }
    const GroupElement u = canonical_order_unit(in.poset);
    const Coeff a = order_unit_bound(x, u);
    b.check(a >= 1 && leq(x, scale(a, u)), in.poset, [&] { return "x=" + show(x) + ", u=" + show(u); },
            "x <= a*u", "a=" + std::to_string(a));
    return true;
  };
  s.cost = [](const Instance& in) { return in.box.size(); };
  s.exhaustive = [one](const Instance& in, ReportBuilder& b) {
    for (const auto& x : in.box) one(in, x, b);
  };
  s.draw = [one](const Instance& in, Rng& rng, ReportBuilder& b) { return one(in, rng.pick(in.box), b); };
  return s;
}

}  // namespace suites

/// Runs a suite over instances. With `samples` unset every instance is
/// checked exhaustively; otherwise `samples` accepted draws are taken, each
/// from a uniformly chosen instance.
inline VerificationReport run_suite(const Suite& suite, std::span<const Instance> instances,
                                    std::optional<std::uint64_t> samples, std::uint64_t seed) {
  ReportBuilder b(suite.name);
  if (!samples) {
    for (const auto& in : instances) suite.exhaustive(in, b);
    return b.finish();
  }
  if (instances.empty()) return b.finish();
  Rng rng(seed);
  std::uint64_t accepted = 0;
  const std::uint64_t max_attempts = 64 * *samples + 64;
  for (std::uint64_t attempt = 0; attempt < max_attempts && accepted < *samples; ++attempt) {
    const Instance& in = instances[rng.below(instances.size())];
    if (suite.draw(in, rng, b)) ++accepted;
  }
  return b.finish();
}

struct VerifyOptions {
  std::size_t max_n = 3;
  Coeff coeff_bound = 2;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  /// Per suite and poset size: exhaustive iff the estimated instance count is at most this.
  std::uint64_t exhaustive_limit = 2'000'000;
};

/// Poset enumeration sanity: counts, distinctness and the order axioms.
inline VerificationReport verify_poset_enumeration(std::size_t max_n) {
  ReportBuilder b("poset_enumeration");
  for (std::size_t n = 0; n <= max_n; ++n) {
    const auto posets = enumerate_posets(n);
    std::set<std::vector<char>> seen;
    for (const auto& p : posets) {
      const bool fresh = seen.insert(p.order_matrix()).second;
      b.check(fresh && p.satisfies_order_axioms() && p.size() == n, p, [] { return "enumerated"; },
              "distinct valid poset", fresh ? "axiom failure" : "duplicate");
    }
    b.check(posets.size() == kLabeledPosetCounts[n], Poset{}, [n] { return "n=" + std::to_string(n); },
            std::to_string(kLabeledPosetCounts[n]) + " posets", std::to_string(posets.size()) + " posets");
  }
  return b.finish();
}

/// Runs every suite for every poset size 0..max_n. Deterministic in the options.
inline std::vector<VerificationReport> verify_theorems(const VerifyOptions& opt, const ConePredicate& cone = library_cone()) {
  if (opt.max_n > kMaxVerifySize)
    throw Error(ErrorCode::SizeTooLarge, "verification supports posets of at most " + std::to_string(kMaxVerifySize) + " elements");
  if (opt.coeff_bound < 0) throw Error(ErrorCode::Usage, "coefficient bound must be nonnegative");

  const std::vector<Suite> all{
      suites::cone_enumeration(opt.coeff_bound), suites::cone_closure(cone),
      suites::conicity(cone),                    suites::unperforation(cone),
      suites::leq_partial_order(cone),           suites::directedness(),
      suites::refine_validity(),                 suites::refine_brute_agreement(),
      suites::interpolation(),                   suites::canonical_order_unit_acceptance(),
      suites::order_unit_decision(),             suites::order_unit_bound_validity(),
  };

  std::vector<std::vector<Instance>> by_size;
  for (std::size_t n = 0; n <= opt.max_n; ++n) {
    std::vector<Instance> level;
    for (const auto& p : enumerate_posets(n)) level.push_back(make_instance(p, CoeffRange::symmetric(opt.coeff_bound)));
    by_size.push_back(std::move(level));
  }

  std::vector<VerificationReport> reports{verify_poset_enumeration(opt.max_n)};
  for (std::size_t s = 0; s < all.size(); ++s) {
    ReportBuilder merged(all[s].name);
    for (std::size_t n = 0; n <= opt.max_n; ++n) {
      std::uint64_t cost = 0;
      for (const auto& in : by_size[n]) cost += all[s].cost(in);
      if (cost == 0) continue;
      const bool exhaustive = cost <= opt.exhaustive_limit;
      merged.merge(run_suite(all[s], by_size[n], exhaustive ? std::nullopt : std::optional<std::uint64_t>(opt.samples),
                             mix_seed(opt.seed, s * 16 + n)));
    }
    reports.push_back(merged.finish());
  }
  return reports;
}

}  // namespace dimgroup::oracle

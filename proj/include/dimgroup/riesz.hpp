#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dimgroup/cone.hpp"
#include "dimgroup/element.hpp"
#include "dimgroup/poset.hpp"

namespace dimgroup {

/// 2x2 integer matrix, row-major. Rows refine the x side, columns the y side.
struct IntMatrix2 {
  Coeff z11 = 0, z12 = 0, z21 = 0, z22 = 0;

  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;
};

namespace detail {

inline void require_balanced(Coeff x1, Coeff x2, Coeff y1, Coeff y2) {
  if (checked_add(x1, x2) != checked_add(y1, y2))
    throw Error(ErrorCode::SumMismatch, "x1 + x2 differs from y1 + y2");
}

}  // namespace detail

/// Refinement in the natural numbers: z11 = min(x1, y1), the rest forced.
inline IntMatrix2 refine_nat(Coeff x1, Coeff x2, Coeff y1, Coeff y2) {
  if (x1 < 0 || x2 < 0 || y1 < 0 || y2 < 0) throw Error(ErrorCode::NotInCone, "natural refinement needs nonnegative inputs");
  detail::require_balanced(x1, x2, y1, y2);
  IntMatrix2 z;
  z.z11 = std::min(x1, y1);
  z.z12 = x1 - z.z11;
  z.z21 = y1 - z.z11;
  z.z22 = x2 - z.z21;
  return z;
}

enum class IntRefinementMode {
  DiagNonneg,     // z11 >= 0 and z22 >= 0
  OffdiagNonneg,  // z12 >= 0 and z21 >= 0
};

/// Integer refinement along z11 = t, z12 = x1 - t, z21 = y1 - t, z22 = x2 - y1 + t.
inline IntMatrix2 refine_int(Coeff x1, Coeff x2, Coeff y1, Coeff y2, IntRefinementMode mode) {
  using namespace detail;
  require_balanced(x1, x2, y1, y2);
  const Coeff t = mode == IntRefinementMode::DiagNonneg ? std::max<Coeff>(0, checked_sub(y1, x2)) : std::min(x1, y1);
  IntMatrix2 z;
  z.z11 = t;
  z.z12 = checked_sub(x1, t);
  z.z21 = checked_sub(y1, t);
  z.z22 = checked_add(checked_sub(x2, y1), t);
  return z;
}

/// x1 + x2 = y1 + y2 with all four terms in the positive cone.
class RefinementProblem {
 public:
  /// Throws HostMismatch, NotInCone or SumMismatch.
  RefinementProblem(GroupElement x1, GroupElement x2, GroupElement y1, GroupElement y2)
      : x1_(std::move(x1)), x2_(std::move(x2)), y1_(std::move(y1)), y2_(std::move(y2)) {
    const Poset& h = x1_.host();
    if (!h.same_host(x2_.host()) || !h.same_host(y1_.host()) || !h.same_host(y2_.host()))
      throw Error(ErrorCode::HostMismatch, "refinement terms live over different posets");
    for (const GroupElement* e : {&x1_, &x2_, &y1_, &y2_})
      if (!in_cone(*e)) throw Error(ErrorCode::NotInCone, format_expr(*e) + " is not in the positive cone");
    if (x1_ + x2_ != y1_ + y2_) throw Error(ErrorCode::SumMismatch, "x1 + x2 differs from y1 + y2");
  }

  const GroupElement& x1() const noexcept { return x1_; }
  const GroupElement& x2() const noexcept { return x2_; }
  const GroupElement& y1() const noexcept { return y1_; }
  const GroupElement& y2() const noexcept { return y2_; }
  const Poset& host() const noexcept { return x1_.host(); }

 private:
  GroupElement x1_, x2_, y1_, y2_;
};

struct RefinementMatrix {
  GroupElement z11, z12, z21, z22;

  friend bool operator==(const RefinementMatrix&, const RefinementMatrix&) = default;
};

/// Cells (row, column) of a 2x2 matrix whose entries vanish strictly above a pivot.
class PPattern {
 public:
  static constexpr std::uint8_t bit(int row, int col) { return static_cast<std::uint8_t>(1u << ((row - 1) * 2 + (col - 1))); }

  constexpr PPattern() = default;
  constexpr explicit PPattern(std::uint8_t cells) : cells_(cells & 0xF) {}

  /// 1-based row and column.
  constexpr bool contains(int row, int col) const { return (cells_ & bit(row, col)) != 0; }
  constexpr std::uint8_t cells() const { return cells_; }
  constexpr int count() const { return __builtin_popcount(cells_); }
  constexpr bool full() const { return cells_ == 0xF; }

  friend constexpr bool operator==(PPattern, PPattern) = default;

 private:
  std::uint8_t cells_ = 0;
};

/// Cell (a, b) is present iff u_ab has coefficient 0 at every element strictly above m.
inline PPattern p_pattern(const RefinementMatrix& u, ElementId m) {
  const Poset& p = u.z11.host();
  if (!p.contains(m)) throw Error(ErrorCode::UnknownElement, "pivot is not an element of the poset");
  const std::array<const GroupElement*, 4> cells{&u.z11, &u.z12, &u.z21, &u.z22};
  std::uint8_t mask = 0;
  for (int c = 0; c < 4; ++c) {
    const auto terms = cells[c]->terms();
    const bool vanishes = std::none_of(terms.begin(), terms.end(), [&](const Term& t) { return p.less(m, t.element); });
    if (vanishes) mask |= static_cast<std::uint8_t>(1u << c);
  }
  return PPattern(mask);
}

namespace detail {

// Symmetries of a refinement problem: optionally exchanging the two sides
// (transposition), then the x summands (row swap), then the y summands
// (column swap). Cells are indexed row-major 0..3.
struct Frame {
  bool transpose = false;
  bool swap_rows = false;
  bool swap_cols = false;

  int map(int cell) const {
    int r = cell / 2;
    int c = cell % 2;
    if (transpose) std::swap(r, c);
    if (swap_rows) r = 1 - r;
    if (swap_cols) c = 1 - c;
    return r * 2 + c;
  }

  PPattern map(PPattern t) const {
    std::uint8_t out = 0;
    for (int cell = 0; cell < 4; ++cell)
      if (t.cells() & (1u << cell)) out |= static_cast<std::uint8_t>(1u << map(cell));
    return PPattern(out);
  }

  // Marginals (x1, x2, y1, y2) seen in this frame.
  std::array<Coeff, 4> map_marginals(const std::array<Coeff, 4>& m) const {
    std::array<Coeff, 4> out = transpose ? std::array<Coeff, 4>{m[2], m[3], m[0], m[1]} : m;
    if (swap_rows) std::swap(out[0], out[1]);
    if (swap_cols) std::swap(out[2], out[3]);
    return out;
  }
};

constexpr std::uint8_t kPatternEmpty = 0;
constexpr std::uint8_t kPatternCorner = PPattern::bit(1, 1);
constexpr std::uint8_t kPatternDiagonal = PPattern::bit(1, 1) | PPattern::bit(2, 2);
constexpr std::uint8_t kPatternTopRow = PPattern::bit(1, 1) | PPattern::bit(1, 2);
constexpr std::uint8_t kPatternTopRowAndCorner = kPatternTopRow | PPattern::bit(2, 2);

inline bool is_normal_pattern(PPattern t) {
  switch (t.cells()) {
    case kPatternEmpty:
    case kPatternCorner:
    case kPatternDiagonal:
    case kPatternTopRow:
    case kPatternTopRowAndCorner: return true;
    default: return false;
  }
}

/// First frame, in a fixed order, carrying t to a normal pattern. Transposition
/// is tried last, so only same-column patterns use it.
inline Frame normalizing_frame(PPattern t) {
  for (bool transpose : {false, true})
    for (int swaps = 0; swaps < 4; ++swaps) {
      Frame f{transpose, (swaps & 1) != 0, (swaps & 2) != 0};
      if (is_normal_pattern(f.map(t))) return f;
    }
  throw Error(ErrorCode::InternalInvariantViolation, "refinement pattern has no normal form");
}

/// Pivot coefficients, in a normal frame, that are nonnegative on every cell of t.
inline IntMatrix2 pivot_coefficients(PPattern t, const std::array<Coeff, 4>& m) {
  if (t.cells() == kPatternTopRow || t.cells() == kPatternTopRowAndCorner) {
    IntMatrix2 a;
    a.z11 = m[0];
    a.z12 = 0;
    a.z21 = checked_sub(m[1], m[3]);
    a.z22 = m[3];
    return a;
  }
  return refine_int(m[0], m[1], m[2], m[3], IntRefinementMode::DiagNonneg);
}

// Dense recursive refinement. `in` holds x1, x2, y1, y2 as consecutive rows of
// length n, `out` receives z11, z12, z21, z22 the same way. `scratch` provides
// 4n coefficients per remaining recursion level.
inline void refine_dense(const Poset& p, std::span<const Coeff> in, std::span<Coeff> out, std::span<Coeff> scratch) {
  const std::size_t n = p.size();
  auto row = [n](auto span, int r) { return span.subspan(static_cast<std::size_t>(r) * n, n); };
  auto active = [&](std::size_t i) {
    return in[i] != 0 || in[n + i] != 0 || in[2 * n + i] != 0 || in[3 * n + i] != 0;
  };
  std::fill(out.begin(), out.end(), Coeff{0});

  // Pivot: first active element with nothing active below and something active above.
  std::size_t pivot = n;
  bool comparable_pair = false;
  for (std::size_t i = 0; i < n && pivot == n; ++i) {
    if (!active(i)) continue;
    bool below = false;
    bool above = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active(j)) continue;
      below = below || p.less(ElementId{static_cast<std::uint32_t>(j)}, ElementId{static_cast<std::uint32_t>(i)});
      above = above || p.less(ElementId{static_cast<std::uint32_t>(i)}, ElementId{static_cast<std::uint32_t>(j)});
    }
    comparable_pair = comparable_pair || below || above;
    if (!below && above) pivot = i;
  }

  if (pivot == n) {
    if (comparable_pair)
      throw Error(ErrorCode::InternalInvariantViolation, "non-antichain support without a minimal non-maximal element");
    // Antichain (or empty) support: coordinatewise refinement in the naturals.
    for (std::size_t i = 0; i < n; ++i) {
      if (!active(i)) continue;
      if (in[i] < 0 || in[n + i] < 0 || in[2 * n + i] < 0 || in[3 * n + i] < 0)
        throw Error(ErrorCode::InternalInvariantViolation, "negative coefficient on an antichain support");
      const IntMatrix2 z = refine_nat(in[i], in[n + i], in[2 * n + i], in[3 * n + i]);
      out[i] = z.z11;
      out[n + i] = z.z12;
      out[2 * n + i] = z.z21;
      out[3 * n + i] = z.z22;
    }
    return;
  }

  if (scratch.size() < 4 * n) throw Error(ErrorCode::InternalInvariantViolation, "refinement scratch exhausted");
  auto stripped = scratch.first(4 * n);
  std::copy(in.begin(), in.end(), stripped.begin());
  for (int r = 0; r < 4; ++r) row(stripped, r)[pivot] = 0;
  refine_dense(p, stripped, out, scratch.subspan(4 * n));

  const ElementId m{static_cast<std::uint32_t>(pivot)};
  std::uint8_t mask = 0;
  for (int c = 0; c < 4; ++c) {
    auto u = row(out, c);
    bool vanishes = true;
    for (std::size_t i = 0; i < n && vanishes; ++i)
      vanishes = u[i] == 0 || !p.less(m, ElementId{static_cast<std::uint32_t>(i)});
    if (vanishes) mask |= static_cast<std::uint8_t>(1u << c);
  }
  const PPattern t(mask);
  if (t.full()) throw Error(ErrorCode::InternalInvariantViolation, "all four cells vanish above a non-maximal pivot");

  const Frame frame = normalizing_frame(t);
  const std::array<Coeff, 4> marginals{in[pivot], in[n + pivot], in[2 * n + pivot], in[3 * n + pivot]};
  const IntMatrix2 a = pivot_coefficients(frame.map(t), frame.map_marginals(marginals));
  const std::array<Coeff, 4> normal{a.z11, a.z12, a.z21, a.z22};
  for (int c = 0; c < 4; ++c) row(out, c)[pivot] = normal[frame.map(c)];
}

inline void refine_dense(const Poset& p, std::span<const Coeff> in, std::span<Coeff> out) {
  std::vector<Coeff> scratch(4 * p.size() * p.size());
  refine_dense(p, in, out, scratch);
}

inline GroupElement element_from_row(const Poset& p, std::span<const Coeff> row) {
  return GroupElement::from_dense(p, row);
}

inline void write_row(const GroupElement& x, std::span<Coeff> row) {
  std::fill(row.begin(), row.end(), Coeff{0});
  for (const auto& t : x.terms()) row[t.element.index] = t.coeff;
}

}  // namespace detail

/// Refinement matrix with all entries in the positive cone, built by
/// induction on the support: peel off a minimal non-maximal element, refine
/// the rest, then choose integer coefficients at the peeled element according
/// to which cells vanish above it.
inline RefinementMatrix refine(const RefinementProblem& prob) {
  const Poset& p = prob.host();
  const std::size_t n = p.size();
  std::vector<Coeff> buffer(8 * n + 4 * n * n);
  std::span<Coeff> in(buffer.data(), 4 * n);
  std::span<Coeff> out(buffer.data() + 4 * n, 4 * n);
  std::span<Coeff> scratch(buffer.data() + 8 * n, 4 * n * n);
  detail::write_row(prob.x1(), in.subspan(0, n));
  detail::write_row(prob.x2(), in.subspan(n, n));
  detail::write_row(prob.y1(), in.subspan(2 * n, n));
  detail::write_row(prob.y2(), in.subspan(3 * n, n));
  detail::refine_dense(p, in, out, scratch);
  return {detail::element_from_row(p, out.subspan(0, n)), detail::element_from_row(p, out.subspan(n, n)),
          detail::element_from_row(p, out.subspan(2 * n, n)), detail::element_from_row(p, out.subspan(3 * n, n))};
}

/// Row sums, column sums and cone membership of every entry.
inline bool check_refinement(const RefinementProblem& prob, const RefinementMatrix& z) {
  const Poset& h = prob.host();
  for (const GroupElement* e : {&z.z11, &z.z12, &z.z21, &z.z22})
    if (!h.same_host(e->host())) throw Error(ErrorCode::HostMismatch, "refinement matrix lives over a different poset");
  return z.z11 + z.z12 == prob.x1() && z.z21 + z.z22 == prob.x2() && z.z11 + z.z21 == prob.y1() &&
         z.z12 + z.z22 == prob.y2() && in_cone(z.z11) && in_cone(z.z12) && in_cone(z.z21) && in_cone(z.z22);
}

namespace detail {

/// Coefficients interpolate_dense needs in `work` for a poset of size n.
inline std::size_t interpolation_work_size(std::size_t n) { return 8 * n + 4 * n * n; }

/// Dense interpolation: writes z with x1, x2 <= z <= y1, y2 into `z`.
inline void interpolate_dense(const Poset& p, std::span<const Coeff> x1, std::span<const Coeff> x2,
                              std::span<const Coeff> y1, std::span<const Coeff> y2, std::span<Coeff> z,
                              std::span<Coeff> work) {
  const std::size_t n = p.size();
  auto in = work.first(4 * n);
  auto out = work.subspan(4 * n, 4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = checked_sub(y1[i], x1[i]);
    in[n + i] = checked_sub(y2[i], x2[i]);
    in[2 * n + i] = checked_sub(y1[i], x2[i]);
    in[3 * n + i] = checked_sub(y2[i], x1[i]);
  }
  for (int r = 0; r < 4; ++r)
    if (!in_cone_dense(p, in.subspan(static_cast<std::size_t>(r) * n, n)))
      throw Error(ErrorCode::NotInterpolable, "some x is not below some y");
  refine_dense(p, in, out, work.subspan(8 * n));
  for (std::size_t i = 0; i < n; ++i) z[i] = checked_add(x1[i], out[n + i]);
}

}  // namespace detail

/// Some z with x_a <= z <= y_b for all a, b. Refines
/// (y1 - x1) + (y2 - x2) = (y1 - x2) + (y2 - x1) and returns x1 + z12.
inline GroupElement interpolate(const GroupElement& x1, const GroupElement& x2, const GroupElement& y1,
                                const GroupElement& y2) {
  const Poset& p = x1.host();
  for (const GroupElement* e : {&x2, &y1, &y2})
    if (!p.same_host(e->host())) throw Error(ErrorCode::HostMismatch, "group elements live over different posets");
  const std::size_t n = p.size();
  std::vector<Coeff> buffer(5 * n + detail::interpolation_work_size(n));
  std::span<Coeff> all(buffer);
  const std::array<const GroupElement*, 4> inputs{&x1, &x2, &y1, &y2};
  for (std::size_t r = 0; r < 4; ++r) detail::write_row(*inputs[r], all.subspan(r * n, n));
  detail::interpolate_dense(p, all.subspan(0, n), all.subspan(n, n), all.subspan(2 * n, n), all.subspan(3 * n, n),
                            all.subspan(4 * n, n), all.subspan(5 * n));
  return detail::element_from_row(p, all.subspan(4 * n, n));
}

}  // namespace dimgroup

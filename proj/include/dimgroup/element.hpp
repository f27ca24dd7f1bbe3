#pragma once

#include <algorithm>
#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dimgroup/error.hpp"
#include "dimgroup/poset.hpp"

namespace dimgroup {

struct Term {
  ElementId element;
  Coeff coeff = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// An element of the free abelian group on a poset: a finite integer
/// combination of poset elements. Terms are kept sorted by declaration order
/// and never store a zero coefficient. All arithmetic is overflow-checked.
class GroupElement {
 public:
  explicit GroupElement(Poset host) : host_(std::move(host)) {}

  static GroupElement zero(const Poset& host) { return GroupElement(host); }

  static GroupElement basis(const Poset& host, ElementId i) {
    if (!host.contains(i)) throw Error(ErrorCode::UnknownElement, "element index out of range for this poset");
    GroupElement x(host);
    x.terms_.push_back({i, 1});
    return x;
  }

  static GroupElement basis(const Poset& host, std::string_view name) { return basis(host, host.id(name)); }

  /// Dense coefficient vector indexed by declaration order.
  static GroupElement from_dense(const Poset& host, std::span<const Coeff> coeffs) {
    if (coeffs.size() != host.size()) throw Error(ErrorCode::UnknownElement, "coefficient vector length mismatch");
    GroupElement x(host);
    for (std::uint32_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != 0) x.terms_.push_back({ElementId{i}, coeffs[i]});
    return x;
  }

  /// Terms in any order; repeated elements are summed.
  static GroupElement from_terms(const Poset& host, std::span<const Term> terms) {
    std::vector<Coeff> dense(host.size(), 0);
    for (const auto& t : terms) {
      if (!host.contains(t.element)) throw Error(ErrorCode::UnknownElement, "element index out of range for this poset");
      dense[t.element.index] = detail::checked_add(dense[t.element.index], t.coeff);
    }
    return from_dense(host, dense);
  }

  const Poset& host() const noexcept { return host_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coeff coefficient(ElementId i) const {
    if (!host_.contains(i)) throw Error(ErrorCode::UnknownElement, "element index out of range for this poset");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term& t, ElementId e) { return t.element < e; });
    return (it != terms_.end() && it->element == i) ? it->coeff : 0;
  }

  Coeff coefficient(std::string_view name) const { return coefficient(host_.id(name)); }

  ElementSet support() const {
    ElementSet s;
    s.reserve(terms_.size());
    for (const auto& t : terms_) s.push_back(t.element);
    return s;
  }

  std::vector<Coeff> dense() const {
    std::vector<Coeff> out(host_.size(), 0);
    for (const auto& t : terms_) out[t.element.index] = t.coeff;
    return out;
  }

  /// Sum of absolute coefficients.
  Coeff l1_norm() const {
    Coeff total = 0;
    for (const auto& t : terms_) total = detail::checked_add(total, detail::checked_abs(t.coeff));
    return total;
  }

  GroupElement operator-() const {
    GroupElement r(host_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.element, detail::checked_neg(t.coeff)});
    return r;
  }

  friend GroupElement operator+(const GroupElement& x, const GroupElement& y) { return combine(x, y, false); }
  friend GroupElement operator-(const GroupElement& x, const GroupElement& y) { return combine(x, y, true); }

  GroupElement& operator+=(const GroupElement& y) { return *this = *this + y; }
  GroupElement& operator-=(const GroupElement& y) { return *this = *this - y; }

  friend GroupElement scale(Coeff n, const GroupElement& x) {
    GroupElement r(x.host_);
    if (n == 0) return r;
    r.terms_.reserve(x.terms_.size());
    for (const auto& t : x.terms_) r.terms_.push_back({t.element, detail::checked_mul(n, t.coeff)});
    return r;
  }

  /// Equal iff same host and same coefficients.
  friend bool operator==(const GroupElement& x, const GroupElement& y) {
    return x.host_.same_host(y.host_) && x.terms_ == y.terms_;
  }

 private:
  static void require_same_host(const GroupElement& x, const GroupElement& y) {
    if (!x.host_.same_host(y.host_)) throw Error(ErrorCode::HostMismatch, "group elements live over different posets");
  }

  static GroupElement combine(const GroupElement& x, const GroupElement& y, bool subtract) {
    require_same_host(x, y);
    GroupElement r(x.host_);
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    auto a = x.terms_.begin();
    auto b = y.terms_.begin();
    auto rhs = [&](Coeff c) { return subtract ? detail::checked_neg(c) : c; };
    while (a != x.terms_.end() || b != y.terms_.end()) {
      if (b == y.terms_.end() || (a != x.terms_.end() && a->element < b->element)) {
        r.terms_.push_back(*a++);
      } else if (a == x.terms_.end() || b->element < a->element) {
        r.terms_.push_back({b->element, rhs(b->coeff)});
        ++b;
      } else {
        Coeff c = subtract ? detail::checked_sub(a->coeff, b->coeff) : detail::checked_add(a->coeff, b->coeff);
        if (c != 0) r.terms_.push_back({a->element, c});
        ++a;
        ++b;
      }
    }
    return r;
  }

  Poset host_;
  std::vector<Term> terms_;
};

inline GroupElement add(const GroupElement& x, const GroupElement& y) { return x + y; }
inline GroupElement negate(const GroupElement& x) { return -x; }

// Expression text:
//   expr := ['-'] term (('+' | '-') term)*  |  "0"
//   term := [uint '*'] ident
// Whitespace between tokens is ignored.

namespace detail {

class ExprParser {
 public:
  ExprParser(const Poset& host, std::string_view text) : host_(host), text_(text) {}

  GroupElement parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    if (peek() == '0') {
      std::size_t save = pos_;
      ++pos_;
      skip_ws();
      if (at_end()) return GroupElement::zero(host_);
      pos_ = save;
    }
    std::vector<Term> terms;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    terms.push_back(term(negative));
    for (;;) {
      skip_ws();
      if (at_end()) break;
      char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      terms.push_back(term(op == '-'));
    }
    return GroupElement::from_terms(host_, terms);
  }

 private:
  Term term(bool negative) {
    skip_ws();
    if (at_end()) fail("expected a term");
    std::uint64_t magnitude = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      // Up to 2^63 so that the most negative coefficient still parses.
      constexpr std::uint64_t limit = std::uint64_t{1} << 63;
      magnitude = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        std::uint64_t digit = static_cast<std::uint64_t>(peek() - '0');
        if (magnitude > (limit - digit) / 10) throw Error(ErrorCode::Overflow, "coefficient out of range");
        magnitude = magnitude * 10 + digit;
        ++pos_;
      }
      skip_ws();
      if (at_end() || peek() != '*') fail("expected '*' after coefficient");
      ++pos_;
      skip_ws();
    }
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string_view ident = text_.substr(start, pos_ - start);
    if (!is_valid_element_name(ident)) {
      pos_ = start;
      fail("expected an element name");
    }
    ElementId id = host_.id(ident);
    if (!negative && magnitude == (std::uint64_t{1} << 63)) throw Error(ErrorCode::Overflow, "coefficient out of range");
    const Coeff coeff = negative ? static_cast<Coeff>(~magnitude + 1) : static_cast<Coeff>(magnitude);
    return {id, coeff};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Syntax, what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  const Poset& host_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GroupElement parse_expr(const Poset& host, std::string_view text) {
  return detail::ExprParser(host, text).parse();
}

/// Canonical text: positive terms before negative ones, declaration order
/// within each group, unit coefficients without "1*", zero as "0".
inline std::string format_expr(const GroupElement& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Positive terms first, then negative ones, each in declaration order.
  for (bool negative : {false, true})
    for (const auto& t : x.terms()) {
      if ((t.coeff < 0) != negative) continue;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      // Magnitude as unsigned so that INT64_MIN formats correctly.
      std::uint64_t magnitude = negative ? (~static_cast<std::uint64_t>(t.coeff) + 1) : static_cast<std::uint64_t>(t.coeff);
      if (magnitude != 1) out += std::to_string(magnitude) + "*";
      out += x.host().name(t.element);
      first = false;
    }
  return out;
}

}  // namespace dimgroup

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dimgroup/error.hpp"

namespace dimgroup {

/// Position of an element in its poset's declaration order.
struct ElementId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

/// A subset of poset elements, sorted by declaration order without repeats.
using ElementSet = std::vector<ElementId>;

/// Letters, digits and underscores, starting with a letter.
inline bool is_valid_element_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!is_alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return is_alpha(c) || is_digit(c) || c == '_'; });
}

namespace detail {

struct PosetCore {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> lookup;
  std::vector<char> leq;  // row-major n*n, leq[i*n+j] <=> i <= j

  std::size_t size() const noexcept { return names.size(); }
  bool at(std::size_t i, std::size_t j) const noexcept { return leq[i * names.size() + j] != 0; }
};

}  // namespace detail

/// Finite partially ordered set with named elements.
///
/// Immutable after construction. Copies share the underlying storage, and
/// two handles denote the same host (for group arithmetic) iff they share it.
class Poset {
 public:
  Poset() : core_(std::make_shared<detail::PosetCore>()) {}

  /// Reflexive-transitive closure of `relations` over `names`, in declaration order.
  /// Throws DuplicateElement, UnknownElement, Syntax (malformed name) or Cycle.
  static Poset build(std::span<const std::string> names,
                     std::span<const std::pair<std::string, std::string>> relations) {
    auto core = std::make_shared<detail::PosetCore>();
    core->names.reserve(names.size());
    for (const auto& name : names) {
      if (!is_valid_element_name(name)) throw Error(ErrorCode::Syntax, "malformed element name '" + name + "'");
      auto [it, inserted] = core->lookup.emplace(name, static_cast<std::uint32_t>(core->names.size()));
      if (!inserted) throw Error(ErrorCode::DuplicateElement, "duplicate element '" + name + "'");
      core->names.push_back(name);
    }
    const std::size_t n = core->names.size();
    core->leq.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) core->leq[i * n + i] = 1;
    for (const auto& [lo, hi] : relations) {
      auto find = [&](const std::string& name) {
        auto it = core->lookup.find(name);
        if (it == core->lookup.end()) throw Error(ErrorCode::UnknownElement, "unknown element '" + name + "'");
        return static_cast<std::size_t>(it->second);
      };
      core->leq[find(lo) * n + find(hi)] = 1;
    }
    close_transitively(core->leq, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (core->leq[i * n + j] && core->leq[j * n + i]) {
          throw Error(ErrorCode::Cycle, "relation has a cycle through '" + core->names[i] + "' and '" +
                                            core->names[j] + "'");
        }
      }
    }
    return Poset(std::move(core));
  }

  /// Construct from an explicit order matrix (row-major, `leq[i*n+j]` means i <= j).
  /// The matrix is closed first; Cycle is thrown if antisymmetry fails.
  static Poset from_matrix(std::vector<std::string> names, std::vector<char> leq) {
    const std::size_t n = names.size();
    if (leq.size() != n * n) throw Error(ErrorCode::Usage, "order matrix has the wrong dimension");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && leq[i * n + j]) pairs.emplace_back(names[i], names[j]);
    return build(names, pairs);
  }

  std::size_t size() const noexcept { return core_->size(); }
  bool empty() const noexcept { return core_->size() == 0; }

  const std::vector<std::string>& names() const noexcept { return core_->names; }
  const std::string& name(ElementId id) const { return core_->names.at(id.index); }

  std::optional<ElementId> find(std::string_view name) const {
    auto it = core_->lookup.find(std::string(name));
    if (it == core_->lookup.end()) return std::nullopt;
    return ElementId{it->second};
  }

  ElementId id(std::string_view name) const {
    if (auto found = find(name)) return *found;
    throw Error(ErrorCode::UnknownElement, "unknown element '" + std::string(name) + "'");
  }

  bool contains(ElementId id) const noexcept { return id.index < size(); }

  /// i <= j. Ids must belong to this poset.
  bool leq(ElementId i, ElementId j) const noexcept { return core_->at(i.index, j.index); }
  bool less(ElementId i, ElementId j) const noexcept { return i != j && core_->at(i.index, j.index); }
  bool comparable(ElementId i, ElementId j) const noexcept { return leq(i, j) || leq(j, i); }

  /// Number of pairs (i, j) with i <= j, reflexive pairs included.
  std::size_t relation_size() const noexcept {
    return static_cast<std::size_t>(std::count(core_->leq.begin(), core_->leq.end(), char{1}));
  }

  /// All strict pairs i < j, lexicographic in declaration order.
  std::vector<std::pair<ElementId, ElementId>> strict_pairs() const {
    std::vector<std::pair<ElementId, ElementId>> out;
    for (std::uint32_t i = 0; i < size(); ++i)
      for (std::uint32_t j = 0; j < size(); ++j)
        if (less(ElementId{i}, ElementId{j})) out.emplace_back(ElementId{i}, ElementId{j});
    return out;
  }

  ElementSet elements() const {
    ElementSet all(size());
    for (std::uint32_t i = 0; i < size(); ++i) all[i] = ElementId{i};
    return all;
  }

  /// Sorts, deduplicates and range-checks a caller-supplied subset.
  ElementSet normalize(std::span<const ElementId> s) const {
    ElementSet out(s.begin(), s.end());
    for (auto id : out)
      if (!contains(id)) throw Error(ErrorCode::UnknownElement, "element index out of range for this poset");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  ElementSet maximal_in(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    ElementSet out;
    for (auto i : s) {
      bool dominated = std::any_of(s.begin(), s.end(), [&](ElementId j) { return less(i, j); });
      if (!dominated) out.push_back(i);
    }
    return out;
  }

  ElementSet minimal_in(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    ElementSet out;
    for (auto i : s) {
      bool dominates = std::any_of(s.begin(), s.end(), [&](ElementId j) { return less(j, i); });
      if (!dominates) out.push_back(i);
    }
    return out;
  }

  bool is_antichain(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (comparable(s[a], s[b])) return false;
    return true;
  }

  bool is_antichain() const { return is_antichain(elements()); }

  /// First minimal element, in declaration order, that is not maximal.
  /// Empty for antichains (including the empty poset).
  std::optional<ElementId> minimal_non_maximal() const {
    for (std::uint32_t i = 0; i < size(); ++i) {
      const ElementId m{i};
      bool has_below = false;
      bool has_above = false;
      for (std::uint32_t j = 0; j < size(); ++j) {
        has_below = has_below || less(ElementId{j}, m);
        has_above = has_above || less(m, ElementId{j});
      }
      if (!has_below && has_above) return m;
    }
    return std::nullopt;
  }

  bool is_cofinal(std::span<const ElementId> subset) const {
    const ElementSet f = normalize(subset);
    for (std::uint32_t i = 0; i < size(); ++i) {
      bool covered = std::any_of(f.begin(), f.end(), [&](ElementId j) { return leq(ElementId{i}, j); });
      if (!covered) return false;
    }
    return true;
  }

  /// The maximal elements; cofinal in every finite poset.
  ElementSet canonical_cofinal() const { return maximal_in(elements()); }

  ElementSet up_closure(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    ElementSet out;
    for (std::uint32_t j = 0; j < size(); ++j)
      if (std::any_of(s.begin(), s.end(), [&](ElementId i) { return leq(i, ElementId{j}); }))
        out.push_back(ElementId{j});
    return out;
  }

  ElementSet down_closure(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    ElementSet out;
    for (std::uint32_t j = 0; j < size(); ++j)
      if (std::any_of(s.begin(), s.end(), [&](ElementId i) { return leq(ElementId{j}, i); }))
        out.push_back(ElementId{j});
    return out;
  }

  bool is_upper_set(std::span<const ElementId> subset) const { return normalize(subset) == up_closure(subset); }
  bool is_lower_set(std::span<const ElementId> subset) const { return normalize(subset) == down_closure(subset); }

  /// Induced order on `subset`, keeping declaration order.
  Poset restrict(std::span<const ElementId> subset) const {
    const ElementSet s = normalize(subset);
    auto core = std::make_shared<detail::PosetCore>();
    const std::size_t k = s.size();
    core->leq.assign(k * k, 0);
    for (std::size_t a = 0; a < k; ++a) {
      core->names.push_back(name(s[a]));
      core->lookup.emplace(core->names.back(), static_cast<std::uint32_t>(a));
      for (std::size_t b = 0; b < k; ++b) core->leq[a * k + b] = leq(s[a], s[b]) ? 1 : 0;
    }
    return Poset(std::move(core));
  }

  /// Checks reflexivity, antisymmetry and transitivity of the stored relation.
  bool satisfies_order_axioms() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!core_->at(i, i)) return false;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && core_->at(i, j) && core_->at(j, i)) return false;
        for (std::size_t k = 0; k < n; ++k)
          if (core_->at(i, j) && core_->at(j, k) && !core_->at(i, k)) return false;
      }
    }
    return true;
  }

  /// Same storage, i.e. the same host for group elements.
  bool same_host(const Poset& other) const noexcept { return core_ == other.core_; }

  /// Structural equality: same names in the same order and the same relation.
  friend bool operator==(const Poset& a, const Poset& b) {
    return a.core_ == b.core_ || (a.core_->names == b.core_->names && a.core_->leq == b.core_->leq);
  }

  const std::vector<char>& order_matrix() const noexcept { return core_->leq; }

  /// One-line form in the poset file syntax, e.g. "elem a b c; lt a b; lt a c".
  std::string to_string() const {
    std::string out = "elem";
    for (const auto& n : names()) out += " " + n;
    for (const auto& [i, j] : strict_pairs()) out += "; lt " + name(i) + " " + name(j);
    return out;
  }

 private:
  explicit Poset(std::shared_ptr<const detail::PosetCore> core) : core_(std::move(core)) {}

  static void close_transitively(std::vector<char>& leq, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (leq[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq[k * n + j]) leq[i * n + j] = 1;
  }

  std::shared_ptr<const detail::PosetCore> core_;
};

}  // namespace dimgroup

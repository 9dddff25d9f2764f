#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "wfsynth/ontology.hpp"

namespace wfsynth {

/// Set of type-taxonomy terms available at one point of a workflow.
/// Stored as a sorted, duplicate-free vector; states stay tiny in practice.
class TypeState {
 public:
  TypeState() = default;
  TypeState(std::initializer_list<TermRef> refs) : items_(refs) { normalize(); }
  explicit TypeState(std::vector<TermRef> refs) : items_(std::move(refs)) { normalize(); }

  void insert(TermRef ref) {
    const auto it = std::lower_bound(items_.begin(), items_.end(), ref);
    if (it == items_.end() || *it != ref) items_.insert(it, ref);
  }

  bool contains(TermRef ref) const { return std::binary_search(items_.begin(), items_.end(), ref); }

  /// True when every element of this state is also in `other`.
  bool subset_of(const TypeState& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<TermRef>& items() const { return items_; }

  friend bool operator==(const TypeState&, const TypeState&) = default;
  friend auto operator<=>(const TypeState& a, const TypeState& b) { return a.items_ <=> b.items_; }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<TermRef> items_;
};

}  // namespace wfsynth

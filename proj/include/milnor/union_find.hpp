#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace milnor {

// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), classes_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --classes_;
    return true;
  }

  bool connected(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }
  std::size_t class_count() const noexcept { return classes_; }
  std::size_t size() const noexcept { return parent_.size(); }

  /// Class label per element, numbered 0.. in order of first appearance.
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> label(parent_.size());
    std::vector<std::size_t> root_label(parent_.size(), parent_.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t r = find(i);
      if (root_label[r] == parent_.size()) root_label[r] = next++;
      label[i] = root_label[r];
    }
    return label;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t classes_;
};

}  // namespace milnor

#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace coarsedim::detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0U); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  // Dense labels 0.. in order of first occurrence, i.e. blocks sorted by
  // their smallest element.
  std::vector<std::uint32_t> labels() {
    std::vector<std::uint32_t> root_label(parent_.size(), UINT32_MAX);
    std::vector<std::uint32_t> out(parent_.size());
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < parent_.size(); ++i) {
      auto& l = root_label[find(i)];
      if (l == UINT32_MAX) l = next++;
      out[i] = l;
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace coarsedim::detail

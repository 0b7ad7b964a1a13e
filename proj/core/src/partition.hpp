#pragma once

#include <cstddef>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

namespace toposfactor::detail {

// Union-find over 0..n-1 whose class labels are normalized: classes are
// numbered in order of their least member.
class Partition {
 public:
  explicit Partition(std::size_t n) : n_(n), sets_(n) {}

  void unite(std::size_t a, std::size_t b) {
    if (sets_.find_set(a) != sets_.find_set(b)) {
      sets_.union_set(a, b);
      ++merges_;
    }
  }
  bool same(std::size_t a, std::size_t b) { return sets_.find_set(a) == sets_.find_set(b); }
  std::size_t size() const noexcept { return n_; }
  std::size_t num_classes() const noexcept { return n_ - merges_; }

  // labels[i] = index of the class of i; classes ordered by least element.
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> root_label(n_, static_cast<std::size_t>(-1));
    std::vector<std::size_t> out(n_);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t r = sets_.find_set(i);
      if (root_label[r] == static_cast<std::size_t>(-1)) root_label[r] = next++;
      out[i] = root_label[r];
    }
    return out;
  }

 private:
  std::size_t n_;
  std::size_t merges_ = 0;
  boost::disjoint_sets_with_storage<> sets_;
};

}  // namespace toposfactor::detail

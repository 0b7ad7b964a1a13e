#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace toposfactor::detail {

// Makes the names pairwise distinct by appending #2, #3, ... to repeats.
inline void make_unique(std::vector<std::string>& names) {
  std::unordered_map<std::string, int> count;
  for (const auto& n : names) ++count[n];
  std::unordered_map<std::string, int> next;
  std::unordered_map<std::string, bool> taken;
  for (const auto& n : names) taken[n] = true;
  for (auto& n : names) {
    if (count[n] <= 1) continue;
    int& k = next[n];
    if (k == 0) {
      k = 1;
      continue;
    }
    std::string candidate;
    do {
      candidate = n + "#" + std::to_string(++k);
    } while (taken.count(candidate));
    taken[candidate] = true;
    n = candidate;
  }
}

}  // namespace toposfactor::detail

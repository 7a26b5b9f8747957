#pragma once

#include <algorithm>
#include <vector>

#include "entangleid/types.hpp"

namespace entangleid::detail {

// Enumerates every nonincreasing composition of `total` into `parts`
// nonnegative integer parts, in ascending lexicographic order.  For
// nonincreasing sequences that order starts at the most uniform split
// (ceil/floor distribution) and ends at (total, 0, ..., 0), so callers that
// take the first acceptable composition get the flattest one.  The callback
// returns true to stop early.
template <typename Fn>
bool for_each_descending_composition(int total, int parts, Fn&& fn) {
  std::vector<int> c(static_cast<std::size_t>(parts));
  // rec(slot, remaining, cap): fill c[slot..] with parts <= cap summing to
  // remaining, smallest feasible first part first.
  auto rec = [&](auto&& self, int slot, int remaining, int cap) -> bool {
    if (slot == parts - 1) {
      if (remaining > cap) return false;
      c[static_cast<std::size_t>(slot)] = remaining;
      return fn(static_cast<const std::vector<int>&>(c));
    }
    int slots_left = parts - slot;
    // First part must cover at least its even share, and never exceeds cap.
    int lo = (remaining + slots_left - 1) / slots_left;
    for (int v = lo; v <= std::min(cap, remaining); ++v) {
      c[static_cast<std::size_t>(slot)] = v;
      if (self(self, slot + 1, remaining - v, v)) return true;
    }
    return false;
  };
  return rec(rec, 0, total, total);
}

}  // namespace entangleid::detail

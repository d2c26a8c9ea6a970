#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "circuit_route/audit.hpp"
#include "circuit_route/errors.hpp"

namespace circuit_route {

std::size_t cut(std::span<const Interval> intervals, std::int64_t t) {
  return static_cast<std::size_t>(std::count_if(
      intervals.begin(), intervals.end(),
      [t](const Interval& iv) { return iv.alpha <= t && t <= iv.beta; }));
}

namespace {

// A current (possibly merged) interval; its left endpoint is the alpha of
// original interval `left` and its right endpoint the beta of `right`.
struct Live {
  std::int64_t lo;
  std::int64_t hi;
  std::size_t left;
  std::size_t right;
};

bool intersects(const Live& a, const Live& b) { return a.lo <= b.hi && b.lo <= a.hi; }
bool contains(const Live& outer, const Live& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

}  // namespace

std::vector<std::size_t> interval_permutation(std::span<const Interval> intervals) {
  std::set<std::int64_t> endpoints;
  for (const Interval& iv : intervals) {
    if (iv.alpha >= iv.beta) throw InputError("interval must satisfy alpha < beta");
    if (!endpoints.insert(iv.alpha).second || !endpoints.insert(iv.beta).second) {
      throw InputError("intervals share an endpoint");
    }
  }

  const std::size_t q = intervals.size();
  std::vector<std::size_t> pi(q, q);
  std::vector<Live> live;
  live.reserve(q);
  for (std::size_t j = 0; j < q; ++j) live.push_back({intervals[j].alpha, intervals[j].beta, j, j});

  while (!live.empty()) {
    // Minimal interval: contained in every interval it meets.
    std::size_t minimal = live.size();
    for (std::size_t a = 0; a < live.size() && minimal == live.size(); ++a) {
      bool ok = true;
      for (std::size_t b = 0; b < live.size() && ok; ++b) {
        if (a != b && intersects(live[a], live[b]) && !contains(live[b], live[a])) ok = false;
      }
      if (ok) minimal = a;
    }
    if (minimal < live.size()) {
      pi[live[minimal].left] = live[minimal].right;
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(minimal));
      continue;
    }

    // Crossing pair lo_j < lo_i < hi_j < hi_i with the smallest gap hi_j - lo_i.
    std::size_t best_i = live.size();
    std::size_t best_j = live.size();
    std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = 0; j < live.size(); ++j) {
        const Live& I = live[i];
        const Live& J = live[j];
        if (J.lo < I.lo && I.lo < J.hi && J.hi < I.hi && J.hi - I.lo < best_gap) {
          best_gap = J.hi - I.lo;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i == live.size()) throw std::logic_error("interval pairing found no crossing pair");
    const Live I = live[best_i];
    const Live J = live[best_j];
    pi[I.left] = J.right;
    const Live merged{J.lo, I.hi, J.left, I.right};
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::max(best_i, best_j)));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::min(best_i, best_j)));
    live.push_back(merged);
  }
  return pi;
}

bool verify_interval_permutation(std::span<const Interval> intervals,
                                 std::span<const std::size_t> pi) {
  const std::size_t q = intervals.size();
  if (pi.size() != q) return false;
  std::vector<bool> hit(q, false);
  for (std::size_t j = 0; j < q; ++j) {
    if (pi[j] >= q || hit[pi[j]]) return false;
    hit[pi[j]] = true;
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (cut(intervals, intervals[j].alpha) != cut(intervals, intervals[pi[j]].beta)) return false;
  }
  return true;
}

}  // namespace circuit_route

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace bwf {

// 0 means "all cores".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static block partition of [0, n). Each worker owns a contiguous index range
// and must only write slots it owns; with that discipline results are
// bitwise identical for every thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const int nt = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                                       n == 0 ? 1 : n);
  if (nt <= 1) {
    fn(static_cast<std::size_t>(0), n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  const std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
  for (int t = 0; t < nt; ++t) {
    const std::size_t b = std::min(n, static_cast<std::size_t>(t) * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bwf

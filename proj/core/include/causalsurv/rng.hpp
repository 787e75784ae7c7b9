#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace causalsurv {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a base seed and a path of tags,
// e.g. (seed, {tree_index}) or (seed, {leaf_id, arm}). Scheduling order of
// consumers never affects the streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t p : path) {
    h = mix64(h ^ mix64(p));
  }
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return std::mt19937_64(derive_seed(seed, path));
}

// Partial Fisher-Yates: deterministically pick k distinct elements from pool.
// The pool is reordered in place; the selection is pool[0..k).
template <typename T>
void partial_shuffle(std::vector<T>& pool, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = pool.size();
  if (k > n) k = n;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
}

}  // namespace causalsurv

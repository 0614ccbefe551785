#pragma once

#include <cstdint>
#include <cmath>

namespace specp {

// Stateless counter-based generator built on the splitmix64 finalizer.
// Every draw is a pure function of (key, counter), so streams can be
// split by deriving new keys and trials can run in any order.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Key derivation: hash(master, label). Used for per-trial seeds so that
// trial k is independent of whether trials 0..k-1 ever ran.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t label) {
  return splitmix64(splitmix64(key) ^ splitmix64(label + 0x632be59bd9b4e019ULL));
}

}  // namespace rng

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return rng::splitmix64(key_ ^ rng::splitmix64(counter_++)); }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a Box-Muller log argument.
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_gaussian() {
    const double u = next_unit_open();
    const double v = next_unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
  }

  CounterRng split(std::uint64_t label) const { return CounterRng(rng::derive(key_, label)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace specp

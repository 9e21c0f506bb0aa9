#pragma once

#include <cmath>
#include <cstdint>

namespace brw {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Per-stream seed derived from a master seed; stream 0, 1, 2, ... are
// decorrelated even for adjacent master seeds.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= 0x6a09e667f3bcc909ull * (stream + 1);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9e3779b97f4a7c15ull);
}

// Uniform in (0, 1]; safe as an argument to log().
template <class Engine>
double uniform01(Engine& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

template <class Engine>
double exponential_sample(Engine& rng, double rate) {
  return -std::log(uniform01(rng)) / rate;
}

}  // namespace brw

#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hetnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream per (seed, trial): results do not depend on how trials
// are partitioned across threads.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~trial)));
}

inline const std::string& rng_description() {
  static const std::string name = "mt19937_64 per trial, seeded by splitmix64(seed, trial)";
  return name;
}

}  // namespace hetnet

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace progmerge {

// Seeded source of randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; uniform and normal variates are derived
// here rather than through <random> distributions, whose algorithms vary
// between standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+box-muller/1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal(double mean, double sd);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace progmerge

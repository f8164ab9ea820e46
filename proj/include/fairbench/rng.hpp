#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

// Seed derivation and portable sampling helpers. Every random stream in the
// toolkit is keyed by (seed, tag...) through `derive`, so results never
// depend on the order in which work is scheduled.
namespace fairbench::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// derive(seed, a, b) = splitmix64(splitmix64(seed ^ f(a)) ^ f(b)) ...
constexpr std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t state = splitmix64(seed);
  for (std::uint64_t tag : tags) state = splitmix64(state ^ splitmix64(tag + 0x632BE59BD9B4E019ULL));
  return state;
}

// 64-bit FNV-1a; used to turn names into derivation tags.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform integer in [0, n); n > 0. Rejection keeps it exactly uniform.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return static_cast<std::size_t>(x % bound);
    }
  }

 private:
  std::mt19937_64 engine_;
};

template <typename T>
void shuffle(std::span<T> values, Stream& stream) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = stream.uniform_index(i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace fairbench::rng

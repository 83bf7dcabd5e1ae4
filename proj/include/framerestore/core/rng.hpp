#ifndef FRAMERESTORE_CORE_RNG_HPP
#define FRAMERESTORE_CORE_RNG_HPP

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace framerestore {

// All randomness in the torch-free modules flows through mt19937_64 with the
// draw rules below. std::shuffle and uniform_int_distribution are
// implementation-defined, so they are deliberately avoided: identical seeds
// must give identical artifacts on every platform.

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t state = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

// Stable per-item seed: hash(global_seed, tag).
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag) {
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>((global_seed >> (8 * i)) & 0xff);
  return fnv1a64(tag, fnv1a64(std::string_view(seed_bytes, 8)));
}

// Uniform draw in [0, n). Modulo reduction: biased by < 2^-53 for the n used
// here, and above all pinned.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  return n <= 1 ? 0 : rng() % n;
}

inline int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform in [0, 1) with 53 random bits.
inline double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline double draw_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * draw_unit(rng);
}

// Fisher-Yates with the pinned draw rule.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// mt19937_64 stream formatting is specified by the standard, which makes it a
// portable serialization for resumable training state.
inline std::string rng_state_to_string(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

inline std::mt19937_64 rng_state_from_string(const std::string& text) {
  std::mt19937_64 rng;
  std::istringstream in(text);
  in >> rng;
  return rng;
}

}  // namespace framerestore

#endif

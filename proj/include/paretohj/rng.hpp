#ifndef PARETOHJ_RNG_HPP
#define PARETOHJ_RNG_HPP

#include <cstdint>
#include <limits>
#include <string_view>

namespace paretohj {

/// Counter-based generator: the i-th draw of a stream is
/// splitmix64_mix(key + i * golden). Streams are keyed by (seed, purpose), so
/// every experiment draws from independent, platform-fixed sequences.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// FNV-1a; used only to turn a purpose label into a stream key.
  static constexpr std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  constexpr CounterRng(std::uint64_t seed, std::string_view purpose)
      : key_(mix(mix(seed) ^ hash_label(purpose))) {}

  /// Sub-stream, e.g. one per seed replicate or per worker.
  constexpr CounterRng split(std::uint64_t index) const {
    CounterRng child(*this);
    child.key_ = mix(key_ ^ mix(index + kGolden));
    child.counter_ = 0;
    return child;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace paretohj

#endif  // PARETOHJ_RNG_HPP

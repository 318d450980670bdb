#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace wug::num {

// Purposes for which independent random streams are derived from one master
// seed. Adding a purpose never changes the streams of existing ones.
enum class StreamPurpose : std::uint64_t {
  kInit = 1,
  kDropout = 2,
  kShuffle = 3,
  kSampling = 4,
  kSynthetic = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

// mt19937_64 with portable conversions. std::uniform_*_distribution differ
// between standard libraries, so draws are derived from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng derive(std::uint64_t master_seed, StreamPurpose purpose,
                    std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wug::num

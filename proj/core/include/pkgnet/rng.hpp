#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace pkgnet {

// Stafford's mix13 finalizer. Used for seed derivation only.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent seed from a master seed. `stream` tags the consumer
// (rewiring, Louvain restart, replicate, ...) and `index` the member within
// that stream, so every ensemble member gets its own generator and results
// cannot depend on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ mix64(stream + 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (index + 0x2545f4914f6cdd1dULL));
  return h;
}

namespace seed_stream {
inline constexpr std::uint64_t observed = 1;
inline constexpr std::uint64_t rewire = 2;
inline constexpr std::uint64_t null_statistic = 3;
inline constexpr std::uint64_t louvain_restart = 4;
inline constexpr std::uint64_t replicate = 5;
inline constexpr std::uint64_t release = 6;
}  // namespace seed_stream

// mt19937_64 with portable sampling helpers. The raw engine sequence is
// pinned by the standard; std::uniform_int_distribution and friends are not,
// so bounded draws and shuffles are done by hand to keep outputs
// bit-reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from [0, n). n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift rejection method.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

  // Fisher-Yates with the portable bounded draw above.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace pkgnet

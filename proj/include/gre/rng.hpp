#ifndef GRE_RNG_HPP
#define GRE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>

#include "gre/errors.hpp"

namespace gre {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-style random stream built on splitmix64.
///
/// A stream is a value; `substream(words...)` derives an independent child
/// keyed by the given words. Samplers key one substream per edge, per graph,
/// per replicate, so the draw for an edge never depends on evaluation order
/// or thread count.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : state_(detail::mix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

  RandomStream substream(std::uint64_t a) const {
    return RandomStream(FromState{}, detail::mix64(state_ ^ detail::mix64(a)));
  }
  RandomStream substream(std::uint64_t a, std::uint64_t b) const {
    return substream(a).substream(b);
  }
  RandomStream substream(std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) const {
    return substream(a).substream(b).substream(c);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Exponential with the given mean (theta parameterization).
  double next_exponential(double mean) { return -mean * std::log(next_unit()); }

  /// Poisson with the given mean. Knuth's product method; means >= 30 are
  /// split by additivity to keep the product away from underflow.
  long next_poisson(double mean) {
    if (mean < 0.0) throw InputError("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    long total = 0;
    while (mean >= 30.0) {
      double half = mean * 0.5;
      total += next_poisson_small(half);
      mean -= half;
    }
    return total + next_poisson_small(mean);
  }

  /// Categorical draw over `probs` (must sum to ~1); returns 0-based index.
  int next_categorical(std::span<const double> probs) {
    double u = next_unit();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u <= acc) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  struct FromState {};
  RandomStream(FromState, std::uint64_t raw) : state_(raw) {}

  long next_poisson_small(double mean) {
    const double limit = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_unit();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_;
};

}  // namespace gre

#endif

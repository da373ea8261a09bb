#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace auginf {

/// Counter-based, splittable random stream.
///
/// The i-th draw of a stream is a pure function of (key, i), so a stream can
/// be indexed directly with `at()` and child streams derived with `split()`
/// never overlap their parent. Everything stochastic in the library takes an
/// explicit `Rng`, which makes every run bit-reproducible from its seed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  /// Child stream identified by `tag`; independent of this stream's counter.
  Rng split(std::uint64_t tag) const { return Rng(key_, tag); }
  Rng split(std::initializer_list<std::uint64_t> tags) const {
    Rng r = *this;
    for (auto t : tags) r = r.split(t);
    return r;
  }

  /// Raw 64-bit draw at an absolute counter position.
  std::uint64_t at(std::uint64_t counter) const {
    return mix(mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL) ^ key_);
  }
  /// Uniform in [0, 1) at an absolute counter position.
  double uniform_at(std::uint64_t counter) const { return to_unit(at(counter)); }

  std::uint64_t next_u64() { return at(counter_++); }
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  double uniform() { return to_unit(next_u64()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

  std::uint64_t counter() const { return counter_; }
  std::uint64_t key() const { return key_; }

 private:
  Rng(std::uint64_t parent_key, std::uint64_t tag)
      : key_(mix(parent_key ^ mix(tag + 0xbb67ae8584caa73bULL))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static double to_unit(std::uint64_t v) { return static_cast<double>(v >> 11) * 0x1.0p-53; }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stable 64-bit hash of a string, used to turn sample ids into stream tags.
std::uint64_t hash_tag(const char* s, std::size_t len);

}  // namespace auginf

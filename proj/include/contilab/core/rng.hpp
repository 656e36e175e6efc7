#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace contilab {

/// SplitMix64 finalizer. Bijective avalanche mix of a 64-bit word.
std::uint64_t mix64(std::uint64_t z);

/// Order-sensitive combination of two hashes.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

/// FNV-1a over the bytes, then mixed.
std::uint64_t hash_string(std::string_view s);

/// Identifies one reproducible random stream. Streams are splittable: a child
/// is derived by hashing the parent stream_id with a role tag.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngStream child(std::string_view tag) const;
  RngStream child(std::uint64_t tag) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Counter-based engine: the n-th output is a keyed hash of n, so the state is
/// just (key, counter). Satisfies UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit CounterEngine(const RngStream& stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
};

/// Random variates drawn from a single stream.
class Rng {
 public:
  explicit Rng(const RngStream& stream);

  const RngStream& stream() const { return stream_; }
  CounterEngine& engine() { return engine_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  double normal(double mean, double sd);
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// Log of a Gamma(shape, 1) draw; stays finite for very small shapes.
  double log_gamma_variate(double shape);
  double beta(double a, double b);
  bool bernoulli(double p);
  /// Uniform on {0, ..., n-1}.
  std::size_t uniform_index(std::size_t n);
  /// Number of failures before the first success of Bernoulli(p) trials.
  std::uint64_t geometric(double p);

 private:
  RngStream stream_;
  CounterEngine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace contilab

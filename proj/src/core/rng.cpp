#include "contilab/core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace contilab {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a * 0x9e3779b97f4a7c15ULL + mix64(b + 0x632be59bd9b4e019ULL));
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

RngStream RngStream::child(std::string_view tag) const { return child(hash_string(tag)); }

RngStream RngStream::child(std::uint64_t tag) const {
  return RngStream{seed, hash_combine(stream_id, tag)};
}

CounterEngine::CounterEngine(const RngStream& stream)
    : key0_(hash_combine(stream.seed, stream.stream_id)),
      key1_(mix64(hash_combine(stream.stream_id, ~stream.seed))) {}

CounterEngine::result_type CounterEngine::operator()() {
  ++counter_;
  // Two keyed rounds over the counter.
  const std::uint64_t x = mix64(counter_ * 0x9e3779b97f4a7c15ULL + key0_);
  return mix64(x ^ key1_);
}

Rng::Rng(const RngStream& stream) : stream_(stream), engine_(stream) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(engine_); }

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::log_gamma_variate(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape >= 1.0) return std::log(gamma(shape));
  // Gamma(a) = Gamma(a + 1) * U^(1/a), done in log space.
  const double g = gamma(shape + 1.0);
  double u = uniform();
  while (u == 0.0) u = uniform();
  return std::log(g) + std::log(u) / shape;
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over an empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

std::uint64_t Rng::geometric(double p) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("geometric probability must be in (0, 1]");
  if (p == 1.0) return 0;
  const double u = 1.0 - uniform();  // (0, 1]
  const double k = std::floor(std::log(u) / std::log1p(-p));
  if (k >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(k);
}

}  // namespace contilab

#include "nsplab/rng.hpp"

#include <cmath>
#include <numbers>

#include "nsplab/errors.hpp"

namespace nsplab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + kGolden) ^ (b + kStreamSalt + (a << 6) + (a >> 2)));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(mix64(seed ^ kGolden) ^ mix64(stream_id + kStreamSalt))) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  // Two finalizer rounds so neighbouring keys do not produce shifted copies
  // of each other's sequence.
  return mix64(mix64(key_ + counter_ * kGolden) ^ key_);
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(theta);
  has_cached_gaussian_ = true;
  return r * std::cos(theta);
}

double RngStream::rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

std::uint64_t RngStream::below(std::uint64_t bound) {
  require(bound > 0, "RngStream::below: bound must be positive");
  // Reject the top partial block so the modulus is exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

RngStream RngStream::derive(std::uint64_t tag) const { return RngStream(seed_, hash_combine(stream_id_, tag)); }

}  // namespace nsplab

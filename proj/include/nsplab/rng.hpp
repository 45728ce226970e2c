#pragma once

#include <cstdint>
#include <limits>

namespace nsplab {

/// Counter-based random stream. Draw number i of stream (seed, stream_id) is a
/// pure function of (seed, stream_id, i), so streams can be handed to worker
/// threads and replayed exactly.
///
/// Gaussians use Box-Muller; the second variate of each pair is cached, so a
/// stream's Gaussian sequence is identical no matter how uniforms and
/// Gaussians are interleaved *as long as the interleaving itself is the same*.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double gaussian();
  /// +1 or -1 with equal probability.
  double rademacher();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Child stream whose key depends on this stream's key and `tag` only.
  RngStream derive(std::uint64_t tag) const;

  // UniformRandomBitGenerator surface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive hash of a few integers, used to derive stream ids.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

}  // namespace nsplab

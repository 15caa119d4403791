#ifndef STABLE_LIMITS_STREAM_HPP
#define STABLE_LIMITS_STREAM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace stable_limits {

enum class StreamKind { pseudo_random, low_discrepancy };

StreamKind stream_kind_from_string(const std::string& s);
std::string to_string(StreamKind k);

// Source of uniform variates strictly inside (0,1); endpoints are excluded by
// mapping raw [0,1) output through u*(1-2e)+e with e = 2^-53.
//
// pseudo_random: seeded mt19937_64, `dimension` ignored.
// low_discrepancy: generalized Halton (d-th prime base per coordinate) with a
// per-dimension Cranley-Patterson shift derived from the seed. Coordinates of
// point i are emitted in order; after `dimension` values the point index
// advances. Consumers drawing blocks of d uniforms per event should create the
// stream with that dimension.
//
// Given (kind, seed, dimension) the emitted sequence is fully reproducible.
// A stream instance is not safe for simultaneous use by two threads; derive()
// hands out statistically independent children for worker-owned use.
class UniformStream {
 public:
  explicit UniformStream(StreamKind kind, std::uint64_t seed, int dimension = 2);

  double next();
  void next_block(std::span<double> out);

  // Child stream for sub-task `salt`; the parent state is not advanced.
  // Pseudo-random children reseed; low-discrepancy children keep the point set
  // but re-derive the scrambling shift, so distinct salts decorrelate.
  UniformStream derive(std::uint64_t salt) const;

  StreamKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  int dimension() const { return dimension_; }

 private:
  StreamKind kind_;
  std::uint64_t seed_;
  int dimension_;

  std::mt19937_64 rng_;

  std::vector<std::uint32_t> bases_;
  std::vector<double> shifts_;
  std::uint64_t point_index_ = 1;  // Halton point 0 is degenerate; start at 1
  int coord_ = 0;

  double next_halton();
};

// SplitMix64 step; shared by stream seeding and sub-stream derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace stable_limits

#endif

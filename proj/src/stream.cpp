#include "stable_limits/stream.hpp"

#include <cmath>

#include "stable_limits/errors.hpp"

namespace stable_limits {

namespace {

constexpr double kGuard = 0x1p-53;

double guard_open(double u) {
  // [0,1) -> [e, 1-e] subset of (0,1)
  return u * (1.0 - 2.0 * kGuard) + kGuard;
}

std::vector<std::uint32_t> first_primes(int n) {
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(n));
  std::uint32_t c = 2;
  while (static_cast<int>(out.size()) < n) {
    bool prime = true;
    for (std::uint32_t p : out) {
      if (p * static_cast<std::uint64_t>(p) > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(c);
    ++c;
  }
  return out;
}

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

StreamKind stream_kind_from_string(const std::string& s) {
  if (s == "pseudo" || s == "pseudo-random" || s == "prng") return StreamKind::pseudo_random;
  if (s == "ld" || s == "low-discrepancy" || s == "qrng") return StreamKind::low_discrepancy;
  throw error(errc::domain, "unknown stream kind '" + s + "' (expected pseudo|ld)");
}

std::string to_string(StreamKind k) {
  return k == StreamKind::pseudo_random ? "pseudo" : "ld";
}

UniformStream::UniformStream(StreamKind kind, std::uint64_t seed, int dimension)
    : kind_(kind), seed_(seed), dimension_(dimension) {
  if (dimension_ < 1) throw error(errc::domain, "stream dimension must be >= 1");
  if (kind_ == StreamKind::pseudo_random) {
    std::uint64_t s = seed_;
    std::seed_seq seq{static_cast<std::uint32_t>(mix64(s)),
                      static_cast<std::uint32_t>(mix64(s) >> 32),
                      static_cast<std::uint32_t>(mix64(s + 1)),
                      static_cast<std::uint32_t>(mix64(s + 1) >> 32)};
    rng_.seed(seq);
  } else {
    bases_ = first_primes(dimension_);
    shifts_.resize(static_cast<std::size_t>(dimension_));
    for (int d = 0; d < dimension_; ++d) {
      shifts_[static_cast<std::size_t>(d)] =
          static_cast<double>(mix64(seed_ ^ mix64(static_cast<std::uint64_t>(d))) >> 11) * 0x1p-53;
    }
  }
}

double UniformStream::next_halton() {
  const int d = coord_;
  double v = radical_inverse(point_index_, bases_[static_cast<std::size_t>(d)]) +
             shifts_[static_cast<std::size_t>(d)];
  v -= std::floor(v);
  if (++coord_ == dimension_) {
    coord_ = 0;
    ++point_index_;
  }
  return v;
}

double UniformStream::next() {
  if (kind_ == StreamKind::pseudo_random) {
    return guard_open(static_cast<double>(rng_() >> 11) * 0x1p-53);
  }
  return guard_open(next_halton());
}

void UniformStream::next_block(std::span<double> out) {
  for (double& v : out) v = next();
}

UniformStream UniformStream::derive(std::uint64_t salt) const {
  return UniformStream(kind_, mix64(seed_ ^ mix64(salt)), dimension_);
}

}  // namespace stable_limits

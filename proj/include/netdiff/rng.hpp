#pragma once

#include <cstdint>
#include <initializer_list>

namespace netdiff {

// splitmix64 step (Steele et al.); also used as the stream-key mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A splittable stream: the state is derived by hashing (master_seed, path...),
// so streams indexed by e.g. (replication, village) are independent of the
// order in which worker threads pick them up.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed,
                     std::initializer_list<std::uint64_t> path = {}) {
    std::uint64_t s = master_seed;
    state_ = splitmix64(s);
    for (std::uint64_t p : path) {
      s = state_ ^ (p + 0x632be59bd9b4e019ULL);
      state_ = splitmix64(s);
    }
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform double in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return u01() < p;
  }

  // Unbiased uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t threshold = (-n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Derive an independent child stream.
  RngStream child(std::uint64_t index) const {
    RngStream c = *this;
    std::uint64_t s = state_ ^ (index + 0x632be59bd9b4e019ULL);
    c.state_ = splitmix64(s);
    return c;
  }

 private:
  std::uint64_t state_;
};

// Order-free per-edge coin: hash of (seed, tags...) mapped to [0,1).
// Used for common-random-number couplings where the same physical edge must
// see the same uniform regardless of graph composition or iteration order.
inline double keyed_u01(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(s);
  s = h ^ (b + 0xc2b2ae3d27d4eb4fULL);
  h = splitmix64(s);
  s = h ^ (c + 0x165667b19e3779f9ULL);
  h = splitmix64(s);
  s = h ^ (d + 0x27d4eb2f165667c5ULL);
  h = splitmix64(s);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr const char* kRngName = "splitmix64-streams-v1";

}  // namespace netdiff

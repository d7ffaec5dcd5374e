#pragma once

#include "diracwb/poly.hpp"

#include <cstdint>

namespace diracwb {

// splitmix64: deterministic, seedable, good enough for test-case generation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }

  // small integer in [lo, hi]
  long range(long lo, long hi) { return lo + static_cast<long>(below(hi - lo + 1)); }

  Rat small_rat(long absmax = 3) { return Rat(range(-absmax, absmax)); }

  Rat small_rat_nonzero(long absmax = 3) {
    Rat r;
    do {
      r = small_rat(absmax);
    } while (sgn(r) == 0);
    return r;
  }

  Poly poly(int nvars, int max_degree, long absmax = 2, int terms = 3) {
    Poly p;
    for (int t = 0; t < terms; ++t) {
      Poly mono = Poly::constant(small_rat(absmax));
      int deg = static_cast<int>(below(max_degree + 1));
      for (int d = 0; d < deg; ++d)
        mono = mono * Poly::variable(static_cast<int>(below(nvars)));
      p += mono;
    }
    return p;
  }

 private:
  uint64_t state_;
};

}  // namespace diracwb

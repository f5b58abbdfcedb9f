#pragma once

#include <cstdint>
#include <random>

namespace levyexp {

// Seeded generator with documented substream derivation: replica k of base
// seed s re-seeds an independent mt19937_64 with
//   splitmix64(splitmix64(s) ^ (k+1) * 0x9E3779B97F4A7C15).
// Identical (seed, replica) gives an identical draw sequence on one
// build/platform; all variate methods below are hand-rolled so the
// sequences do not depend on the standard library's distribution choices.
class RngState {
 public:
  explicit RngState(std::uint64_t seed);

  RngState substream(std::uint64_t replica) const;
  std::uint64_t seed() const { return seed_; }

  double uniform();                 // open (0,1)
  double exponential();             // rate 1
  double normal();                  // N(0,1), polar rejection
  double gamma(double shape);       // scale 1 (E = shape), Marsaglia-Tsang
  double positive_stable(double alpha);  // E[e^{-l S}] = e^{-l^alpha}, Kanter

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace levyexp

#pragma once

#include <cstdint>
#include <random>

namespace xrsched {

// Seeded random source with hand-rolled draw routines so that every
// distribution consumes engine output the same way on every platform.
// fork(id) derives an independent child stream; the derivation only
// depends on (seed, id), never on how much the parent has drawn.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  Rng fork(std::uint64_t stream_id) const;

  double uniform();                         // [0, 1)
  double uniform(double lo, double hi);
  double normal();                          // standard normal
  double normal(double mean, double stddev);
  double exponential(double mean);
  double laplace(double scale);             // location 0
  std::int64_t poisson(double mean);
  // Bernoulli(p) as uniform() < p.
  bool bernoulli(double p);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace xrsched

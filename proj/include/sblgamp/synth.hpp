#pragma once

#include <cstdint>
#include <random>

#include "sblgamp/model.hpp"

namespace sblgamp {

enum class NonzeroDist { gaussian, rademacher };

/// Parameters of one synthetic trial. Identical specs produce bitwise
/// identical instances.
struct TrialSpec {
  int n = 0;
  int m = 0;
  int k = 0;
  std::optional<double> snr_db;   // unset = noiseless
  NonzeroDist nonzero_dist = NonzeroDist::gaussian;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stateless seed derivation (splitmix64 chain) so trial j of a sweep can be
/// generated independently of trial order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1, std::uint64_t s2);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1, std::uint64_t s2,
                          std::uint64_t s3);

/// Seeded generator with fully specified distribution transforms, so streams
/// are reproducible independent of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal via Box-Muller (one variate per two uniforms).
  double normal();

  /// Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
};

/// Exactly k nonzeros on a uniformly drawn support, values i.i.d. from the
/// configured nonzero distribution.
Vector gen_signal(const TrialSpec& spec, Rng& rng);

/// i.i.d. standard Gaussian entries, then every column scaled to unit norm.
Matrix gen_matrix(int m, int n, Rng& rng);

/// Builds the full instance. Signal, matrix, and noise use sub-streams
/// derived independently from spec.seed, so changing the SNR leaves A and x
/// untouched. Noise variance is sigma^2 = ||Ax||^2 / (M * 10^(snr_db/10)).
ProblemInstance make_instance(const TrialSpec& spec);

}  // namespace sblgamp

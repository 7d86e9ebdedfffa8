#include "sblgamp/synth.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace sblgamp {

void TrialSpec::validate() const {
  if (n < 1) throw std::invalid_argument("TrialSpec: n must be at least 1");
  if (m < 1) throw std::invalid_argument("TrialSpec: m must be at least 1");
  if (k < 0 || k > n) throw std::invalid_argument("TrialSpec: k must be in [0, n]");
  if (snr_db && !std::isfinite(*snr_db)) {
    throw std::invalid_argument("TrialSpec: snr_db must be finite");
  }
  if (k == 0 && snr_db) {
    throw std::domain_error("TrialSpec: SNR is undefined for a zero signal (k = 0, noisy)");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ stream;
  return splitmix64(s);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1, std::uint64_t s2) {
  return derive_seed(derive_seed(master, s1), s2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1, std::uint64_t s2,
                          std::uint64_t s3) {
  return derive_seed(derive_seed(master, s1, s2), s3);
}

double Rng::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller with u1 in (0, 1]; both transforms are fully specified, so
  // the stream does not depend on the standard library's normal_distribution.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = gen_();
    if (r >= threshold) return r % bound;
  }
}

Vector gen_signal(const TrialSpec& spec, Rng& rng) {
  if (spec.k < 0 || spec.k > spec.n) {
    throw std::invalid_argument("gen_signal: k must be in [0, n]");
  }
  // Uniform support without replacement via a partial Fisher-Yates shuffle.
  std::vector<int> idx(static_cast<std::size_t>(spec.n));
  std::iota(idx.begin(), idx.end(), 0);
  Vector x = Vector::Zero(spec.n);
  for (int i = 0; i < spec.k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    const double v = spec.nonzero_dist == NonzeroDist::gaussian
                         ? rng.normal()
                         : (rng.uniform01() < 0.5 ? 1.0 : -1.0);
    x[idx[static_cast<std::size_t>(i)]] = v;
  }
  return x;
}

Matrix gen_matrix(int m, int n, Rng& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_matrix: dimensions must be positive");
  Matrix a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = rng.normal();
    }
  }
  for (int j = 0; j < n; ++j) {
    double norm = a.col(j).norm();
    while (norm == 0.0) {
      // Probability-zero event for Gaussian draws; redraw the column.
      for (int i = 0; i < m; ++i) a(i, j) = rng.normal();
      norm = a.col(j).norm();
    }
    a.col(j) /= norm;
  }
  return a;
}

ProblemInstance make_instance(const TrialSpec& spec) {
  spec.validate();
  Rng signal_rng(derive_seed(spec.seed, 1));
  Rng matrix_rng(derive_seed(spec.seed, 2));
  Rng noise_rng(derive_seed(spec.seed, 3));

  ProblemInstance inst;
  Vector x = gen_signal(spec, signal_rng);
  inst.A = gen_matrix(spec.m, spec.n, matrix_rng);
  Vector z = inst.A * x;
  if (!spec.snr_db) {
    inst.y = z;
  } else {
    const double zsq = z.squaredNorm();
    if (zsq == 0.0) {
      throw std::domain_error("make_instance: zero signal power, SNR undefined");
    }
    // Realized per-measurement signal power over the noise variance.
    const double sigma2 =
        zsq / (static_cast<double>(spec.m) * std::pow(10.0, *spec.snr_db / 10.0));
    const double sigma = std::sqrt(sigma2);
    Vector w(spec.m);
    for (int i = 0; i < spec.m; ++i) w[i] = sigma * noise_rng.normal();
    inst.y = z + w;
    inst.noise_var = sigma2;
  }
  inst.truth = std::move(x);
  return inst;
}

}  // namespace sblgamp

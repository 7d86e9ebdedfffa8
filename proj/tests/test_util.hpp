#pragma once

#include <cstdint>

#include "sblgamp/synth.hpp"

namespace sblgamp::testutil {

// Small random problems for oracle checks: i.i.d. Gaussian A with unit-norm
// columns and a dense Gaussian x (not sparse), y = Ax + sigma * w.
inline ProblemInstance dense_instance(int m, int n, std::uint64_t seed, double sigma = 0.1) {
  Rng rng(derive_seed(seed, 77));
  ProblemInstance inst;
  inst.A = gen_matrix(m, n, rng);
  Vector x(n);
  for (int j = 0; j < n; ++j) x[j] = rng.normal();
  inst.y = inst.A * x;
  if (sigma > 0.0) {
    for (int i = 0; i < m; ++i) inst.y[i] += sigma * rng.normal();
  }
  inst.truth = std::move(x);
  return inst;
}

inline Hyperparams uniform_hyper(int n, double alpha, double gamma) {
  return Hyperparams{Vector::Constant(n, alpha), gamma};
}

}  // namespace sblgamp::testutil

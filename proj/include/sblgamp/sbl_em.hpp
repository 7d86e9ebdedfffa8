#pragma once

#include "sblgamp/gamp.hpp"
#include "sblgamp/model.hpp"

namespace sblgamp {

/// Outer EM loop controls shared by both solvers.
struct EmOptions {
  // Relative squared change of consecutive x estimates below which the
  // outer loop stops; eps0 guards the denominator.
  double tol_outer = 1e-10;
  double eps0 = 1e-30;
  int max_em_iters = 200;
  double alpha0 = 1.0;
  // Initial noise precision; unset means the unit-SNR heuristic M / ||y||^2
  // (1 when y = 0).
  std::optional<double> gamma0;
  GampOptions gamp{};
  // When true, each GAMP call after the first starts from the previous
  // EM iteration's posterior instead of the prior.
  bool warm_start = false;

  void validate() const;
};

/// Defaults for the exact solver; the E-step is expensive but each EM step
/// makes more progress, so only the iteration cap differs.
inline EmOptions default_em_options() {
  EmOptions o;
  o.max_em_iters = 500;
  return o;
}

/// Exact Gaussian posterior of x: mu = gamma * Phi * A^T y,
/// Phi = (gamma * A^T A + D)^{-1} with D = diag(alpha).
struct ExactPosterior {
  Vector mu;
  Matrix Phi;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Computes the exact posterior through an SPD Cholesky factorization.
/// Throws FactorizationError when the scaled normal matrix is not
/// numerically positive definite.
ExactPosterior e_step_exact(const ProblemInstance& instance, const Hyperparams& hyper);

/// alpha update (2a - 1) / (x2_moment + 2b), clamped to [kAlphaMin, kAlphaMax].
double m_step_alpha(double x2_moment, const PriorConfig& prior);

/// Shared final form of the gamma update:
/// (M + 2c - 2) / (expected_resid_sq + 2d), clamped to (0, kGammaMax].
double gamma_update_from_moment(double expected_resid_sq, Eigen::Index m_rows,
                                const PriorConfig& prior);

/// gamma update with the exact posterior residual moment
/// <||y - Ax||^2> = ||y - A mu||^2 + sum_m a_m^T Phi a_m.
double m_step_gamma_exact(const ProblemInstance& instance, const ExactPosterior& post,
                          const PriorConfig& prior);

/// Classical EM sparse Bayesian learning with the exact E-step.
RecoveryResult sbl_em_solve(const ProblemInstance& instance, const PriorConfig& prior = {},
                            const EmOptions& opts = default_em_options());

}  // namespace sblgamp

#pragma once

#include "sblgamp/sbl_em.hpp"

namespace sblgamp {

/// Posterior second moment <x^2> = g_in(r,tau,alpha)^2 + g_in_var(tau,alpha).
double moment_x2(double r_hat, double tau_r, double alpha);

/// Entrywise alpha update from the posterior second moments; delegates to
/// m_step_alpha so both solvers share one formula.
Vector update_alpha(const Vector& x2, const PriorConfig& prior);

/// Posterior residual moment <(y - z)^2> = (y - mu_z)^2 + phi_z.
double residual_moment(double y, double mu_z, double phi_z);

/// gamma update (M + 2c - 2) / (2d + sum of residual moments), clamped.
double update_gamma(const Vector& residual_moments, const PriorConfig& prior);

/// EM sparse Bayesian learning whose E-step is the GAMP approximation.
/// Inner divergence triggers one damped retry; if that also fails the
/// result reports converged = false with the last finite iterate.
RecoveryResult sbl_gamp_solve(const ProblemInstance& instance, const PriorConfig& prior = {},
                              const EmOptions& opts = {});

}  // namespace sblgamp

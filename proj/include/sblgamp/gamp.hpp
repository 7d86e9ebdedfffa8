#pragma once

#include <functional>

#include "sblgamp/model.hpp"

namespace sblgamp {

struct GampOptions {
  // Stopping tolerance per coefficient: the iteration stops when the summed
  // squared change of the posterior means falls below epsilon * N.
  double epsilon = 1e-12;
  int max_iters = 200;
  // Convex blending factor for the mean and s updates; 1.0 is the plain
  // iteration, smaller values stabilize ill-conditioned sensing matrices.
  double damping = 1.0;

  void validate() const;
};

/// Per-iteration message quantities of one GAMP run.
struct GampState {
  Vector mu_x;     // length N, posterior means
  Vector phi_x;    // length N, posterior variances
  Vector z_hat;    // length M
  Vector tau_p;    // length M
  Vector p_hat;    // length M
  Vector s_hat;    // length M
  Vector tau_s;    // length M
  Vector tau_r;    // length N
  Vector r_hat;    // length N
  int k = 0;       // iteration counter
};

/// Quantities the M-step consumes, taken at the last iteration k0.
struct GampOutput {
  Vector mu_x;     // g_in(r_hat, tau_r, alpha), entrywise
  Vector phi_x;    // g_in_var(tau_r, alpha), entrywise
  Vector r_hat;    // at k0
  Vector tau_r;    // at k0
  Vector p_hat;    // at k0
  Vector tau_p;    // at k0
  Vector mu_z;     // z posterior mean at k0
  Vector phi_z;    // z posterior variance at k0
  int iters = 0;
  bool converged = false;
};

/// Raised when a non-finite value appears mid-iteration; carries the
/// iteration index so callers can retry with stronger damping.
class GampDivergence : public std::runtime_error {
 public:
  GampDivergence(int iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

// MMSE scalar channel functions for the zero-mean Gaussian prior
// N(0, 1/alpha) and the Gaussian likelihood N(y | z, 1/gamma).

/// Posterior mean of x given the pseudo-observation (r_hat, tau_r):
/// r_hat / (1 + alpha * tau_r).
double g_in(double r_hat, double tau_r, double alpha);

/// Posterior variance of x: tau_r / (1 + alpha * tau_r).
double g_in_var(double tau_r, double alpha);

struct ZPosterior {
  double mu;
  double phi;
};

/// Gaussian posterior of z = a^T x given the pseudo-prior (p_hat, tau_p)
/// and the observation y with noise precision gamma.
ZPosterior z_posterior(double p_hat, double tau_p, double gamma, double y);

/// Output channel function (mu_z - p_hat) / tau_p, evaluated in the
/// cancellation-free form gamma * (y - p_hat) / (1 + gamma * tau_p).
double g_out(double p_hat, double tau_p, double gamma, double y);

/// Negated derivative of g_out with respect to p_hat: gamma / (1 + gamma * tau_p).
double g_out_neg_deriv(double tau_p, double gamma);

/// Invoked after each completed iteration, e.g. to record trajectories.
using GampObserver = std::function<void(const GampState&)>;

/// Holds a contiguous transpose of A so repeated runs on one instance (the
/// EM loop) do not recompute it. The instance must outlive the engine.
class GampEngine {
 public:
  explicit GampEngine(const ProblemInstance& instance);

  /// Starts from the prior mean (zero) and prior variance 1/alpha.
  GampOutput run(const Hyperparams& hyper, const GampOptions& opts = {},
                 const GampObserver& observer = {}) const;

  /// Starts from the given mean/variance vectors.
  GampOutput run_from(const Hyperparams& hyper, const Vector& mu0, const Vector& phi0,
                      const GampOptions& opts = {}, const GampObserver& observer = {}) const;

 private:
  const ProblemInstance& instance_;
  Matrix a_t_;   // A^T with contiguous rows
};

/// Runs the four-step GAMP iteration with fixed hyperparameters, starting
/// from the prior mean and variance, until the squared mean-change drops
/// below epsilon * N or max_iters is reached. Throws GampDivergence if a
/// non-finite value appears.
GampOutput gamp_run(const ProblemInstance& instance, const Hyperparams& hyper,
                    const GampOptions& opts = {}, const GampObserver& observer = {});

/// Same iteration but warm-started from the given mean/variance vectors.
GampOutput gamp_run_from(const ProblemInstance& instance, const Hyperparams& hyper,
                         const Vector& mu0, const Vector& phi0,
                         const GampOptions& opts = {}, const GampObserver& observer = {});

}  // namespace sblgamp

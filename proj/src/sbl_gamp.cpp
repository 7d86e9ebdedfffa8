#include "sblgamp/sbl_gamp.hpp"

#include <cmath>

namespace sblgamp {

double moment_x2(double r_hat, double tau_r, double alpha) {
  const double mean = g_in(r_hat, tau_r, alpha);
  return mean * mean + g_in_var(tau_r, alpha);
}

Vector update_alpha(const Vector& x2, const PriorConfig& prior) {
  Vector out(x2.size());
  for (Eigen::Index j = 0; j < x2.size(); ++j) {
    out[j] = m_step_alpha(x2[j], prior);
  }
  return out;
}

double residual_moment(double y, double mu_z, double phi_z) {
  if (!(phi_z > 0.0)) throw std::domain_error("residual_moment: phi_z must be positive");
  const double r = y - mu_z;
  return r * r + phi_z;
}

double update_gamma(const Vector& residual_moments, const PriorConfig& prior) {
  if (residual_moments.size() < 1) {
    throw std::invalid_argument("update_gamma: empty residual moments");
  }
  return gamma_update_from_moment(residual_moments.sum(), residual_moments.size(), prior);
}

namespace {

constexpr double kRetryDamping = 0.5;

}  // namespace

RecoveryResult sbl_gamp_solve(const ProblemInstance& instance, const PriorConfig& prior,
                              const EmOptions& opts) {
  instance.validate();
  prior.validate();
  opts.validate();

  const Eigen::Index m = instance.rows();
  const Eigen::Index n = instance.cols();

  Hyperparams hyper;
  hyper.alpha = Vector::Constant(n, clamp_alpha(opts.alpha0));
  if (opts.gamma0) {
    hyper.gamma = clamp_gamma(*opts.gamma0);
  } else {
    const double ysq = instance.y.squaredNorm();
    hyper.gamma = ysq == 0.0 ? 1.0 : clamp_gamma(static_cast<double>(m) / ysq);
  }

  RecoveryResult result;
  Vector prev_mu = Vector::Zero(n);
  Vector mu = prev_mu;
  Vector phi;
  GampOptions gamp_opts = opts.gamp;
  bool have_state = false;   // warm-start state available
  Vector x2(n), moments(m);

  const GampEngine engine(instance);
  const auto inner_run = [&]() {
    return (opts.warm_start && have_state) ? engine.run_from(hyper, mu, phi, gamp_opts)
                                           : engine.run(hyper, gamp_opts);
  };

  for (int t = 0; t < opts.max_em_iters; ++t) {
    GampOutput gout;
    try {
      gout = inner_run();
    } catch (const GampDivergence& e) {
      ++result.gamp_retries;
      result.inner_iters_total += e.iteration();
      // One retry with stronger damping, kept for the rest of the solve.
      gamp_opts.damping = std::min(gamp_opts.damping, kRetryDamping);
      try {
        gout = inner_run();
      } catch (const GampDivergence& e2) {
        // Report the last finite iterate instead of aborting the trial.
        result.inner_iters_total += e2.iteration();
        result.converged = false;
        break;
      }
    }

    result.em_iters = t + 1;
    result.inner_iters_total += gout.iters;
    mu = gout.mu_x;
    phi = gout.phi_x;
    have_state = true;

    // M-step from the GAMP output moments; <x_n^2> uses the pre-update alpha.
    for (Eigen::Index j = 0; j < n; ++j) {
      x2[j] = moment_x2(gout.r_hat[j], gout.tau_r[j], hyper.alpha[j]);
    }
    hyper.alpha = update_alpha(x2, prior);
    for (Eigen::Index i = 0; i < m; ++i) {
      moments[i] = residual_moment(instance.y[i], gout.mu_z[i], gout.phi_z[i]);
    }
    hyper.gamma = update_gamma(moments, prior);

    const double change =
        (mu - prev_mu).squaredNorm() / std::max(prev_mu.squaredNorm(), opts.eps0);
    prev_mu = mu;
    if (change <= opts.tol_outer) {
      result.converged = true;
      break;
    }
  }

  result.x_hat = std::move(mu);
  result.x_var = phi.size() == n ? std::move(phi) : Vector::Zero(n);
  result.hyper = std::move(hyper);
  if (instance.truth) result.nmse = nmse(result.x_hat, *instance.truth);
  return result;
}

}  // namespace sblgamp

#include "sblgamp/gamp.hpp"

#include <cmath>
#include <string>

namespace sblgamp {

namespace {

// Initial posterior variance is the prior variance 1/alpha, capped so a
// clamped alpha near kAlphaMin cannot start the iteration at 1e12.
constexpr double kInitVarCap = 1e6;

// Floors for the Step-3 inversion; keep tau_r finite when gamma is clamped
// high in noiseless runs.
constexpr double kTauRDenomFloor = 1e-300;
constexpr double kTauRCap = 1e12;

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::domain_error(std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

}  // namespace

void GampOptions::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("GampOptions: epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("GampOptions: max_iters must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("GampOptions: damping must be in (0, 1]");
  }
}

double g_in(double r_hat, double tau_r, double alpha) {
  check_positive(tau_r, "g_in: tau_r");
  if (alpha < 0.0) throw std::domain_error("g_in: alpha must be non-negative");
  return r_hat / (1.0 + alpha * tau_r);
}

double g_in_var(double tau_r, double alpha) {
  check_positive(tau_r, "g_in_var: tau_r");
  if (alpha < 0.0) throw std::domain_error("g_in_var: alpha must be non-negative");
  return tau_r / (1.0 + alpha * tau_r);
}

ZPosterior z_posterior(double p_hat, double tau_p, double gamma, double y) {
  check_positive(tau_p, "z_posterior: tau_p");
  check_positive(gamma, "z_posterior: gamma");
  const double denom = 1.0 + gamma * tau_p;
  return {(tau_p * gamma * y + p_hat) / denom, tau_p / denom};
}

double g_out(double p_hat, double tau_p, double gamma, double y) {
  check_positive(tau_p, "g_out: tau_p");
  check_positive(gamma, "g_out: gamma");
  return gamma * (y - p_hat) / (1.0 + gamma * tau_p);
}

double g_out_neg_deriv(double tau_p, double gamma) {
  check_positive(tau_p, "g_out_neg_deriv: tau_p");
  check_positive(gamma, "g_out_neg_deriv: gamma");
  return gamma / (1.0 + gamma * tau_p);
}

GampEngine::GampEngine(const ProblemInstance& instance) : instance_(instance) {
  instance.validate();
  a_t_ = instance.A.transpose();
}

GampOutput GampEngine::run_from(const Hyperparams& hyper, const Vector& mu0, const Vector& phi0,
                                const GampOptions& opts, const GampObserver& observer) const {
  hyper.validate();
  opts.validate();
  if (hyper.alpha.size() != instance_.cols()) {
    throw std::invalid_argument("GampEngine: alpha length does not match columns of A");
  }
  if (mu0.size() != instance_.cols() || phi0.size() != instance_.cols()) {
    throw std::invalid_argument("GampEngine: initial state length mismatch");
  }
  if (!(phi0.array() > 0.0).all()) {
    throw std::invalid_argument("GampEngine: initial variances must be positive");
  }
  const Eigen::Index m = instance_.rows();
  const Eigen::Index n = instance_.cols();
  const Matrix& A = instance_.A;
  const Vector& y = instance_.y;
  const Vector& alpha = hyper.alpha;
  const double gamma = hyper.gamma;
  const double d = opts.damping;
  const double threshold = opts.epsilon * static_cast<double>(n);

  GampState st;
  st.mu_x = mu0;
  st.phi_x = phi0;
  st.z_hat.resize(m);
  st.tau_p.resize(m);
  st.p_hat.resize(m);
  st.s_hat = Vector::Zero(m);
  st.tau_s.resize(m);
  st.tau_r.resize(n);
  st.r_hat.resize(n);
  st.k = 0;

  Vector s_new(m), mu_new(n), phi_new(n);
  bool converged = false;

  while (st.k < opts.max_iters) {
    // Step 1: pseudo-prior for z. One pass per row of A computes z = A mu
    // and tau_p = (A o A) phi, squaring entries on the fly; the row stays
    // cache-hot between the two reductions and A o A is never materialized.
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Map<const Vector> arow(A.data() + i * n, n);
      const double z = arow.dot(st.mu_x);
      const double tp = (arow.array().square() * st.phi_x.array()).sum();
      st.z_hat[i] = z;
      st.tau_p[i] = tp;
      st.p_hat[i] = z - tp * st.s_hat[i];
    }

    // Step 2: output channel.
    for (Eigen::Index i = 0; i < m; ++i) {
      s_new[i] = g_out(st.p_hat[i], st.tau_p[i], gamma, y[i]);
      st.tau_s[i] = g_out_neg_deriv(st.tau_p[i], gamma);
    }
    if (d < 1.0) {
      st.s_hat = d * s_new + (1.0 - d) * st.s_hat;
    } else {
      st.s_hat = s_new;
    }

    // Step 3: pseudo-observation for x, same pattern over the rows of A^T.
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Map<const Vector> acol(a_t_.data() + j * m, m);
      const double dsum = (acol.array().square() * st.tau_s.array()).sum();
      const double racc = acol.dot(st.s_hat);
      const double tr = 1.0 / std::max(dsum, kTauRDenomFloor);
      st.tau_r[j] = std::min(tr, kTauRCap);
      st.r_hat[j] = st.mu_x[j] + st.tau_r[j] * racc;
    }

    // Step 4: input channel.
    for (Eigen::Index j = 0; j < n; ++j) {
      mu_new[j] = g_in(st.r_hat[j], st.tau_r[j], alpha[j]);
      phi_new[j] = g_in_var(st.tau_r[j], alpha[j]);
    }

    double change = 0.0;
    if (d < 1.0) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double next = d * mu_new[j] + (1.0 - d) * st.mu_x[j];
        const double delta = next - st.mu_x[j];
        change += delta * delta;
        st.mu_x[j] = next;
      }
    } else {
      change = (mu_new - st.mu_x).squaredNorm();
      st.mu_x = mu_new;
    }
    st.phi_x = phi_new;

    if (!st.mu_x.allFinite() || !st.s_hat.allFinite() || !st.r_hat.allFinite()) {
      throw GampDivergence(st.k, "gamp_run: non-finite value at iteration " +
                                     std::to_string(st.k));
    }

    ++st.k;
    if (observer) observer(st);

    if (change <= threshold) {
      converged = true;
      break;
    }
  }

  GampOutput out;
  out.mu_x = std::move(mu_new);
  out.phi_x = std::move(phi_new);
  out.r_hat = std::move(st.r_hat);
  out.tau_r = std::move(st.tau_r);
  out.p_hat = std::move(st.p_hat);
  out.tau_p = std::move(st.tau_p);
  out.mu_z.resize(m);
  out.phi_z.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const ZPosterior zp = z_posterior(out.p_hat[i], out.tau_p[i], gamma, y[i]);
    out.mu_z[i] = zp.mu;
    out.phi_z[i] = zp.phi;
  }
  out.iters = st.k;
  out.converged = converged;
  return out;
}

GampOutput GampEngine::run(const Hyperparams& hyper, const GampOptions& opts,
                           const GampObserver& observer) const {
  const Vector mu0 = Vector::Zero(instance_.cols());
  const Vector phi0 = hyper.alpha.cwiseInverse().cwiseMin(kInitVarCap);
  return run_from(hyper, mu0, phi0, opts, observer);
}

GampOutput gamp_run(const ProblemInstance& instance, const Hyperparams& hyper,
                    const GampOptions& opts, const GampObserver& observer) {
  return GampEngine(instance).run(hyper, opts, observer);
}

GampOutput gamp_run_from(const ProblemInstance& instance, const Hyperparams& hyper,
                         const Vector& mu0, const Vector& phi0, const GampOptions& opts,
                         const GampObserver& observer) {
  return GampEngine(instance).run_from(hyper, mu0, phi0, opts, observer);
}

}  // namespace sblgamp

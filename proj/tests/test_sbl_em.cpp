#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "sblgamp/sbl_em.hpp"
#include "sblgamp/sbl_gamp.hpp"
#include "test_util.hpp"

using namespace sblgamp;
using sblgamp::testutil::dense_instance;
using sblgamp::testutil::uniform_hyper;

TEST_CASE("e_step_exact solves the scalar case") {
  ProblemInstance inst;
  inst.A = Matrix::Ones(1, 1);
  inst.y = Vector::Constant(1, 2.0);
  const ExactPosterior post = e_step_exact(inst, uniform_hyper(1, 1.0, 1.0));
  CHECK(post.mu[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(post.Phi(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("an infinite-precision prior pins the posterior at zero") {
  const ProblemInstance inst = dense_instance(4, 7, 21, 0.0);
  const Hyperparams hyper = uniform_hyper(7, kAlphaMax, 2.0);
  const ExactPosterior post = e_step_exact(inst, hyper);
  const double bound = hyper.gamma * (inst.A.transpose() * inst.y).norm() / kAlphaMax;
  CHECK(post.mu.norm() <= bound * (1.0 + 1e-12));
}

TEST_CASE("e_step_exact matches a brute-force dense solve") {
  Rng rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const ProblemInstance inst = dense_instance(3, 5, 100 + static_cast<std::uint64_t>(rep), 0.3);
    Hyperparams hyper;
    hyper.alpha.resize(5);
    for (int j = 0; j < 5; ++j) hyper.alpha[j] = 0.2 + 3.0 * rng.uniform01();
    hyper.gamma = 0.5 + 10.0 * rng.uniform01();

    Eigen::MatrixXd h = hyper.gamma * (inst.A.transpose() * inst.A);
    h.diagonal() += hyper.alpha;
    const Vector rhs = hyper.gamma * (inst.A.transpose() * inst.y);
    const Vector mu_oracle = h.fullPivLu().solve(rhs);
    const Eigen::MatrixXd phi_oracle = h.fullPivLu().solve(Eigen::MatrixXd::Identity(5, 5));

    const ExactPosterior post = e_step_exact(inst, hyper);
    CHECK((post.mu - mu_oracle).norm() / mu_oracle.norm() <= 1e-10);
    CHECK((post.Phi - phi_oracle).norm() / phi_oracle.norm() <= 1e-10);

    // residual identity and symmetry, as contracted
    CHECK((h * post.mu - rhs).norm() / rhs.norm() <= 1e-10);
    CHECK((post.Phi - post.Phi.transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * post.Phi.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("m_step_alpha follows the clamped update rule") {
  PriorConfig prior;
  prior.a = 1.0;
  prior.b = 0.0;
  CHECK(m_step_alpha(0.25, prior) == 4.0);
  prior.b = 1e-6;
  CHECK(m_step_alpha(0.0, prior) == doctest::Approx(5e5).epsilon(1e-14));
  prior.a = 1.5;
  prior.b = 0.5;
  CHECK(m_step_alpha(1.0, prior) == 1.0);

  prior.a = 1.0;
  prior.b = 0.0;
  CHECK(m_step_alpha(0.0, prior) == kAlphaMax);
  CHECK(m_step_alpha(1e30, prior) == kAlphaMin);
  CHECK_THROWS_AS(m_step_alpha(-1.0, prior), std::invalid_argument);
}

TEST_CASE("m_step_alpha is monotone in the moment and the shape") {
  Rng rng(55);
  for (int rep = 0; rep < 200; ++rep) {
    PriorConfig prior;
    prior.a = 0.6 + 2.0 * rng.uniform01();
    prior.b = rng.uniform01();
    const double x2 = 0.01 + rng.uniform01();
    const double dx = 0.1 + rng.uniform01();
    CHECK(m_step_alpha(x2 + dx, prior) < m_step_alpha(x2, prior));
    PriorConfig larger_a = prior;
    larger_a.a = prior.a + 0.5;
    CHECK(m_step_alpha(x2, larger_a) > m_step_alpha(x2, prior));
  }
}

TEST_CASE("gamma updates follow the clamped formula") {
  PriorConfig prior;
  prior.c = 1.0;
  prior.d = 0.0;
  CHECK(gamma_update_from_moment(50.0, 100, prior) == 2.0);
  prior.d = 0.5;
  CHECK(gamma_update_from_moment(1.0, 4, prior) == 2.0);
  prior.d = 1e-10;
  CHECK(gamma_update_from_moment(0.0, 10, prior) == clamp_gamma(10.0 / 2e-10));
  prior.d = 0.0;
  CHECK(gamma_update_from_moment(0.0, 10, prior) == kGammaMax);
}

TEST_CASE("m_step_gamma_exact uses residual plus covariance trace") {
  const ProblemInstance inst = dense_instance(6, 4, 3, 0.2);
  const Hyperparams hyper = uniform_hyper(4, 1.0, 5.0);
  const ExactPosterior post = e_step_exact(inst, hyper);
  PriorConfig prior;
  prior.c = 1.0;
  prior.d = 0.0;
  const double resid = (inst.y - inst.A * post.mu).squaredNorm();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < inst.rows(); ++i) {
    trace += inst.A.row(i) * post.Phi * inst.A.row(i).transpose();
  }
  const double expected = 6.0 / (resid + trace);
  CHECK(m_step_gamma_exact(inst, post, prior) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("sbl_em_solve returns the zero fixed point for zero observations") {
  Rng rng(17);
  ProblemInstance inst;
  inst.A = gen_matrix(6, 10, rng);
  inst.y = Vector::Zero(6);
  const RecoveryResult res = sbl_em_solve(inst);
  CHECK(res.converged);
  CHECK(res.em_iters <= 2);
  CHECK(res.x_hat.norm() == 0.0);
}

TEST_CASE("sbl_em_solve recovers a seeded noiseless sparse signal") {
  TrialSpec spec;
  spec.n = 50;
  spec.m = 25;
  spec.k = 3;
  spec.seed = 7001;
  const ProblemInstance inst = make_instance(spec);
  const RecoveryResult res = sbl_em_solve(inst);
  REQUIRE(res.nmse.has_value());
  CHECK(*res.nmse <= 1e-6);

  // cross-solver parity on the same instance
  const RecoveryResult gamp_res = sbl_gamp_solve(inst);
  REQUIRE(gamp_res.nmse.has_value());
  CHECK(std::abs(*gamp_res.nmse - *res.nmse) <= 1e-3);

  // fit at least as good as the zero solution on noiseless instances
  CHECK((inst.y - inst.A * res.x_hat).squaredNorm() <= inst.y.squaredNorm());
}

TEST_CASE("the fast EM path matches the public E-step composition") {
  for (const int m : {8, 24}) {  // exercises both the dual (M<N) and primal branch
    const int n = 16;
    const ProblemInstance inst = dense_instance(m, n, 400 + static_cast<std::uint64_t>(m), 0.2);
    EmOptions opts = default_em_options();
    opts.max_em_iters = 1;
    const RecoveryResult one_step = sbl_em_solve(inst, {}, opts);

    const double gamma0 = static_cast<double>(m) / inst.y.squaredNorm();
    const Hyperparams hyper = uniform_hyper(n, opts.alpha0, gamma0);
    const ExactPosterior post = e_step_exact(inst, hyper);
    CHECK((one_step.x_hat - post.mu).norm() <= 1e-10 * post.mu.norm());
    const Vector diag = post.Phi.diagonal();
    CHECK((one_step.x_var - diag).norm() <= 1e-10 * diag.norm());

    // hyperparameter updates agree with the public M-step ops
    PriorConfig prior;
    const double gamma_pub = m_step_gamma_exact(inst, post, prior);
    CHECK(one_step.hyper.gamma == doctest::Approx(gamma_pub).epsilon(1e-10));
    for (int j = 0; j < n; ++j) {
      const double x2 = post.mu[j] * post.mu[j] + post.Phi(j, j);
      CHECK(one_step.hyper.alpha[j] ==
            doctest::Approx(m_step_alpha(x2, prior)).epsilon(1e-10));
    }
  }
}

TEST_CASE("negating y negates x_hat and preserves the hyperparameter trajectory") {
  TrialSpec spec;
  spec.n = 30;
  spec.m = 15;
  spec.k = 4;
  spec.snr_db = 25.0;
  spec.seed = 904;
  ProblemInstance inst = make_instance(spec);
  inst.truth.reset();
  ProblemInstance neg = inst;
  neg.y = -inst.y;

  EmOptions opts = default_em_options();
  opts.max_em_iters = 40;
  const RecoveryResult a = sbl_em_solve(inst, {}, opts);
  const RecoveryResult b = sbl_em_solve(neg, {}, opts);
  CHECK(a.em_iters == b.em_iters);
  CHECK(a.hyper.gamma == b.hyper.gamma);
  for (int j = 0; j < spec.n; ++j) {
    CHECK(a.x_hat[j] == -b.x_hat[j]);
    CHECK(a.hyper.alpha[j] == b.hyper.alpha[j]);
  }
}

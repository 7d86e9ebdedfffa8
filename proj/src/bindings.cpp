#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sblgamp/bench.hpp"

namespace py = pybind11;
using namespace sblgamp;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse Bayesian learning solvers with a GAMP-accelerated E-step";

  // -- model ---------------------------------------------------------------
  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init<>())
      .def(py::init([](Matrix A, Vector y, std::optional<Vector> truth,
                       std::optional<double> noise_var) {
             ProblemInstance inst{std::move(A), std::move(y), std::move(truth), noise_var};
             inst.validate();
             return inst;
           }),
           py::arg("A"), py::arg("y"), py::arg("truth") = py::none(),
           py::arg("noise_var") = py::none())
      .def_readwrite("A", &ProblemInstance::A)
      .def_readwrite("y", &ProblemInstance::y)
      .def_readwrite("truth", &ProblemInstance::truth)
      .def_readwrite("noise_var", &ProblemInstance::noise_var)
      .def("validate", &ProblemInstance::validate)
      .def("__repr__", [](const ProblemInstance& p) {
        return "<ProblemInstance " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
               (p.truth ? " with truth>" : ">");
      });

  py::class_<PriorConfig>(m, "PriorConfig")
      .def(py::init<>())
      .def(py::init([](double a, double b, double c, double d) {
             PriorConfig p{a, b, c, d};
             p.validate();
             return p;
           }),
           py::arg("a") = 1.0, py::arg("b") = 1e-10, py::arg("c") = 1.0, py::arg("d") = 1e-10)
      .def_readwrite("a", &PriorConfig::a)
      .def_readwrite("b", &PriorConfig::b)
      .def_readwrite("c", &PriorConfig::c)
      .def_readwrite("d", &PriorConfig::d);

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init<>())
      .def(py::init([](Vector alpha, double gamma) {
             Hyperparams h{std::move(alpha), gamma};
             h.validate();
             return h;
           }),
           py::arg("alpha"), py::arg("gamma"))
      .def_readwrite("alpha", &Hyperparams::alpha)
      .def_readwrite("gamma", &Hyperparams::gamma);

  py::class_<RecoveryResult>(m, "RecoveryResult")
      .def_readonly("x_hat", &RecoveryResult::x_hat)
      .def_readonly("x_var", &RecoveryResult::x_var)
      .def_readonly("hyper", &RecoveryResult::hyper)
      .def_readonly("em_iters", &RecoveryResult::em_iters)
      .def_readonly("inner_iters_total", &RecoveryResult::inner_iters_total)
      .def_readonly("converged", &RecoveryResult::converged)
      .def_readonly("nmse", &RecoveryResult::nmse)
      .def_readonly("gamp_retries", &RecoveryResult::gamp_retries);

  m.def("nmse", &nmse, py::arg("x_hat"), py::arg("truth"));
  m.def("is_success", &is_success, py::arg("x_hat"), py::arg("truth"), py::arg("threshold"));

  // -- gamp ----------------------------------------------------------------
  py::class_<GampOptions>(m, "GampOptions")
      .def(py::init<>())
      .def_readwrite("epsilon", &GampOptions::epsilon)
      .def_readwrite("max_iters", &GampOptions::max_iters)
      .def_readwrite("damping", &GampOptions::damping);

  py::class_<GampOutput>(m, "GampOutput")
      .def_readonly("mu_x", &GampOutput::mu_x)
      .def_readonly("phi_x", &GampOutput::phi_x)
      .def_readonly("r_hat", &GampOutput::r_hat)
      .def_readonly("tau_r", &GampOutput::tau_r)
      .def_readonly("p_hat", &GampOutput::p_hat)
      .def_readonly("tau_p", &GampOutput::tau_p)
      .def_readonly("mu_z", &GampOutput::mu_z)
      .def_readonly("phi_z", &GampOutput::phi_z)
      .def_readonly("iters", &GampOutput::iters)
      .def_readonly("converged", &GampOutput::converged);

  py::register_exception<GampDivergence>(m, "GampDivergenceError", PyExc_RuntimeError);
  py::register_exception<FactorizationError>(m, "FactorizationError", PyExc_ArithmeticError);

  m.def("g_in", &g_in, py::arg("r_hat"), py::arg("tau_r"), py::arg("alpha"));
  m.def("g_in_var", &g_in_var, py::arg("tau_r"), py::arg("alpha"));
  m.def(
      "z_posterior",
      [](double p_hat, double tau_p, double gamma, double y) {
        const ZPosterior z = z_posterior(p_hat, tau_p, gamma, y);
        return py::make_tuple(z.mu, z.phi);
      },
      py::arg("p_hat"), py::arg("tau_p"), py::arg("gamma"), py::arg("y"));
  m.def("g_out", &g_out, py::arg("p_hat"), py::arg("tau_p"), py::arg("gamma"), py::arg("y"));
  m.def("g_out_neg_deriv", &g_out_neg_deriv, py::arg("tau_p"), py::arg("gamma"));
  m.def("gamp_run", &gamp_run, py::arg("instance"), py::arg("hyper"),
        py::arg("opts") = GampOptions{}, py::arg("observer") = GampObserver{});

  // -- sbl_em / sbl_gamp ----------------------------------------------------
  py::class_<EmOptions>(m, "EmOptions")
      .def(py::init<>())
      .def_readwrite("tol_outer", &EmOptions::tol_outer)
      .def_readwrite("eps0", &EmOptions::eps0)
      .def_readwrite("max_em_iters", &EmOptions::max_em_iters)
      .def_readwrite("alpha0", &EmOptions::alpha0)
      .def_readwrite("gamma0", &EmOptions::gamma0)
      .def_readwrite("gamp", &EmOptions::gamp)
      .def_readwrite("warm_start", &EmOptions::warm_start);

  m.def("default_em_options", &default_em_options);

  py::class_<ExactPosterior>(m, "ExactPosterior")
      .def_readonly("mu", &ExactPosterior::mu)
      .def_readonly("Phi", &ExactPosterior::Phi);

  m.def("e_step_exact", &e_step_exact, py::arg("instance"), py::arg("hyper"));
  m.def("m_step_alpha", &m_step_alpha, py::arg("x2_moment"), py::arg("prior"));
  m.def("m_step_gamma_exact", &m_step_gamma_exact, py::arg("instance"), py::arg("post"),
        py::arg("prior"));
  m.def("sbl_em_solve", &sbl_em_solve, py::arg("instance"), py::arg("prior") = PriorConfig{},
        py::arg("opts") = default_em_options());

  m.def("moment_x2", &moment_x2, py::arg("r_hat"), py::arg("tau_r"), py::arg("alpha"));
  m.def("update_alpha", &update_alpha, py::arg("x2"), py::arg("prior"));
  m.def("residual_moment", &residual_moment, py::arg("y"), py::arg("mu_z"), py::arg("phi_z"));
  m.def("update_gamma", &update_gamma, py::arg("residual_moments"), py::arg("prior"));
  m.def("sbl_gamp_solve", &sbl_gamp_solve, py::arg("instance"), py::arg("prior") = PriorConfig{},
        py::arg("opts") = EmOptions{});

  // -- synth ----------------------------------------------------------------
  py::enum_<NonzeroDist>(m, "NonzeroDist")
      .value("gaussian", NonzeroDist::gaussian)
      .value("rademacher", NonzeroDist::rademacher);

  py::class_<TrialSpec>(m, "TrialSpec")
      .def(py::init<>())
      .def(py::init([](int n, int mm, int k, std::optional<double> snr_db, NonzeroDist dist,
                       std::uint64_t seed) {
             TrialSpec s{n, mm, k, snr_db, dist, seed};
             s.validate();
             return s;
           }),
           py::arg("n"), py::arg("m"), py::arg("k"), py::arg("snr_db") = py::none(),
           py::arg("nonzero_dist") = NonzeroDist::gaussian, py::arg("seed") = 0)
      .def_readwrite("n", &TrialSpec::n)
      .def_readwrite("m", &TrialSpec::m)
      .def_readwrite("k", &TrialSpec::k)
      .def_readwrite("snr_db", &TrialSpec::snr_db)
      .def_readwrite("nonzero_dist", &TrialSpec::nonzero_dist)
      .def_readwrite("seed", &TrialSpec::seed);

  m.def("derive_seed",
        py::overload_cast<std::uint64_t, std::uint64_t>(&derive_seed), py::arg("master"),
        py::arg("stream"));
  m.def("make_instance", &make_instance, py::arg("spec"));

  // -- bench ----------------------------------------------------------------
  py::enum_<Solver>(m, "Solver")
      .value("sbl_gamp", Solver::sbl_gamp)
      .value("sbl_em", Solver::sbl_em);

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("spec", &TrialResult::spec)
      .def_readonly("solver", &TrialResult::solver)
      .def_readonly("nmse", &TrialResult::nmse)
      .def_readonly("success", &TrialResult::success)
      .def_readonly("wall_time_s", &TrialResult::wall_time_s)
      .def_readonly("em_iters", &TrialResult::em_iters)
      .def_readonly("inner_iters_total", &TrialResult::inner_iters_total)
      .def_readonly("converged", &TrialResult::converged)
      .def_readonly("retried", &TrialResult::retried);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("solvers", &SweepConfig::solvers)
      .def_readwrite("n", &SweepConfig::n)
      .def_readwrite("m_over_n_list", &SweepConfig::m_over_n_list)
      .def_readwrite("k", &SweepConfig::k)
      .def_readwrite("n_list", &SweepConfig::n_list)
      .def_readwrite("m_over_n", &SweepConfig::m_over_n)
      .def_readwrite("k_over_m", &SweepConfig::k_over_m)
      .def_readwrite("trials_per_cell", &SweepConfig::trials_per_cell)
      .def_readwrite("success_threshold", &SweepConfig::success_threshold)
      .def_readwrite("master_seed", &SweepConfig::master_seed)
      .def_readwrite("snr_db", &SweepConfig::snr_db)
      .def_readwrite("nonzero_dist", &SweepConfig::nonzero_dist)
      .def_readwrite("workers", &SweepConfig::workers)
      .def_readwrite("prior", &SweepConfig::prior)
      .def_readwrite("opts_gamp", &SweepConfig::opts_gamp)
      .def_readwrite("opts_em", &SweepConfig::opts_em);

  py::class_<PhasePoint>(m, "PhasePoint")
      .def_readonly("solver", &PhasePoint::solver)
      .def_readonly("m_over_n", &PhasePoint::m_over_n)
      .def_readonly("k_over_m_half", &PhasePoint::k_over_m_half)
      .def_readonly("bracketed", &PhasePoint::bracketed)
      .def_readonly("probes", &PhasePoint::probes)
      .def_readonly("trials", &PhasePoint::trials);

  py::class_<RuntimePoint>(m, "RuntimePoint")
      .def_readonly("n", &RuntimePoint::n)
      .def_readonly("solver", &RuntimePoint::solver)
      .def_readonly("mean_time_s", &RuntimePoint::mean_time_s)
      .def_readonly("trials", &RuntimePoint::trials)
      .def_readonly("failures", &RuntimePoint::failures);

  py::class_<NmsePoint>(m, "NmsePoint")
      .def_readonly("m_over_n", &NmsePoint::m_over_n)
      .def_readonly("solver", &NmsePoint::solver)
      .def_readonly("mean_nmse", &NmsePoint::mean_nmse)
      .def_readonly("trials", &NmsePoint::trials)
      .def_readonly("failures", &NmsePoint::failures);

  m.def("run_trial", &run_trial, py::arg("spec"), py::arg("solver"), py::arg("threshold"),
        py::arg("prior") = PriorConfig{}, py::arg("opts") = EmOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("success_rate", &success_rate, py::arg("results"));
  m.def("phase_transition", &phase_transition, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("runtime_sweep", &runtime_sweep, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("nmse_sweep", &nmse_sweep, py::arg("cfg"), py::call_guard<py::gil_scoped_release>());

#ifdef SBLGAMP_VERSION
  m.attr("__version__") = SBLGAMP_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}

// Command-line frontend: single-instance recovery from files, the three
// Monte-Carlo sweeps driven by a flat key = value config, and a fast
// self-test of the solver invariants.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sblgamp/bench.hpp"
#include "sblgamp/io.hpp"

using namespace sblgamp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

// Everything a run needs, resolved from defaults, then the config file,
// then explicit command-line flags.
struct Settings {
  std::string solver = "sbl-gamp";
  std::uint64_t seed = 1;
  int workers = 1;
  double threshold = 1e-6;
  std::string out;

  PriorConfig prior{};

  double em_tol_outer = 1e-10;
  std::optional<int> em_max_iters;      // unset: 200 for sbl-gamp, 500 for sbl-em
  double em_alpha0 = 1.0;
  std::optional<double> em_gamma0;      // unset: M / ||y||^2
  bool em_warm_start = false;

  GampOptions gamp{};

  int sweep_n = 200;
  int sweep_k = 0;
  int sweep_trials = 50;
  std::optional<double> sweep_snr_db;   // unset: noiseless
  std::vector<double> m_over_n_list = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> n_list = {100, 200, 400, 800};
  double m_over_n = 0.4;
  double k_over_m = 0.3;
  NonzeroDist nonzero_dist = NonzeroDist::gaussian;

  EmOptions em_options_for(Solver s) const {
    EmOptions opts = s == Solver::sbl_em ? default_em_options() : EmOptions{};
    opts.tol_outer = em_tol_outer;
    if (em_max_iters) opts.max_em_iters = *em_max_iters;
    opts.alpha0 = em_alpha0;
    opts.gamma0 = em_gamma0;
    opts.warm_start = em_warm_start;
    opts.gamp = gamp;
    return opts;
  }

  std::vector<Solver> solver_set() const {
    if (solver == "both") return {Solver::sbl_gamp, Solver::sbl_em};
    return {solver_from_string(solver)};
  }

  SweepConfig sweep_config() const {
    SweepConfig cfg;
    cfg.solvers = solver_set();
    cfg.n = sweep_n;
    cfg.k = sweep_k;
    cfg.m_over_n_list = m_over_n_list;
    cfg.n_list = n_list;
    cfg.m_over_n = m_over_n;
    cfg.k_over_m = k_over_m;
    cfg.trials_per_cell = sweep_trials;
    cfg.success_threshold = threshold;
    cfg.master_seed = seed;
    cfg.snr_db = sweep_snr_db;
    cfg.nonzero_dist = nonzero_dist;
    cfg.workers = workers;
    cfg.prior = prior;
    cfg.opts_gamp = em_options_for(Solver::sbl_gamp);
    cfg.opts_em = em_options_for(Solver::sbl_em);
    return cfg;
  }
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "solver",          "seed",
      "workers",         "threshold",
      "out",             "prior.a",
      "prior.b",         "prior.c",
      "prior.d",         "em.tol_outer",
      "em.max_iters",    "em.alpha0",
      "em.gamma0",       "em.warm_start",
      "gamp.epsilon",    "gamp.max_iters",
      "gamp.damping",    "sweep.kind",
      "sweep.n",         "sweep.k",
      "sweep.trials",    "sweep.snr_db",
      "sweep.m_over_n_list", "sweep.n_list",
      "sweep.m_over_n",  "sweep.k_over_m",
      "sweep.nonzero_dist"};
  return keys;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) out.push_back(token);
  return out;
}

// Applies a parsed config file onto settings; collects every violation
// instead of stopping at the first.
void apply_config(const io::KvConfig& cfg, const std::string& origin, Settings& s,
                  std::optional<std::string>& sweep_kind, std::vector<std::string>& errors) {
  for (const auto& key : cfg.unknown_keys(known_keys())) {
    errors.push_back(origin + ": unknown key '" + key + "'");
  }

  const auto get_double = [&](const std::string& key, double& target) {
    if (!cfg.has(key)) return;
    try {
      target = io::parse_double(cfg.get(key), origin + ": " + key);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  };
  const auto get_int = [&](const std::string& key, int& target) {
    if (!cfg.has(key)) return;
    try {
      const double v = io::parse_double(cfg.get(key), origin + ": " + key);
      if (v != std::floor(v)) throw std::invalid_argument(origin + ": " + key + " must be an integer");
      target = static_cast<int>(v);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  };
  const auto get_bool = [&](const std::string& key, bool& target) {
    if (!cfg.has(key)) return;
    const std::string& v = cfg.get(key);
    if (v == "true" || v == "1") {
      target = true;
    } else if (v == "false" || v == "0") {
      target = false;
    } else {
      errors.push_back(origin + ": " + key + " must be true or false, got '" + v + "'");
    }
  };

  if (cfg.has("solver")) {
    const std::string& v = cfg.get("solver");
    if (v != "sbl-gamp" && v != "sbl-em" && v != "both") {
      errors.push_back(origin + ": solver must be sbl-gamp, sbl-em, or both");
    } else {
      s.solver = v;
    }
  }
  if (cfg.has("seed")) {
    try {
      s.seed = std::stoull(cfg.get("seed"));
    } catch (const std::exception&) {
      errors.push_back(origin + ": seed must be an unsigned integer");
    }
  }
  get_int("workers", s.workers);
  get_double("threshold", s.threshold);
  if (cfg.has("out")) s.out = cfg.get("out");

  get_double("prior.a", s.prior.a);
  get_double("prior.b", s.prior.b);
  get_double("prior.c", s.prior.c);
  get_double("prior.d", s.prior.d);

  get_double("em.tol_outer", s.em_tol_outer);
  if (cfg.has("em.max_iters")) {
    if (cfg.get("em.max_iters") == "auto") {
      s.em_max_iters.reset();
    } else {
      int v = 0;
      get_int("em.max_iters", v);
      if (v != 0) s.em_max_iters = v;
    }
  }
  get_double("em.alpha0", s.em_alpha0);
  if (cfg.has("em.gamma0")) {
    if (cfg.get("em.gamma0") == "auto") {
      s.em_gamma0.reset();
    } else {
      double v = 0.0;
      get_double("em.gamma0", v);
      s.em_gamma0 = v;
    }
  }
  get_bool("em.warm_start", s.em_warm_start);

  get_double("gamp.epsilon", s.gamp.epsilon);
  get_int("gamp.max_iters", s.gamp.max_iters);
  get_double("gamp.damping", s.gamp.damping);

  if (cfg.has("sweep.kind")) sweep_kind = cfg.get("sweep.kind");
  get_int("sweep.n", s.sweep_n);
  get_int("sweep.k", s.sweep_k);
  get_int("sweep.trials", s.sweep_trials);
  if (cfg.has("sweep.snr_db")) {
    if (cfg.get("sweep.snr_db") == "noiseless") {
      s.sweep_snr_db.reset();
    } else {
      double v = 0.0;
      get_double("sweep.snr_db", v);
      s.sweep_snr_db = v;
    }
  }
  if (cfg.has("sweep.m_over_n_list")) {
    std::vector<double> values;
    for (const auto& tok : split_list(cfg.get("sweep.m_over_n_list"))) {
      try {
        values.push_back(io::parse_double(tok, origin + ": sweep.m_over_n_list"));
      } catch (const std::exception& e) {
        errors.push_back(e.what());
      }
    }
    if (!values.empty()) s.m_over_n_list = values;
  }
  if (cfg.has("sweep.n_list")) {
    std::vector<int> values;
    for (const auto& tok : split_list(cfg.get("sweep.n_list"))) {
      try {
        values.push_back(static_cast<int>(io::parse_double(tok, origin + ": sweep.n_list")));
      } catch (const std::exception& e) {
        errors.push_back(e.what());
      }
    }
    if (!values.empty()) s.n_list = values;
  }
  get_double("sweep.m_over_n", s.m_over_n);
  get_double("sweep.k_over_m", s.k_over_m);
  if (cfg.has("sweep.nonzero_dist")) {
    const std::string& v = cfg.get("sweep.nonzero_dist");
    if (v == "gaussian") {
      s.nonzero_dist = NonzeroDist::gaussian;
    } else if (v == "rademacher") {
      s.nonzero_dist = NonzeroDist::rademacher;
    } else {
      errors.push_back(origin + ": sweep.nonzero_dist must be gaussian or rademacher");
    }
  }
}

io::KvConfig settings_to_config(const Settings& s, const std::string& sweep_kind) {
  io::KvConfig cfg;
  cfg.set("solver", s.solver);
  cfg.set("seed", std::to_string(s.seed));
  cfg.set("workers", std::to_string(s.workers));
  cfg.set("threshold", io::format_double(s.threshold));
  if (!s.out.empty()) cfg.set("out", s.out);
  cfg.set("prior.a", io::format_double(s.prior.a));
  cfg.set("prior.b", io::format_double(s.prior.b));
  cfg.set("prior.c", io::format_double(s.prior.c));
  cfg.set("prior.d", io::format_double(s.prior.d));
  cfg.set("em.tol_outer", io::format_double(s.em_tol_outer));
  cfg.set("em.max_iters", s.em_max_iters ? std::to_string(*s.em_max_iters) : "auto");
  cfg.set("em.alpha0", io::format_double(s.em_alpha0));
  cfg.set("em.gamma0", s.em_gamma0 ? io::format_double(*s.em_gamma0) : "auto");
  cfg.set("em.warm_start", s.em_warm_start ? "true" : "false");
  cfg.set("gamp.epsilon", io::format_double(s.gamp.epsilon));
  cfg.set("gamp.max_iters", std::to_string(s.gamp.max_iters));
  cfg.set("gamp.damping", io::format_double(s.gamp.damping));
  if (!sweep_kind.empty()) cfg.set("sweep.kind", sweep_kind);
  cfg.set("sweep.n", std::to_string(s.sweep_n));
  cfg.set("sweep.k", std::to_string(s.sweep_k));
  cfg.set("sweep.trials", std::to_string(s.sweep_trials));
  cfg.set("sweep.snr_db", s.sweep_snr_db ? io::format_double(*s.sweep_snr_db) : "noiseless");
  std::string mn_list;
  for (const double v : s.m_over_n_list) {
    if (!mn_list.empty()) mn_list += ",";
    mn_list += io::format_double(v);
  }
  cfg.set("sweep.m_over_n_list", mn_list);
  std::string nl;
  for (const int v : s.n_list) {
    if (!nl.empty()) nl += ",";
    nl += std::to_string(v);
  }
  cfg.set("sweep.n_list", nl);
  cfg.set("sweep.m_over_n", io::format_double(s.m_over_n));
  cfg.set("sweep.k_over_m", io::format_double(s.k_over_m));
  cfg.set("sweep.nonzero_dist",
          s.nonzero_dist == NonzeroDist::gaussian ? "gaussian" : "rademacher");
  return cfg;
}

void write_manifest(const Settings& s, const std::string& kind, const std::string& out_path) {
  std::ofstream out(out_path + ".manifest");
  if (!out) throw std::invalid_argument("cannot open '" + out_path + ".manifest' for writing");
  out << settings_to_config(s, kind).to_text();
}

int cmd_recover(const Settings& s, const std::string& matrix_path, const std::string& obs_path,
                const std::string& truth_path) {
  if (s.solver == "both") {
    std::cerr << "error: recover requires a single solver (sbl-gamp or sbl-em)\n";
    return kExitUsage;
  }
  if (s.out.empty()) {
    std::cerr << "error: recover requires --out\n";
    return kExitUsage;
  }
  const Solver solver = solver_from_string(s.solver);

  ProblemInstance inst;
  inst.A = io::load_matrix(matrix_path);
  inst.y = io::load_vector(obs_path);
  if (inst.y.size() != inst.A.rows()) {
    std::cerr << "error: " << obs_path << " has length " << inst.y.size() << " but " << matrix_path
              << " has " << inst.A.rows() << " rows\n";
    return kExitUsage;
  }
  if (!truth_path.empty()) {
    Vector truth = io::load_vector(truth_path);
    if (truth.size() != inst.A.cols()) {
      std::cerr << "error: " << truth_path << " has length " << truth.size() << " but "
                << matrix_path << " has " << inst.A.cols() << " columns\n";
      return kExitUsage;
    }
    inst.truth = std::move(truth);
  }
  inst.validate();

  const EmOptions opts = s.em_options_for(solver);
  const auto t0 = std::chrono::steady_clock::now();
  const RecoveryResult res = solver == Solver::sbl_em ? sbl_em_solve(inst, s.prior, opts)
                                                      : sbl_gamp_solve(inst, s.prior, opts);
  const auto t1 = std::chrono::steady_clock::now();

  std::ofstream out(s.out);
  if (!out) throw std::invalid_argument("cannot open '" + s.out + "' for writing");
  out << "x_hat,x_var\n";
  for (Eigen::Index j = 0; j < res.x_hat.size(); ++j) {
    out << io::format_double(res.x_hat[j]) << ',' << io::format_double(res.x_var[j]) << '\n';
  }

  std::cout << "solver: " << to_string(solver) << "\n"
            << "em_iters: " << res.em_iters << "\n"
            << "inner_iters_total: " << res.inner_iters_total << "\n"
            << "converged: " << (res.converged ? "true" : "false") << "\n"
            << "wall_time_s: " << std::chrono::duration<double>(t1 - t0).count() << "\n";
  if (res.nmse) {
    std::cout << "nmse: " << io::format_double(*res.nmse) << "\n";
  }
  return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_phase(const Settings& s) {
  const auto points = phase_transition(s.sweep_config());
  std::ofstream out(s.out);
  if (!out) throw std::invalid_argument("cannot open '" + s.out + "' for writing");
  out << "solver,m_over_n,k_over_m_half,bracketed,probes,trials\n";
  for (const auto& pt : points) {
    out << to_string(pt.solver) << ',' << io::format_double(pt.m_over_n) << ','
        << io::format_double(pt.k_over_m_half) << ',' << (pt.bracketed ? "true" : "false") << ','
        << pt.probes << ',' << pt.trials << '\n';
  }
  write_manifest(s, "phase", s.out);
  std::cout << "wrote " << points.size() << " phase points to " << s.out << "\n";
  return kExitOk;
}

int cmd_runtime(const Settings& s) {
  const SweepConfig cfg = s.sweep_config();
  const auto points = runtime_sweep(cfg);
  std::ofstream out(s.out);
  if (!out) throw std::invalid_argument("cannot open '" + s.out + "' for writing");
  // wide rows: one per N, mean times for every selected solver side by side
  out << "n";
  for (const Solver solver : cfg.solvers) {
    std::string tag = to_string(solver);
    for (auto& c : tag) {
      if (c == '-') c = '_';
    }
    out << ",mean_time_s_" << tag << ",trials_" << tag << ",failures_" << tag;
  }
  out << '\n';
  for (std::size_t i = 0; i < points.size(); i += cfg.solvers.size()) {
    out << points[i].n;
    for (std::size_t k = 0; k < cfg.solvers.size(); ++k) {
      const auto& pt = points[i + k];
      out << ',' << io::format_double(pt.mean_time_s) << ',' << pt.trials << ',' << pt.failures;
    }
    out << '\n';
  }
  write_manifest(s, "runtime", s.out);
  std::cout << "wrote " << points.size() << " runtime cells to " << s.out << "\n";
  return kExitOk;
}

int cmd_nmse(const Settings& s) {
  const auto points = nmse_sweep(s.sweep_config());
  std::ofstream out(s.out);
  if (!out) throw std::invalid_argument("cannot open '" + s.out + "' for writing");
  out << "m_over_n,solver,mean_nmse,trials,failures\n";
  for (const auto& pt : points) {
    out << io::format_double(pt.m_over_n) << ',' << to_string(pt.solver) << ','
        << io::format_double(pt.mean_nmse) << ',' << pt.trials << ',' << pt.failures << '\n';
  }
  write_manifest(s, "nmse", s.out);
  std::cout << "wrote " << points.size() << " nmse cells to " << s.out << "\n";
  return kExitOk;
}

bool selftest_scalar_identities() {
  if (g_in(2.0, 1.0, 1.0) != 1.0) return false;
  if (g_in_var(0.5, 0.0) != 0.5) return false;
  if (g_out(2.0, 0.5, 2.0, 3.0) != 1.0) return false;
  if (g_out_neg_deriv(0.5, 2.0) != 1.0) return false;
  Rng rng(404);
  for (int i = 0; i < 10000; ++i) {
    const double p = 4.0 * rng.normal();
    const double y = 4.0 * rng.normal();
    const double tau = std::pow(10.0, 8.0 * rng.uniform01() - 4.0);
    const double gamma = std::pow(10.0, 8.0 * rng.uniform01() - 4.0);
    const double lhs = g_out(p, tau, gamma, y);
    const double rhs = (y - p) / (1.0 / gamma + tau);
    if (std::abs(lhs - rhs) > 1e-14 * std::max(std::abs(lhs), std::abs(rhs))) return false;
    const double m = g_in(p, tau, gamma);
    if (moment_x2(p, tau, gamma) != m * m + g_in_var(tau, gamma)) return false;
  }
  return true;
}

bool selftest_fixed_point() {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrialSpec spec;
    spec.n = 100;
    spec.m = 50;
    spec.k = 10;
    spec.snr_db = 25.0;
    spec.seed = seed;
    const ProblemInstance inst = make_instance(spec);
    const Hyperparams hyper{Vector::Ones(100), 100.0};
    const GampOutput out = gamp_run(inst, hyper);
    if (!out.converged) return false;
    Eigen::MatrixXd h = hyper.gamma * (inst.A.transpose() * inst.A);
    h.diagonal() += hyper.alpha;
    const Vector rhs = hyper.gamma * (inst.A.transpose() * inst.y);
    if ((h * out.mu_x - rhs).norm() / rhs.norm() > 1e-5) return false;
  }
  return true;
}

bool selftest_odd_symmetry() {
  TrialSpec spec;
  spec.n = 60;
  spec.m = 24;
  spec.k = 5;
  spec.snr_db = 25.0;
  spec.seed = 11;
  ProblemInstance inst = make_instance(spec);
  inst.truth.reset();
  ProblemInstance neg = inst;
  neg.y = -inst.y;
  for (const Solver solver : {Solver::sbl_gamp, Solver::sbl_em}) {
    const auto solve = [&](const ProblemInstance& in) {
      return solver == Solver::sbl_em ? sbl_em_solve(in) : sbl_gamp_solve(in);
    };
    const RecoveryResult a = solve(inst);
    const RecoveryResult b = solve(neg);
    if (a.em_iters != b.em_iters || a.hyper.gamma != b.hyper.gamma) return false;
    for (int j = 0; j < spec.n; ++j) {
      if (a.x_hat[j] != -b.x_hat[j]) return false;
      if (a.hyper.alpha[j] != b.hyper.alpha[j]) return false;
    }
  }
  return true;
}

bool selftest_permutation() {
  TrialSpec spec;
  spec.n = 40;
  spec.m = 16;
  spec.k = 4;
  spec.snr_db = 30.0;
  spec.seed = 13;
  ProblemInstance inst = make_instance(spec);
  inst.truth.reset();
  ProblemInstance perm = inst;
  for (int j = 0; j < spec.n; ++j) perm.A.col(j) = inst.A.col(spec.n - 1 - j);
  const RecoveryResult a = sbl_gamp_solve(inst);
  const RecoveryResult b = sbl_gamp_solve(perm);
  for (int j = 0; j < spec.n; ++j) {
    if (std::abs(a.x_hat[j] - b.x_hat[spec.n - 1 - j]) >
        1e-8 * std::max(std::abs(a.x_hat[j]), 1.0)) {
      return false;
    }
  }
  return true;
}

int cmd_selftest() {
  struct Check {
    const char* name;
    bool (*fn)();
  };
  const Check checks[] = {
      {"scalar channel identities", selftest_scalar_identities},
      {"gamp fixed-point oracle (M=50, N=100)", selftest_fixed_point},
      {"odd symmetry of both solvers", selftest_odd_symmetry},
      {"column-permutation equivariance", selftest_permutation},
  };
  bool all_ok = true;
  for (const auto& check : checks) {
    const bool ok = check.fn();
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << check.name << "\n";
  }
  std::cout << (all_ok ? "selftest passed" : "selftest FAILED") << "\n";
  return all_ok ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Bayesian learning solvers (exact EM and GAMP-accelerated)"};
  app.require_subcommand(0, 1);
  app.fallthrough();   // global flags may follow the subcommand

  std::string config_path;
  bool print_defaults = false;
  app.add_option("--config", config_path, "flat key = value configuration file")
      ->expected(1);
  app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");

  // flag presence is tracked so explicit flags override the config file
  std::string flag_solver;
  std::uint64_t flag_seed = 0;
  int flag_workers = 0;
  double flag_threshold = 0.0;
  std::string flag_out;
  auto* opt_solver = app.add_option("--solver", flag_solver, "sbl-gamp, sbl-em, or both")
                         ->check(CLI::IsMember({"sbl-gamp", "sbl-em", "both"}));
  auto* opt_seed = app.add_option("--seed", flag_seed, "master seed");
  auto* opt_workers = app.add_option("--workers", flag_workers, "concurrent trial workers");
  auto* opt_threshold = app.add_option("--threshold", flag_threshold, "success threshold on NMSE");
  auto* opt_out = app.add_option("--out", flag_out, "output path");

  auto* recover = app.add_subcommand("recover", "recover a signal from matrix and observation files");
  std::string matrix_path, obs_path, truth_path;
  recover->add_option("matrix", matrix_path, "sensing matrix (.csv or .bin)")->required();
  recover->add_option("observation", obs_path, "observation vector (.csv or .bin)")->required();
  recover->add_option("--truth", truth_path, "ground-truth vector for NMSE reporting");

  auto* phase = app.add_subcommand("phase", "phase-transition contour sweep (noiseless)");
  auto* runtime = app.add_subcommand("runtime", "runtime scaling sweep over N");
  auto* nmse_cmd = app.add_subcommand("nmse", "NMSE vs M/N sweep (noisy)");
  auto* selftest = app.add_subcommand("selftest", "run the fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    Settings settings;
    std::optional<std::string> manifest_kind;
    std::vector<std::string> errors;
    if (!config_path.empty()) {
      apply_config(io::KvConfig::parse_file(config_path), config_path, settings, manifest_kind,
                   errors);
    }
    if (!errors.empty()) {
      for (const auto& e : errors) std::cerr << "error: " << e << "\n";
      return kExitUsage;
    }
    if (opt_solver->count()) settings.solver = flag_solver;
    if (opt_seed->count()) settings.seed = flag_seed;
    if (opt_workers->count()) settings.workers = flag_workers;
    if (opt_threshold->count()) settings.threshold = flag_threshold;
    if (opt_out->count()) settings.out = flag_out;

    if (print_defaults) {
      std::cout << settings_to_config(Settings{}, "").to_text();
      return kExitOk;
    }

    const auto check_kind = [&](const std::string& kind) {
      if (manifest_kind && *manifest_kind != kind) {
        throw std::invalid_argument("config is a '" + *manifest_kind +
                                    "' manifest but the subcommand is '" + kind + "'");
      }
      if (settings.out.empty()) {
        throw std::invalid_argument(kind + " requires --out (or 'out' in the config)");
      }
    };

    if (recover->parsed()) {
      return cmd_recover(settings, matrix_path, obs_path, truth_path);
    }
    if (phase->parsed()) {
      check_kind("phase");
      return cmd_phase(settings);
    }
    if (runtime->parsed()) {
      check_kind("runtime");
      return cmd_runtime(settings);
    }
    if (nmse_cmd->parsed()) {
      check_kind("nmse");
      return cmd_nmse(settings);
    }
    if (selftest->parsed()) {
      return cmd_selftest();
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

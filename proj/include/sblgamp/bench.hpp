#pragma once

#include <string>
#include <vector>

#include "sblgamp/sbl_gamp.hpp"
#include "sblgamp/synth.hpp"

namespace sblgamp {

enum class Solver { sbl_gamp, sbl_em };

const char* to_string(Solver s);
Solver solver_from_string(const std::string& name);

struct TrialResult {
  TrialSpec spec;
  Solver solver = Solver::sbl_gamp;
  double nmse = 0.0;
  bool success = false;
  double wall_time_s = 0.0;
  int em_iters = 0;
  long inner_iters_total = 0;
  bool converged = false;
  bool retried = false;
};

/// One configuration drives all three sweeps; each uses the fields it needs.
struct SweepConfig {
  std::vector<Solver> solvers = {Solver::sbl_gamp};

  // Phase-transition and NMSE sweeps: fixed N, grid over M/N.
  int n = 200;
  std::vector<double> m_over_n_list = {0.1, 0.2, 0.3, 0.4, 0.5};

  // NMSE sweep: fixed sparsity.
  int k = 0;

  // Runtime sweep: N list with proportional M and K.
  std::vector<int> n_list = {100, 200, 400, 800};
  double m_over_n = 0.4;
  double k_over_m = 0.3;

  int trials_per_cell = 50;
  double success_threshold = 1e-6;
  std::uint64_t master_seed = 1;
  std::optional<double> snr_db;   // unset = noiseless
  NonzeroDist nonzero_dist = NonzeroDist::gaussian;
  int workers = 1;

  PriorConfig prior{};
  EmOptions opts_gamp{};
  EmOptions opts_em = default_em_options();

  const EmOptions& options_for(Solver s) const {
    return s == Solver::sbl_em ? opts_em : opts_gamp;
  }
};

struct PhasePoint {
  Solver solver = Solver::sbl_gamp;
  double m_over_n = 0.0;
  double k_over_m_half = 0.0;   // K/M at the estimated 0.5-success contour
  bool bracketed = false;       // false when the rate never crosses 0.5 on [1, M]
  int probes = 0;               // success-rate evaluations spent
  int trials = 0;               // trials per probe
};

struct RuntimePoint {
  int n = 0;
  Solver solver = Solver::sbl_gamp;
  double mean_time_s = 0.0;
  int trials = 0;     // trials included in the mean
  int failures = 0;   // excluded solver failures
};

struct NmsePoint {
  double m_over_n = 0.0;
  Solver solver = Solver::sbl_gamp;
  double mean_nmse = 0.0;
  int trials = 0;
  int failures = 0;   // non-converged trials (still included in the mean)
};

/// Generates the instance, times the solver call only, and scores the result.
/// Solver failure is recorded, never thrown.
TrialResult run_trial(const TrialSpec& spec, Solver solver, double threshold,
                      const PriorConfig& prior = {}, const EmOptions& opts = {});

/// successes / total. Throws std::invalid_argument on an empty collection.
double success_rate(const std::vector<TrialResult>& results);

/// For each M/N, bisects on integer K for the sparsity where the empirical
/// success rate crosses 0.5. Noiseless configs only.
std::vector<PhasePoint> phase_transition(const SweepConfig& cfg);

/// Mean solver wall time per N; failures are excluded from means and counted.
/// Always runs trials sequentially regardless of cfg.workers.
std::vector<RuntimePoint> runtime_sweep(const SweepConfig& cfg);

/// Mean NMSE per (M/N, solver) cell with paired trial seeds across solvers.
std::vector<NmsePoint> nmse_sweep(const SweepConfig& cfg);

}  // namespace sblgamp

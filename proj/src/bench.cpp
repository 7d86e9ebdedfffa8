#include "sblgamp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace sblgamp {

const char* to_string(Solver s) {
  return s == Solver::sbl_gamp ? "sbl-gamp" : "sbl-em";
}

Solver solver_from_string(const std::string& name) {
  if (name == "sbl-gamp" || name == "sbl_gamp") return Solver::sbl_gamp;
  if (name == "sbl-em" || name == "sbl_em") return Solver::sbl_em;
  throw std::invalid_argument("unknown solver '" + name + "' (expected sbl-gamp or sbl-em)");
}

namespace {

// Stream tags separating the three sweep kinds in the seed derivation chain.
constexpr std::uint64_t kPhaseStream = 101;
constexpr std::uint64_t kRuntimeStream = 201;
constexpr std::uint64_t kNmseStream = 301;

// Runs fn(0..count-1) on up to `workers` threads; each index owns its own
// output slot, so aggregation is independent of completion order.
template <typename F>
void parallel_for(int count, int workers, F&& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

int checked_dim(double ratio, int base, const char* what) {
  const int v = static_cast<int>(std::llround(ratio * base));
  if (v < 1) {
    throw std::invalid_argument(std::string("sweep: derived ") + what +
                                " is below 1 (ratio too small)");
  }
  return v;
}

}  // namespace

TrialResult run_trial(const TrialSpec& spec, Solver solver, double threshold,
                      const PriorConfig& prior, const EmOptions& opts) {
  spec.validate();
  if (!(threshold > 0.0)) throw std::invalid_argument("run_trial: threshold must be positive");
  const ProblemInstance inst = make_instance(spec);

  TrialResult tr;
  tr.spec = spec;
  tr.solver = solver;

  RecoveryResult res;
  bool solver_error = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    res = solver == Solver::sbl_em ? sbl_em_solve(inst, prior, opts)
                                   : sbl_gamp_solve(inst, prior, opts);
  } catch (const std::exception&) {
    solver_error = true;
  }
  const auto t1 = std::chrono::steady_clock::now();
  tr.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

  if (solver_error) {
    // Score a failed solve as the zero estimate.
    tr.nmse = 1.0;
    tr.converged = false;
    tr.success = false;
    return tr;
  }
  tr.nmse = res.nmse.value_or(1.0);
  tr.success = tr.nmse <= threshold;
  tr.em_iters = res.em_iters;
  tr.inner_iters_total = res.inner_iters_total;
  tr.converged = res.converged;
  tr.retried = res.gamp_retries > 0;
  return tr;
}

double success_rate(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("success_rate: empty collection");
  std::size_t hits = 0;
  for (const auto& r : results) hits += r.success ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

namespace {

// Empirical success rate at one (M/N, K) probe; trials run in parallel.
double probe_rate(const SweepConfig& cfg, Solver solver, std::uint64_t cell, int m_rows, int k) {
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials_per_cell));
  parallel_for(cfg.trials_per_cell, cfg.workers, [&](int j) {
    TrialSpec spec;
    spec.n = cfg.n;
    spec.m = m_rows;
    spec.k = k;
    spec.snr_db = cfg.snr_db;
    spec.nonzero_dist = cfg.nonzero_dist;
    spec.seed = derive_seed(cfg.master_seed, kPhaseStream, cell,
                            (static_cast<std::uint64_t>(k) << 32) |
                                static_cast<std::uint64_t>(j));
    results[static_cast<std::size_t>(j)] =
        run_trial(spec, solver, cfg.success_threshold, cfg.prior, cfg.options_for(solver));
  });
  return success_rate(results);
}

}  // namespace

std::vector<PhasePoint> phase_transition(const SweepConfig& cfg) {
  if (cfg.snr_db) {
    throw std::invalid_argument("phase_transition: requires a noiseless configuration");
  }
  if (cfg.m_over_n_list.empty()) throw std::invalid_argument("phase_transition: empty grid");
  if (cfg.trials_per_cell < 1) {
    throw std::invalid_argument("phase_transition: trials_per_cell must be at least 1");
  }

  std::vector<PhasePoint> points;
  for (std::size_t ci = 0; ci < cfg.m_over_n_list.size(); ++ci) {
    const double mn = cfg.m_over_n_list[ci];
    const int m_rows = checked_dim(mn, cfg.n, "M");
    const int k_max = std::min(m_rows, cfg.n);
    for (const Solver solver : cfg.solvers) {
      PhasePoint pt;
      pt.solver = solver;
      pt.m_over_n = mn;
      pt.trials = cfg.trials_per_cell;

      int k_lo = 1;
      double r_lo = probe_rate(cfg, solver, ci, m_rows, k_lo);
      ++pt.probes;
      if (r_lo <= 0.5) {
        pt.k_over_m_half = 0.0;
        pt.bracketed = false;
        points.push_back(pt);
        continue;
      }
      int k_hi = k_max;
      double r_hi = r_lo;
      if (k_hi > k_lo) {
        r_hi = probe_rate(cfg, solver, ci, m_rows, k_hi);
        ++pt.probes;
      }
      if (r_hi > 0.5) {
        pt.k_over_m_half = 1.0;
        pt.bracketed = false;
        points.push_back(pt);
        continue;
      }
      while (k_hi - k_lo > 1) {
        const int k_mid = k_lo + (k_hi - k_lo) / 2;
        const double r_mid = probe_rate(cfg, solver, ci, m_rows, k_mid);
        ++pt.probes;
        if (r_mid > 0.5) {
          k_lo = k_mid;
        } else {
          k_hi = k_mid;
        }
      }
      pt.k_over_m_half = 0.5 * (k_lo + k_hi) / static_cast<double>(m_rows);
      pt.bracketed = true;
      points.push_back(pt);
    }
  }
  return points;
}

std::vector<RuntimePoint> runtime_sweep(const SweepConfig& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("runtime_sweep: empty N list");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end())) {
    throw std::invalid_argument("runtime_sweep: N list must be sorted ascending");
  }
  if (cfg.trials_per_cell < 1) {
    throw std::invalid_argument("runtime_sweep: trials_per_cell must be at least 1");
  }

  std::vector<RuntimePoint> points;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const int n = cfg.n_list[ni];
    const int m_rows = checked_dim(cfg.m_over_n, n, "M");
    const int k = std::min(checked_dim(cfg.k_over_m, m_rows, "K"), n);
    for (const Solver solver : cfg.solvers) {
      RuntimePoint pt;
      pt.n = n;
      pt.solver = solver;
      double total = 0.0;
      // Sequential on purpose: concurrent trials would distort wall times.
      // Trial -1 is an untimed warmup so cold caches and lazy page faults do
      // not inflate the first timed sample.
      for (int j = -1; j < cfg.trials_per_cell; ++j) {
        TrialSpec spec;
        spec.n = n;
        spec.m = m_rows;
        spec.k = k;
        spec.snr_db = cfg.snr_db;
        spec.nonzero_dist = cfg.nonzero_dist;
        spec.seed = derive_seed(cfg.master_seed, kRuntimeStream, ni,
                                static_cast<std::uint64_t>(std::max(j, 0)));
        const TrialResult tr =
            run_trial(spec, solver, cfg.success_threshold, cfg.prior, cfg.options_for(solver));
        if (j < 0) continue;
        if (tr.em_iters == 0 && !tr.converged) {
          // Solver error; its time sample is meaningless.
          ++pt.failures;
          continue;
        }
        total += tr.wall_time_s;
        ++pt.trials;
      }
      pt.mean_time_s = pt.trials > 0 ? total / pt.trials : 0.0;
      points.push_back(pt);
    }
  }
  return points;
}

std::vector<NmsePoint> nmse_sweep(const SweepConfig& cfg) {
  if (!cfg.snr_db) throw std::invalid_argument("nmse_sweep: requires a noisy configuration");
  if (cfg.m_over_n_list.empty()) throw std::invalid_argument("nmse_sweep: empty grid");
  if (cfg.k < 1) throw std::invalid_argument("nmse_sweep: k must be at least 1");
  if (cfg.trials_per_cell < 1) {
    throw std::invalid_argument("nmse_sweep: trials_per_cell must be at least 1");
  }

  std::vector<NmsePoint> points;
  for (std::size_t ci = 0; ci < cfg.m_over_n_list.size(); ++ci) {
    const double mn = cfg.m_over_n_list[ci];
    const int m_rows = checked_dim(mn, cfg.n, "M");
    for (const Solver solver : cfg.solvers) {
      std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials_per_cell));
      parallel_for(cfg.trials_per_cell, cfg.workers, [&](int j) {
        TrialSpec spec;
        spec.n = cfg.n;
        spec.m = m_rows;
        spec.k = cfg.k;
        spec.snr_db = cfg.snr_db;
        spec.nonzero_dist = cfg.nonzero_dist;
        spec.seed = derive_seed(cfg.master_seed, kNmseStream, ci, static_cast<std::uint64_t>(j));
        results[static_cast<std::size_t>(j)] =
            run_trial(spec, solver, cfg.success_threshold, cfg.prior, cfg.options_for(solver));
      });
      NmsePoint pt;
      pt.m_over_n = mn;
      pt.solver = solver;
      pt.trials = cfg.trials_per_cell;
      double total = 0.0;
      for (const auto& tr : results) {
        total += tr.nmse;
        if (!tr.converged) ++pt.failures;
      }
      pt.mean_nmse = total / cfg.trials_per_cell;
      points.push_back(pt);
    }
  }
  return points;
}

}  // namespace sblgamp

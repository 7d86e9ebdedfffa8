#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

namespace sblgamp {

// Dense row-major matrices throughout; all reals are 64-bit.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Clamping bounds for the learned hyperparameters. Noiseless problems drive
// gamma toward infinity and pruned coefficients drive alpha toward infinity;
// clamping keeps every formula finite.
inline constexpr double kAlphaMin = 1e-12;
inline constexpr double kAlphaMax = 1e12;
inline constexpr double kGammaMax = 1e12;

inline double clamp_alpha(double a) { return std::min(std::max(a, kAlphaMin), kAlphaMax); }
inline double clamp_gamma(double g) { return std::min(g, kGammaMax); }

/// A linear measurement problem y = A x + w.
struct ProblemInstance {
  Matrix A;                          // M x N sensing matrix
  Vector y;                          // length-M observation
  std::optional<Vector> truth;       // length-N ground truth, when known
  std::optional<double> noise_var;   // sigma^2 = 1/gamma_true, when known

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index cols() const { return A.cols(); }

  /// Throws std::invalid_argument on dimension mismatch or non-finite entries.
  void validate() const;
};

/// Gamma hyperprior parameters: shape/rate (a,b) over the coefficient
/// precisions and (c,d) over the noise precision.
struct PriorConfig {
  double a = 1.0;      // must exceed 0.5 so the alpha numerator 2a-1 stays positive
  double b = 1e-10;
  double c = 1.0;      // c >= 1 keeps M + 2c - 2 positive for every M >= 1
  double d = 1e-10;

  void validate() const;
};

/// Coefficient precisions alpha (one per column of A) and noise precision gamma.
struct Hyperparams {
  Vector alpha;
  double gamma = 1.0;

  void validate() const;
};

/// Output of a full solve, common to both solvers.
struct RecoveryResult {
  Vector x_hat;
  Vector x_var;
  Hyperparams hyper;
  int em_iters = 0;
  long inner_iters_total = 0;
  bool converged = false;
  std::optional<double> nmse;   // present iff the instance carried ground truth
  int gamp_retries = 0;         // damped re-runs after inner divergence (SBL-GAMP only)
};

/// Normalized squared error ||truth - x_hat||^2 / ||truth||^2.
/// Throws std::invalid_argument on length mismatch or zero-norm truth.
double nmse(const Vector& x_hat, const Vector& truth);

/// True iff nmse(x_hat, truth) <= threshold (inclusive).
bool is_success(const Vector& x_hat, const Vector& truth, double threshold);

}  // namespace sblgamp

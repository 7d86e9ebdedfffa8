#include "sblgamp/model.hpp"

#include <cmath>
#include <string>

namespace sblgamp {

void ProblemInstance::validate() const {
  if (A.rows() < 1 || A.cols() < 1) {
    throw std::invalid_argument("ProblemInstance: A must be at least 1x1, got " +
                                std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  }
  if (y.size() != A.rows()) {
    throw std::invalid_argument("ProblemInstance: y has length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(A.rows()));
  }
  if (truth && truth->size() != A.cols()) {
    throw std::invalid_argument("ProblemInstance: truth has length " +
                                std::to_string(truth->size()) + ", expected " +
                                std::to_string(A.cols()));
  }
  if (!A.allFinite() || !y.allFinite() || (truth && !truth->allFinite())) {
    throw std::invalid_argument("ProblemInstance: non-finite entries");
  }
  if (noise_var && (!std::isfinite(*noise_var) || *noise_var < 0.0)) {
    throw std::invalid_argument("ProblemInstance: noise_var must be finite and non-negative");
  }
}

void PriorConfig::validate() const {
  if (!(a > 0.5)) throw std::invalid_argument("PriorConfig: a must exceed 0.5");
  if (!(b >= 0.0)) throw std::invalid_argument("PriorConfig: b must be non-negative");
  if (!(c >= 1.0)) throw std::invalid_argument("PriorConfig: c must be at least 1");
  if (!(d >= 0.0)) throw std::invalid_argument("PriorConfig: d must be non-negative");
}

void Hyperparams::validate() const {
  if (alpha.size() < 1) throw std::invalid_argument("Hyperparams: alpha is empty");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw std::invalid_argument("Hyperparams: alpha[" + std::to_string(i) +
                                  "] must be positive and finite");
    }
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("Hyperparams: gamma must be positive and finite");
  }
}

double nmse(const Vector& x_hat, const Vector& truth) {
  if (x_hat.size() != truth.size()) {
    throw std::invalid_argument("nmse: length mismatch (" + std::to_string(x_hat.size()) +
                                " vs " + std::to_string(truth.size()) + ")");
  }
  const double denom = truth.squaredNorm();
  if (denom == 0.0) {
    throw std::domain_error("nmse: zero-norm truth (degenerate trial)");
  }
  return (truth - x_hat).squaredNorm() / denom;
}

bool is_success(const Vector& x_hat, const Vector& truth, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("is_success: threshold must be positive");
  return nmse(x_hat, truth) <= threshold;
}

}  // namespace sblgamp

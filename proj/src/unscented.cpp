#include "mgcrb/unscented.hpp"

namespace mgcrb {

SigmaSet sigma_points(const StateVector& mean, const StateMatrix& cov, const UnscentedParams& params) {
  constexpr double n = 4.0;
  const double lambda = params.alpha * params.alpha * (n + params.kappa) - n;
  Eigen::LLT<StateMatrix> llt((n + lambda) * cov);
  if (llt.info() != Eigen::Success) throw ContractError("sigma_points: covariance not positive definite");
  const StateMatrix root = llt.matrixL();

  SigmaSet s;
  s.points[0] = mean;
  s.mean_weights[0] = lambda / (n + lambda);
  s.cov_weights[0] = s.mean_weights[0] + (1.0 - params.alpha * params.alpha + params.beta);
  const double w = 1.0 / (2.0 * (n + lambda));
  for (int i = 0; i < 4; ++i) {
    s.points[1 + i] = mean + root.col(i);
    s.points[5 + i] = mean - root.col(i);
    s.mean_weights[1 + i] = s.mean_weights[5 + i] = w;
    s.cov_weights[1 + i] = s.cov_weights[5 + i] = w;
  }
  return s;
}

std::pair<StateVector, StateMatrix> unscented_transform(
    const SigmaSet& sigma, const std::function<StateVector(const StateVector&)>& f) {
  std::array<StateVector, kSigmaCount> y;
  for (int i = 0; i < kSigmaCount; ++i) y[i] = f(sigma.points[i]);
  // weights sum to one, so mean = y0 + sum_i w_i (y_i - y0)
  StateVector offset = StateVector::Zero();
  for (int i = 1; i < kSigmaCount; ++i) offset += sigma.mean_weights[i] * (y[i] - y[0]);
  const StateVector mean = y[0] + offset;
  StateMatrix cov = StateMatrix::Zero();
  for (int i = 0; i < kSigmaCount; ++i) {
    const StateVector d = (y[i] - y[0]) - offset;
    cov += sigma.cov_weights[i] * d * d.transpose();
  }
  return {mean, cov};
}

}  // namespace mgcrb

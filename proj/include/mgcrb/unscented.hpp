#pragma once

#include "mgcrb/types.hpp"

#include <array>
#include <functional>

namespace mgcrb {

/// Scaled unscented transform weights for a 4-dimensional state.
struct UnscentedParams {
  double alpha = 1e-3;
  double beta = 2.0;
  double kappa = 0.0;
};

inline constexpr int kSigmaCount = 9;

struct SigmaSet {
  std::array<StateVector, kSigmaCount> points;
  std::array<double, kSigmaCount> mean_weights;
  std::array<double, kSigmaCount> cov_weights;
};

/// Sigma points around `mean`; throws ContractError if `cov` is not positive definite.
SigmaSet sigma_points(const StateVector& mean, const StateMatrix& cov, const UnscentedParams& params = {});

/// Pushes sigma points through an affine/nonlinear state map; returns mean and covariance.
/// Deviations are formed relative to the central point so large offsets do not cancel.
std::pair<StateVector, StateMatrix> unscented_transform(
    const SigmaSet& sigma, const std::function<StateVector(const StateVector&)>& f);

}  // namespace mgcrb

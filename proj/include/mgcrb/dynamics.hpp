#pragma once

#include "mgcrb/types.hpp"

#include <vector>

namespace mgcrb {

enum class MotionKind { ncv, nct };

struct MotionModel {
  MotionKind kind = MotionKind::ncv;
  double turn_rate = 0.0;        // rad/s, positive turns counterclockwise
  double sample_interval = 1.0;  // s

  static MotionModel ncv(double sample_interval) { return {MotionKind::ncv, 0.0, sample_interval}; }
  static MotionModel nct(double turn_rate, double sample_interval) {
    return {MotionKind::nct, turn_rate, sample_interval};
  }

  void validate() const;
};

/// Noiseless one-step transition matrix (NCV or coordinated turn).
StateMatrix transition_matrix(const MotionModel& model);

StateVector transition(const StateVector& state, const MotionModel& model);

/// Process-noise input gain: columns drive x and y accelerations.
Eigen::Matrix<double, 4, 2> noise_gain(double sample_interval);

/// G diag(q, q) G'.
StateMatrix process_noise_cov(double q_s, double sample_interval);

struct MotionSegment {
  int start_t = 0;  // inclusive
  int end_t = 0;    // exclusive
  MotionModel model;
};

struct TargetPlan {
  StateVector initial_state = StateVector::Zero();
  StateMatrix initial_covariance = StateMatrix::Identity() * 20.0;
  std::vector<MotionSegment> segments;  // gaps fall back to NCV
  double process_noise = 0.1;
  double sample_interval = 1.0;

  /// Model driving the step t -> t+1.
  MotionModel model_at(int t) const;
  void validate(int horizon) const;
};

/// Ground truth for t = 0..horizon (horizon + 1 states). The t = 0 state is drawn from
/// N(initial_state, initial_covariance); every later step applies the active model plus G w.
std::vector<StateVector> generate_truth(const TargetPlan& plan, int horizon, Rng& rng);

}  // namespace mgcrb

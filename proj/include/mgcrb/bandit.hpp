#pragma once

#include "mgcrb/geometry.hpp"
#include "mgcrb/super_arm.hpp"

#include <span>
#include <vector>

namespace mgcrb {

struct PolicyParams {
  double fusion_weight = 0.2;         // weight on the fresh SINR sample for a played arm
  double prediction_blend = 0.998;    // weight on the geometry-driven SINR prediction
  double exploration = 2.0;           // UCB bonus coefficient
  double epsilon = 0.1;               // epsilon-greedy exploration rate
  double baseline_smoothing = 0.998;  // exponential smoothing for UCB1 / epsilon-greedy

  void validate() const;
};

/// Per-target bandit state: estimated SINR means and play counters over the M x N channels.
struct GroupState {
  Eigen::MatrixXd y_hat;
  Eigen::MatrixXi plays;
  int target = 0;

  /// Every channel observed once: means set to the first samples, counters to 1.
  static GroupState warm_start(const Eigen::MatrixXd& first_samples, int target);
};

struct ArmObservation {
  Channel channel;
  double sinr = 0.0;
};

/// Geometry-scaled SINR prediction for one channel:
/// alpha * [L(x_pred) psi / (L(x_est) psi)] * y_prev + (1 - alpha) * y_prev.
double predict_reward(double y_prev, const StateVector& x_pred, const StateVector& x_est, const RadarLayout& layout,
                      const ScatterModel& scatter, Channel channel, int k, double alpha);

/// predict_reward for every channel of a group.
Eigen::MatrixXd predict_rewards(const GroupState& group, const StateVector& x_pred, const StateVector& x_est,
                                const RadarLayout& layout, const ScatterModel& scatter, double alpha);

/// Played arms blend prediction and sample and bump their counter; the rest take the prediction.
GroupState update_group(const GroupState& group, const SuperArm& arm, std::span<const ArmObservation> observations,
                        const Eigen::MatrixXd& predictions, double fusion_weight);

/// means + sqrt(beta ln t / plays), elementwise.
Eigen::MatrixXd ucb_index(const Eigen::MatrixXd& means, const Eigen::MatrixXi& plays, double t, double beta);

/// sum_k omega_k * indices_k.
Eigen::MatrixXd fuse_indices(std::span<const Eigen::MatrixXd> indices, std::span<const double> omega);

/// Exponential smoothing when played, frozen otherwise.
double baseline_update(double y_hat, double gamma, bool played, double smoothing);

/// Running sample mean with play counter.
struct RunningMean {
  double mean = 0.0;
  int count = 0;
};
RunningMean classic_ucb1_update(RunningMean state, double gamma, bool played);

/// sum_k omega_k sum_{(m,n) in arm} S^k_mn.
double expected_reward(const SuperArm& arm, std::span<const Eigen::MatrixXd> means, std::span<const double> omega);

struct ArmChoice {
  SuperArm arm;
  double value = 0.0;
};

/// Exhaustive maximum of sum_k omega_k sum_{(m,n) in arm} values_k over `arms`;
/// the earliest arm wins ties.
ArmChoice exhaustive_argmax(std::span<const SuperArm> arms, std::span<const Eigen::MatrixXd> values,
                            std::span<const double> omega);

}  // namespace mgcrb

#pragma once

#include "mgcrb/dynamics.hpp"
#include "mgcrb/geometry.hpp"
#include "mgcrb/unscented.hpp"

#include <functional>
#include <span>
#include <vector>

namespace mgcrb {

/// Motion hypotheses for the IMM filter, with a Markov switching matrix.
struct ModelBank {
  std::vector<MotionModel> models;
  Eigen::MatrixXd transition_prob;  // row-stochastic, [i][j] = P(j | i)
  Eigen::VectorXd initial_prob;
  double process_noise = 0.1;       // Q_s, matched to the truth generator

  int size() const { return static_cast<int>(models.size()); }
  void validate() const;

  /// NCV plus NCT(+w) and NCT(-w), stay probability `stay` and uniform switching otherwise.
  static ModelBank standard(double sample_interval, double process_noise, double turn_rate,
                            double stay = 0.8, Eigen::VectorXd initial_prob = {});
};

/// Measurement function h(x) -> (z0, z1); z1 is wrapped as an angle when `angular_second` is set.
struct MeasurementFunction {
  std::function<Vec2(const StateVector&)> h;
  bool angular_second = true;
};

/// Bistatic (range sum, receiver bearing) for channel m-n.
MeasurementFunction bistatic_measurement(const RadarLayout& layout, Channel channel);

struct ChannelFilter {
  std::vector<StateVector> states;        // per model
  std::vector<StateMatrix> covariances;   // per model
  Eigen::VectorXd model_prob;
  Channel channel;
  int target = 0;

  static ChannelFilter initialize(const StateVector& state, const StateMatrix& cov,
                                  const Eigen::VectorXd& model_prob, Channel channel, int target);

  /// Probability-weighted combination across models.
  StateVector combined_state() const;
  StateMatrix combined_covariance() const;
};

struct ImmOptions {
  UnscentedParams unscented;
  double innovation_jitter = 1e-9;
};

/// One interaction / UKF predict-update / probability update cycle.
/// Throws FilterDivergenceError when a covariance loses positive definiteness.
ChannelFilter imm_step(const ChannelFilter& filter, const ModelBank& bank, const Vec2& z, const Mat2& meas_cov,
                       const MeasurementFunction& h, const ImmOptions& options = {});

ChannelFilter imm_step(const ChannelFilter& filter, const ModelBank& bank, const Vec2& z, const Mat2& meas_cov,
                       const RadarLayout& layout, const ImmOptions& options = {});

struct FusedEstimate {
  StateVector state = StateVector::Zero();
  Eigen::VectorXd model_prob;
  int contributors = 0;
};

/// Unweighted mean of the channels' combined states and model probabilities.
FusedEstimate fuse_channels(std::span<const ChannelFilter> filters);

/// sum_i u_i F_i(x): probability-weighted one-step prediction of the fused state.
StateVector predict_state(const FusedEstimate& fused, const ModelBank& bank);

}  // namespace mgcrb

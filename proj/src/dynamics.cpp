#include "mgcrb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mgcrb {

void MotionModel::validate() const {
  if (!(sample_interval > 0.0)) throw ConfigError("motion model: sample interval must be > 0");
  if (kind == MotionKind::nct && turn_rate == 0.0) throw ConfigError("motion model: NCT requires nonzero turn rate");
}

StateMatrix transition_matrix(const MotionModel& model) {
  const double dt = model.sample_interval;
  StateMatrix f = StateMatrix::Identity();
  if (model.kind == MotionKind::ncv) {
    f(0, 1) = dt;
    f(2, 3) = dt;
    return f;
  }
  const double w = model.turn_rate;
  const double s = std::sin(w * dt);
  const double c = std::cos(w * dt);
  // clang-format off
  f << 1.0, s / w,             0.0, -(1.0 - c) / w,
       0.0, c,                 0.0, -s,
       0.0, (1.0 - c) / w,     1.0, s / w,
       0.0, s,                 0.0, c;
  // clang-format on
  return f;
}

StateVector transition(const StateVector& state, const MotionModel& model) {
  return transition_matrix(model) * state;
}

Eigen::Matrix<double, 4, 2> noise_gain(double dt) {
  Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
  g(0, 0) = dt * dt / 2.0;
  g(1, 0) = dt;
  g(2, 1) = dt * dt / 2.0;
  g(3, 1) = dt;
  return g;
}

StateMatrix process_noise_cov(double q_s, double sample_interval) {
  const Eigen::Matrix<double, 4, 2> g = noise_gain(sample_interval);
  return q_s * g * g.transpose();
}

MotionModel TargetPlan::model_at(int t) const {
  for (const MotionSegment& seg : segments) {
    if (t >= seg.start_t && t < seg.end_t) return seg.model;
  }
  return MotionModel::ncv(sample_interval);
}

void TargetPlan::validate(int horizon) const {
  if (!initial_state.allFinite()) throw ConfigError("target plan: initial state must be finite");
  if (!(sample_interval > 0.0)) throw ConfigError("target plan: sample interval must be > 0");
  if (!(process_noise >= 0.0)) throw ConfigError("target plan: process noise must be >= 0");
  Eigen::LLT<StateMatrix> llt(initial_covariance);
  if (llt.info() != Eigen::Success || !initial_covariance.isApprox(initial_covariance.transpose())) {
    throw ConfigError("target plan: initial covariance must be symmetric positive definite");
  }
  std::vector<MotionSegment> sorted = segments;
  std::sort(sorted.begin(), sorted.end(),
            [](const MotionSegment& a, const MotionSegment& b) { return a.start_t < b.start_t; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const MotionSegment& seg = sorted[i];
    seg.model.validate();
    if (seg.model.sample_interval != sample_interval) {
      throw ConfigError("target plan: segment sample interval differs from the plan's");
    }
    if (seg.start_t < 0 || seg.end_t <= seg.start_t || seg.end_t > horizon + 1) {
      throw ConfigError("target plan: segment [" + std::to_string(seg.start_t) + ", " +
                        std::to_string(seg.end_t) + ") outside the horizon");
    }
    if (i > 0 && seg.start_t < sorted[i - 1].end_t) throw ConfigError("target plan: segments overlap");
  }
}

std::vector<StateVector> generate_truth(const TargetPlan& plan, int horizon, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);

  const StateMatrix chol = plan.initial_covariance.llt().matrixL();
  StateVector init_noise;
  for (int i = 0; i < 4; ++i) init_noise(i) = normal(rng);
  out.push_back(plan.initial_state + chol * init_noise);

  const Eigen::Matrix<double, 4, 2> g = noise_gain(plan.sample_interval);
  const double sd = std::sqrt(plan.process_noise);
  for (int t = 0; t < horizon; ++t) {
    Eigen::Vector2d w;
    w(0) = sd * normal(rng);
    w(1) = sd * normal(rng);
    out.push_back(transition(out.back(), plan.model_at(t)) + g * w);
  }
  return out;
}

}  // namespace mgcrb

#pragma once

#include "mgcrb/bpso.hpp"
#include "mgcrb/dynamics.hpp"
#include "mgcrb/geometry.hpp"
#include "mgcrb/policies.hpp"
#include "mgcrb/tracking.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mgcrb {

/// A complete, validated experiment description.
struct Scenario {
  std::string name = "scenario";
  RadarLayout layout;
  ScatterModel scatter;
  std::vector<TargetPlan> targets;
  std::vector<double> omega;  // target weights, on the simplex
  int horizon = 1000;
  double sample_interval = 1.0;
  int ms = 2;
  int ns = 3;

  // IMM model bank
  double turn_rate = 3.0 * 3.14159265358979323846 / 180.0;  // rad/s
  Eigen::MatrixXd model_transition;
  Eigen::VectorXd initial_model_prob;

  Mat2 sigma0 = Mat2::Identity();  // diag(range var m^2, azimuth var rad^2)
  PolicyParams policy_params;
  bpso::SwarmParams swarm;
  std::vector<PolicySpec> policies;

  int monte_carlo = 50;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  int num_targets() const { return static_cast<int>(targets.size()); }
  /// Model bank for target k (process noise matched to that target's plan).
  ModelBank model_bank(int k) const;
  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

}  // namespace mgcrb

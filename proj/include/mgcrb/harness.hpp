#pragma once

#include "mgcrb/scenario.hpp"
#include "mgcrb/sensing.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgcrb {

/// Independent RNG stream keyed by (master seed, trial, consumer name).
Rng make_stream(std::uint64_t master_seed, int trial, std::string_view consumer);

/// Per-step trace of one policy within one trial (index 0 is t = 1).
struct PolicyTrace {
  std::string name;
  std::vector<SuperArm> arms;
  std::vector<double> reward;             // expected reward of the chosen arm
  std::vector<double> cumulative_regret;
  std::vector<std::vector<double>> squared_error;  // [k][t], fused position error
  int divergences = 0;
};

struct TrialRecord {
  int trial = 0;
  std::vector<double> optimal_reward;
  std::vector<SuperArm> optimal_arms;
  std::vector<PolicyTrace> policies;
};

/// One measurement as seen by one policy; written to the per-trial debug CSV.
struct DebugRow {
  int t = 0;
  std::string policy;
  Measurement measurement;
  double sinr_sample = 0.0;
  double truth_x = 0.0;
  double truth_y = 0.0;
  double fused_x = 0.0;
  double fused_y = 0.0;
};

/// Runs every policy through the closed loop over one shared ground truth.
TrialRecord run_trial(const Scenario& scenario, std::span<const PolicySpec> policies, std::uint64_t master_seed,
                      int trial_index, std::vector<DebugRow>* debug = nullptr);

TrialRecord run_trial(const Scenario& scenario, const PolicySpec& policy, std::uint64_t master_seed,
                      int trial_index);

/// Fraction of steps where both selections are the identical super-arm.
double selection_agreement(std::span<const SuperArm> a, std::span<const SuperArm> b);

struct PolicyCurves {
  std::vector<double> mean_reward;
  std::vector<double> mean_cumulative_regret;
  std::vector<std::vector<double>> rmse;  // [k][t]
  std::vector<double> weighted_rmse;      // sum_k omega_k rmse_k(t)
};

struct PolicySummary {
  std::string name;
  std::vector<double> armse;  // per target
  double armse_weighted = 0.0;
  double armse_mean = 0.0;    // unweighted mean over targets
  double total_regret = 0.0;  // mean cumulative regret at T
  double asr = 0.0;           // agreement with the oracle's selections
  int divergences = 0;
  PolicyCurves curves;
};

struct RunSummary {
  std::string scenario;
  int trials = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> omega;
  std::vector<double> mean_optimal_reward;
  std::vector<PolicySummary> policies;
  double wall_clock_seconds = 0.0;

  const PolicySummary& policy(std::string_view name) const;
};

struct ExperimentOptions {
  int trials = 1;
  std::uint64_t seed = 1;
  int workers = 1;
  int debug_trials = 0;  // trials whose rows go to `debug`
  std::vector<std::vector<DebugRow>>* debug = nullptr;
};

RunSummary run_experiment(const Scenario& scenario, std::span<const PolicySpec> policies,
                          const ExperimentOptions& options);

}  // namespace mgcrb

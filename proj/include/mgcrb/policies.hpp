#pragma once

#include "mgcrb/bandit.hpp"
#include "mgcrb/bpso.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mgcrb {

enum class PolicyKind { best, mgcrbcl, ucb1, egreedy, fixed };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& text);

struct PolicySpec {
  std::string name;
  PolicyKind kind = PolicyKind::mgcrbcl;
  std::optional<SuperArm> fixed_arm;
};

/// Everything a policy may know about the selection problem itself.
struct SelectionProblem {
  const RadarLayout* layout = nullptr;
  const ScatterModel* scatter = nullptr;
  int ms = 0;
  int ns = 0;
  std::vector<double> omega;
  PolicyParams params;
  bpso::SwarmParams swarm;
  std::vector<SuperArm> feasible_arms;

  int num_targets() const { return static_cast<int>(omega.size()); }
};

/// Per-step information. Only the oracle reads `true_means`.
struct SelectionContext {
  int t = 1;
  std::span<const StateVector> predicted;  // one-step state predictions for time t
  std::span<const StateVector> estimated;  // fused estimates at t - 1
  std::span<const Eigen::MatrixXd> true_means;
};

class Policy {
 public:
  virtual ~Policy() = default;

  /// First SINR sample of every channel, one M x N matrix per target.
  virtual void warm_start(std::span<const Eigen::MatrixXd> /*samples*/) {}
  virtual SuperArm select(const SelectionContext& ctx, Rng& rng) = 0;
  /// Observations per target, in the arm's channel order.
  virtual void update(const SuperArm& /*arm*/, std::span<const std::vector<ArmObservation>> /*observations*/) {}
  virtual const std::vector<GroupState>* groups() const { return nullptr; }
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const SelectionProblem& problem);

}  // namespace mgcrb

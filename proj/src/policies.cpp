#include "mgcrb/policies.hpp"

namespace mgcrb {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::best: return "best";
    case PolicyKind::mgcrbcl: return "mgcrbcl";
    case PolicyKind::ucb1: return "ucb1";
    case PolicyKind::egreedy: return "egreedy";
    case PolicyKind::fixed: return "fixed";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& text) {
  if (text == "best") return PolicyKind::best;
  if (text == "mgcrbcl") return PolicyKind::mgcrbcl;
  if (text == "ucb1") return PolicyKind::ucb1;
  if (text == "egreedy") return PolicyKind::egreedy;
  if (text == "fixed") return PolicyKind::fixed;
  throw ConfigError("unknown policy kind '" + text + "'");
}

namespace {

class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const SelectionProblem& problem) : problem_(problem) {}

  SuperArm select(const SelectionContext& ctx, Rng&) override {
    return exhaustive_argmax(problem_.feasible_arms, ctx.true_means, problem_.omega).arm;
  }

 private:
  const SelectionProblem& problem_;
};

class FixedPolicy final : public Policy {
 public:
  explicit FixedPolicy(SuperArm arm) : arm_(std::move(arm)) {}
  SuperArm select(const SelectionContext&, Rng&) override { return arm_; }

 private:
  SuperArm arm_;
};

/// Shared bookkeeping for the group-based learners.
class GroupPolicy : public Policy {
 public:
  explicit GroupPolicy(const SelectionProblem& problem) : problem_(problem) {}

  void warm_start(std::span<const Eigen::MatrixXd> samples) override {
    groups_.clear();
    for (std::size_t k = 0; k < samples.size(); ++k) {
      groups_.push_back(GroupState::warm_start(samples[k], static_cast<int>(k)));
    }
  }

  const std::vector<GroupState>* groups() const override { return &groups_; }

 protected:
  void smooth_played(const SuperArm& arm, std::span<const std::vector<ArmObservation>> observations) {
    for (std::size_t k = 0; k < groups_.size(); ++k) {
      GroupState& g = groups_[k];
      for (const ArmObservation& o : observations[k]) {
        if (!arm.contains(o.channel)) throw ContractError("policy update: observation for an unselected arm");
        g.y_hat(o.channel.m, o.channel.n) =
            baseline_update(g.y_hat(o.channel.m, o.channel.n), o.sinr, true, problem_.params.baseline_smoothing);
        g.plays(o.channel.m, o.channel.n) += 1;
      }
    }
  }

  std::vector<Eigen::MatrixXd> estimates() const {
    std::vector<Eigen::MatrixXd> out;
    for (const GroupState& g : groups_) out.push_back(g.y_hat);
    return out;
  }

  const SelectionProblem& problem_;
  std::vector<GroupState> groups_;
  std::optional<SuperArm> last_arm_;
};

class ClosedLoopPolicy final : public GroupPolicy {
 public:
  using GroupPolicy::GroupPolicy;

  SuperArm select(const SelectionContext& ctx, Rng& rng) override {
    predictions_.clear();
    std::vector<Eigen::MatrixXd> indices;
    for (std::size_t k = 0; k < groups_.size(); ++k) {
      predictions_.push_back(predict_rewards(groups_[k], ctx.predicted[k], ctx.estimated[k], *problem_.layout,
                                             *problem_.scatter, problem_.params.prediction_blend));
      indices.push_back(ucb_index(predictions_.back(), groups_[k].plays, ctx.t, problem_.params.exploration));
    }
    const Eigen::MatrixXd fused = fuse_indices(indices, problem_.omega);
    last_arm_ = bpso::optimize(fused, problem_.ms, problem_.ns, problem_.swarm, rng, last_arm_);
    return *last_arm_;
  }

  void update(const SuperArm& arm, std::span<const std::vector<ArmObservation>> observations) override {
    for (std::size_t k = 0; k < groups_.size(); ++k) {
      groups_[k] = update_group(groups_[k], arm, observations[k], predictions_.at(k), problem_.params.fusion_weight);
    }
  }

 private:
  std::vector<Eigen::MatrixXd> predictions_;
};

class Ucb1Policy final : public GroupPolicy {
 public:
  using GroupPolicy::GroupPolicy;

  SuperArm select(const SelectionContext& ctx, Rng& rng) override {
    std::vector<Eigen::MatrixXd> indices;
    for (const GroupState& g : groups_) indices.push_back(ucb_index(g.y_hat, g.plays, ctx.t, problem_.params.exploration));
    const Eigen::MatrixXd fused = fuse_indices(indices, problem_.omega);
    last_arm_ = bpso::optimize(fused, problem_.ms, problem_.ns, problem_.swarm, rng, last_arm_);
    return *last_arm_;
  }

  void update(const SuperArm& arm, std::span<const std::vector<ArmObservation>> observations) override {
    smooth_played(arm, observations);
  }
};

class EpsilonGreedyPolicy final : public GroupPolicy {
 public:
  using GroupPolicy::GroupPolicy;

  SuperArm select(const SelectionContext&, Rng& rng) override {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < problem_.params.epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, problem_.feasible_arms.size() - 1);
      return problem_.feasible_arms[pick(rng)];
    }
    return exhaustive_argmax(problem_.feasible_arms, estimates(), problem_.omega).arm;
  }

  void update(const SuperArm& arm, std::span<const std::vector<ArmObservation>> observations) override {
    smooth_played(arm, observations);
  }
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const SelectionProblem& problem) {
  switch (spec.kind) {
    case PolicyKind::best: return std::make_unique<OraclePolicy>(problem);
    case PolicyKind::mgcrbcl: return std::make_unique<ClosedLoopPolicy>(problem);
    case PolicyKind::ucb1: return std::make_unique<Ucb1Policy>(problem);
    case PolicyKind::egreedy: return std::make_unique<EpsilonGreedyPolicy>(problem);
    case PolicyKind::fixed:
      if (!spec.fixed_arm || !spec.fixed_arm->is_feasible(problem.ms, problem.ns)) {
        throw ConfigError("policy '" + spec.name + "': fixed arm is missing or infeasible");
      }
      return std::make_unique<FixedPolicy>(*spec.fixed_arm);
  }
  throw ConfigError("unsupported policy kind");
}

}  // namespace mgcrb
